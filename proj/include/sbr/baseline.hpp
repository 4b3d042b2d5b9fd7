#pragma once

#include "sbr/signal.hpp"
#include "sbr/solver.hpp"

namespace sbr {

/// Discretized frequency dictionary: atoms e^{i omega_j t}/sqrt(#samples) with
/// omega_j on the L-times oversampled DFT grid (tensor grid in 2-D). Atoms
/// have unit l2 norm; the frame operator is L^rank * I.
struct GridDictionary {
    std::int64_t samples0 = 0; ///< samples along axis 0
    std::int64_t samples1 = 1; ///< samples along axis 1 (1 for 1-D)
    std::int64_t oversample = 4;

    std::int64_t grid0() const { return samples0 * oversample; }
    std::int64_t grid1() const { return samples1 == 1 ? 1 : samples1 * oversample; }
    std::size_t atoms() const { return static_cast<std::size_t>(grid0() * grid1()); }
};

struct LassoResult {
    Signal x_hat;
    std::vector<cplx> coeffs;
    double lambda = 0.0;     ///< sigma * sqrt(2 ln #samples)
    double objective = 0.0;  ///< 0.5 ||y - Phi c||^2 + lambda ||c||_1
    SolverResult solver;
};

/// Lasso program 0.5 ||y - Phi c||^2 + lambda ||c||_1 on the frequency grid,
/// lambda = sigma sqrt(2 ln n), solved by the proximal engine with FFT matvecs.
LassoResult lasso_denoise(const Signal& y, double sigma, std::int64_t oversample = 4,
                          const SolverOptions& opts = {});

/// Dictionary synthesis Phi c and analysis Phi^H y (exposed for tests).
std::vector<cplx> dictionary_synthesize(const GridDictionary& dict, std::span<const cplx> coeffs);
std::vector<cplx> dictionary_analyze(const GridDictionary& dict, std::span<const cplx> samples);

} // namespace sbr

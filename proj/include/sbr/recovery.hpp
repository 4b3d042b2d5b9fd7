#pragma once

#include <optional>
#include <vector>

#include "sbr/signal.hpp"
#include "sbr/solver.hpp"

namespace sbr {

/// Regularization rules for the penalized recovery: the theoretical level
/// 60 sigma^2 ln(63 n / alpha) and the experimental 2 sigma^2 ln(63 n / alpha).
enum class LambdaRule { theory, experiment };

double lambda_rule(std::int64_t n, double sigma, double alpha, LambdaRule which);

struct RecoveryConfig {
    enum class Mode { constrained, penalized };

    Mode mode = Mode::penalized;

    std::int64_t m = 8;    ///< filter order along axis 0 (support [0,m], or [-m,m] interpolating)
    std::int64_t m2 = -1;  ///< axis-1 order for 2-D inputs; -1 = same as m
    std::int64_t n = -1;   ///< fit-window length along axis 0: target [0,n]; -1 = 2m
    std::int64_t n2 = -1;  ///< axis-1 fit length for 2-D; -1 = 2*m2
    bool interpolating = false;

    double rho_bar = 1.0;  ///< constrained mode: spectral-l1 budget, must be >= 1
    double lambda = 0.0;   ///< penalized mode: explicit penalty level
    std::optional<LambdaRule> rule; ///< derive lambda from (sigma, alpha, #samples of y)
    double sigma = 0.0;
    double alpha = 0.1;

    std::int64_t block_size = 0; ///< blockwise: block side length; 0 = single block
    bool half_split = false;     ///< per-half-block causal/anticausal filters

    SolverOptions solver;
};

struct FitDiagnostics {
    double residual = 0.0;
    double spectral_l1 = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct RecoveryReport {
    Signal x_hat;
    Filter filter;            ///< fitted filter (first block's when blockwise)
    double spectral_l1 = 0.0; ///< rho_hat = sqrt(filter size) * ||phi||*_1 (max over fits)
    double residual = 0.0;    ///< ||y - phi*y||_2 over the fitted targets
    double imag_residual = 0.0; ///< max |Im x_hat|, diagnostic for real-valued inputs
    bool converged = false;
    SolverResult solver;      ///< first fit's solver diagnostics
    std::vector<FitDiagnostics> fits;
};

/// Least-squares data for fitting a filter on `support` to reproduce y on
/// `target`: variable is the filter's unitary DFT.
LeastSquaresSpec filter_fit_spec(const Signal& y, const Window& support, const Window& target);

RecoveryReport recover_constrained(const Signal& y, const RecoveryConfig& cfg);
RecoveryReport recover_constrained(const Signal& y, const RecoveryConfig& cfg, const Window& target);

RecoveryReport recover_penalized(const Signal& y, const RecoveryConfig& cfg);
RecoveryReport recover_penalized(const Signal& y, const RecoveryConfig& cfg, const Window& target);

/// Two-sided filter variant; y must cover the target dilated by m per axis.
RecoveryReport recover_interpolating(const Signal& y, const RecoveryConfig& cfg);
RecoveryReport recover_interpolating(const Signal& y, const RecoveryConfig& cfg, const Window& target);

/// Tiles the target into blocks and recovers each independently; with
/// half_split each block is covered by a causal fit for its right half and a
/// time-reversed causal fit for its left half (per axis in 2-D), so a block
/// of side 2m+1 needs no samples outside itself.
RecoveryReport recover_blockwise(const Signal& y, const RecoveryConfig& cfg);
RecoveryReport recover_blockwise(const Signal& y, const RecoveryConfig& cfg, const Window& target);

} // namespace sbr

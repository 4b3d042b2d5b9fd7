#include "sbr/baseline.hpp"

#include <cmath>
#include <stdexcept>

#include "sbr/fft.hpp"

namespace sbr {

std::vector<cplx> dictionary_synthesize(const GridDictionary& dict, std::span<const cplx> coeffs) {
    const std::int64_t g0 = dict.grid0(), g1 = dict.grid1();
    if (coeffs.size() != dict.atoms()) throw dimension_mismatch("dictionary_synthesize: coefficient size");
    auto full = fft::raw2(coeffs, g0, g1, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dict.samples0 * dict.samples1));
    std::vector<cplx> out(static_cast<std::size_t>(dict.samples0 * dict.samples1));
    for (std::int64_t r = 0; r < dict.samples0; ++r)
        for (std::int64_t c = 0; c < dict.samples1; ++c)
            out[static_cast<std::size_t>(r * dict.samples1 + c)] =
                scale * full[static_cast<std::size_t>(r * g1 + c)];
    return out;
}

std::vector<cplx> dictionary_analyze(const GridDictionary& dict, std::span<const cplx> samples) {
    const std::int64_t g0 = dict.grid0(), g1 = dict.grid1();
    if (samples.size() != static_cast<std::size_t>(dict.samples0 * dict.samples1))
        throw dimension_mismatch("dictionary_analyze: sample size");
    std::vector<cplx> padded(static_cast<std::size_t>(g0 * g1));
    for (std::int64_t r = 0; r < dict.samples0; ++r)
        for (std::int64_t c = 0; c < dict.samples1; ++c)
            padded[static_cast<std::size_t>(r * g1 + c)] =
                samples[static_cast<std::size_t>(r * dict.samples1 + c)];
    auto spec = fft::raw2(padded, g0, g1, -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dict.samples0 * dict.samples1));
    for (auto& v : spec) v *= scale;
    return spec;
}

LassoResult lasso_denoise(const Signal& y, double sigma, std::int64_t oversample, const SolverOptions& opts) {
    if (oversample < 1) throw std::invalid_argument("lasso_denoise: oversample must be >= 1");
    if (sigma < 0) throw std::invalid_argument("lasso_denoise: sigma must be >= 0");
    GridDictionary dict;
    dict.samples0 = y.window().extent(0);
    dict.samples1 = y.window().rank() == 2 ? y.window().extent(1) : 1;
    dict.oversample = oversample;

    LeastSquaresSpec spec;
    spec.dim = dict.atoms();
    spec.apply = [dict](std::span<const cplx> c) { return dictionary_synthesize(dict, c); };
    spec.apply_adjoint = [dict](std::span<const cplx> w) { return dictionary_analyze(dict, w); };
    spec.b.assign(y.values().begin(), y.values().end());

    const double n_samples = static_cast<double>(y.size());
    const double lambda = sigma * std::sqrt(2.0 * std::log(n_samples));

    SolverResult sol;
    if (oversample == 1) {
        // Orthogonal design (unitary scaled DFT): the program separates and the
        // solution is the exact soft-threshold of the analysis coefficients.
        sol.f_hat = prox_complex_l1(dictionary_analyze(dict, spec.b), lambda);
        sol.converged = true;
        sol.status = "orthogonal closed form";
        sol.objective = least_squares_objective(spec, sol.f_hat);
        for (const auto& v : sol.f_hat) sol.objective += 2.0 * lambda * std::abs(v);
        sol.objective_trace.push_back(sol.objective);
    } else {
        SolverOptions o = opts;
        if (o.lipschitz <= 0) {
            // Tight-frame operator norm: ||Phi||^2 = L per axis.
            o.lipschitz = static_cast<double>(oversample);
            if (dict.samples1 > 1) o.lipschitz *= static_cast<double>(oversample);
        }
        // Solver objective ||b-Ac||^2 + t||c||_1 matches 2x the lasso program at t = 2 lambda.
        sol = solve_penalized(spec, 2.0 * lambda, o);
    }

    LassoResult res;
    res.lambda = lambda;
    res.coeffs = sol.f_hat;
    auto fitted = dictionary_synthesize(dict, res.coeffs);
    res.x_hat = Signal(y.window(), std::move(fitted));
    double fit = 0;
    for (std::size_t i = 0; i < spec.b.size(); ++i) fit += std::norm(res.x_hat.values()[i] - spec.b[i]);
    double l1 = 0;
    for (const auto& v : res.coeffs) l1 += std::abs(v);
    res.objective = 0.5 * fit + lambda * l1;
    res.solver = std::move(sol);
    return res;
}

} // namespace sbr

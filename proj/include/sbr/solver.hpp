#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbr/signal.hpp"

namespace sbr {

/// Least-squares data for min ||b - A f||_2^2 over complex f, with A given as
/// a matvec/adjoint pair (matrix-free). The recovery module builds A as a
/// Toeplitz operator composed with the inverse DFT so that f is the filter's
/// spectrum and the l1 geometry is coordinate-separable.
struct LeastSquaresSpec {
    std::function<std::vector<cplx>(std::span<const cplx>)> apply;
    std::function<std::vector<cplx>(std::span<const cplx>)> apply_adjoint;
    std::vector<cplx> b;
    std::size_t dim = 0;
};

struct SolverOptions {
    int max_iters = 5000;
    double tol_rel_obj = 1e-8;
    double tol_gap = 1e-6;
    double lipschitz = 0.0; ///< Lipschitz bound for ||A||^2; 0 = estimate by power iteration
    int power_iters = 50;
    double safety = 1.05;
    bool adaptive_restart = true;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SolverResult {
    std::vector<cplx> f_hat;
    std::vector<double> objective_trace; ///< best-so-far objective per iteration
    double objective = 0.0;
    double certificate = 0.0; ///< fixed-point residual of the projected/proximal step
    int iterations = 0;
    bool converged = false;
    std::string status;
};

/// Euclidean projection onto {w : ||w||_1 <= radius} over complex vectors:
/// phases kept, magnitudes soft-thresholded at the exact level found by the
/// sort-based method.
std::vector<cplx> project_complex_l1_ball(std::span<const cplx> z, double radius);

/// prox of tau*||.||_1: w_k = z_k max(0, 1 - tau/|z_k|).
std::vector<cplx> prox_complex_l1(std::span<const cplx> z, double tau);

/// ||A||^2 estimate by power iteration on A^H A (deterministic start vector).
double estimate_lipschitz(const std::function<std::vector<cplx>(std::span<const cplx>)>& apply,
                          const std::function<std::vector<cplx>(std::span<const cplx>)>& apply_adjoint,
                          std::size_t dim, int iters = 50);

double least_squares_objective(const LeastSquaresSpec& spec, std::span<const cplx> f);

/// Accelerated projected gradient for min ||b-Af||^2 s.t. ||f||_1 <= radius.
SolverResult solve_constrained(const LeastSquaresSpec& spec, double radius, const SolverOptions& opts = {});

/// Accelerated proximal gradient for min ||b-Af||^2 + lambda_eff ||f||_1.
SolverResult solve_penalized(const LeastSquaresSpec& spec, double lambda_eff, const SolverOptions& opts = {});

} // namespace sbr

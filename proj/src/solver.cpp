#include "sbr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sbr {

namespace {

double l1_norm(std::span<const cplx> z) {
    double s = 0;
    for (const auto& v : z) s += std::abs(v);
    return s;
}

double l2_norm(std::span<const cplx> z) {
    double s = 0;
    for (const auto& v : z) s += std::norm(v);
    return std::sqrt(s);
}

std::vector<cplx> axpy(std::span<const cplx> x, std::span<const cplx> y, double a) {
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
    return out;
}

// Gradient of ||b - A f||^2 is 2 A^H (A f - b).
std::vector<cplx> ls_gradient(const LeastSquaresSpec& spec, std::span<const cplx> f, double& obj_out) {
    auto r = spec.apply(f);
    double obj = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= spec.b[i];
        obj += std::norm(r[i]);
    }
    obj_out = obj;
    auto g = spec.apply_adjoint(r);
    for (auto& v : g) v *= 2.0;
    return g;
}

} // namespace

std::vector<cplx> project_complex_l1_ball(std::span<const cplx> z, double radius) {
    if (radius < 0) throw std::invalid_argument("project_complex_l1_ball: negative radius");
    std::vector<cplx> out(z.begin(), z.end());
    if (radius == 0) {
        std::fill(out.begin(), out.end(), cplx{});
        return out;
    }
    std::vector<double> mags(z.size());
    double total = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        mags[i] = std::abs(z[i]);
        total += mags[i];
    }
    if (total <= radius) return out;

    // Exact threshold on the magnitudes: sort descending, then
    // t = (prefix_sum - radius)/k for the last k with mags_(k) > t.
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double prefix = 0, theta = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        prefix += sorted[k];
        const double cand = (prefix - radius) / static_cast<double>(k + 1);
        if (cand < sorted[k]) theta = cand;
        else break;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double m = mags[i];
        if (m <= theta)
            out[i] = cplx{};
        else
            out[i] *= (m - theta) / m;
    }
    return out;
}

std::vector<cplx> prox_complex_l1(std::span<const cplx> z, double tau) {
    if (tau < 0) throw std::invalid_argument("prox_complex_l1: negative tau");
    std::vector<cplx> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double m = std::abs(z[i]);
        out[i] = (m > tau) ? z[i] * ((m - tau) / m) : cplx{};
    }
    return out;
}

double estimate_lipschitz(const std::function<std::vector<cplx>(std::span<const cplx>)>& apply,
                          const std::function<std::vector<cplx>(std::span<const cplx>)>& apply_adjoint,
                          std::size_t dim, int iters) {
    if (dim == 0) return 0.0;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss;
    std::vector<cplx> v(dim);
    for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
    double nv = l2_norm(v);
    if (nv == 0) return 0.0;
    for (auto& x : v) x /= nv;

    double lam = 0;
    for (int it = 0; it < iters; ++it) {
        auto av = apply(v);
        lam = 0;
        for (const auto& x : av) lam += std::norm(x); // Rayleigh quotient of A^H A
        auto w = apply_adjoint(av);
        const double nw = l2_norm(w);
        if (nw == 0) return 0.0;
        for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / nw;
    }
    return lam;
}

double least_squares_objective(const LeastSquaresSpec& spec, std::span<const cplx> f) {
    auto r = spec.apply(f);
    double obj = 0;
    for (std::size_t i = 0; i < r.size(); ++i) obj += std::norm(r[i] - spec.b[i]);
    return obj;
}

namespace {

// Shared FISTA loop; `step` maps (point, inverse-step) to the projected or
// proximal update, `penalty` evaluates the nonsmooth term.
SolverResult accelerated_solve(const LeastSquaresSpec& spec, const SolverOptions& opts,
                               const std::function<std::vector<cplx>(std::span<const cplx>, double)>& step,
                               const std::function<double(std::span<const cplx>)>& penalty) {
    SolverResult res;
    res.f_hat.assign(spec.dim, cplx{});

    double L2 = opts.lipschitz > 0 ? opts.lipschitz
                                   : estimate_lipschitz(spec.apply, spec.apply_adjoint, spec.dim, opts.power_iters);
    if (L2 <= 0) {
        // Zero operator: any feasible point has the same fit; return 0.
        res.f_hat = step(std::vector<cplx>(spec.dim, cplx{}), 1.0);
        res.objective = least_squares_objective(spec, res.f_hat) + penalty(res.f_hat);
        res.objective_trace.push_back(res.objective);
        res.converged = true;
        res.status = "zero operator";
        return res;
    }
    const double L = 2.0 * L2 * opts.safety; // gradient Lipschitz constant of ||b-Af||^2

    std::vector<cplx> f(spec.dim, cplx{});
    std::vector<cplx> z = f;
    double t = 1.0;
    double obj_f = least_squares_objective(spec, f) + penalty(f);
    double best = obj_f;
    std::vector<cplx> best_f = f;
    res.objective_trace.push_back(best);

    double prev_obj = obj_f;
    for (int k = 1; k <= opts.max_iters; ++k) {
        if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) {
            res.status = "timeout";
            break;
        }
        double h_z = 0;
        auto g = ls_gradient(spec, z, h_z);
        auto f_new = step(axpy(z, g, -1.0 / L), L);
        const double obj_new = least_squares_objective(spec, f_new) + penalty(f_new);

        if (opts.adaptive_restart && obj_new > obj_f) {
            // Momentum overshoot: restart from the last iterate.
            z = f;
            t = 1.0;
            double h_f = 0;
            auto gf = ls_gradient(spec, f, h_f);
            f_new = step(axpy(f, gf, -1.0 / L), L);
            const double obj_restart = least_squares_objective(spec, f_new) + penalty(f_new);
            const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            z = axpy(f_new, axpy(f_new, f, -1.0), (t - 1.0) / t_new);
            t = t_new;
            prev_obj = obj_f;
            f = std::move(f_new);
            obj_f = obj_restart;
        } else {
            const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            z = axpy(f_new, axpy(f_new, f, -1.0), (t - 1.0) / t_new);
            t = t_new;
            prev_obj = obj_f;
            f = std::move(f_new);
            obj_f = obj_new;
        }

        if (obj_f < best) {
            best = obj_f;
            best_f = f;
        }
        res.objective_trace.push_back(best);
        res.iterations = k;

        const double rel = std::abs(prev_obj - obj_f) / std::max(1.0, std::abs(obj_f));
        if (rel < opts.tol_rel_obj) {
            // Projected-gradient norm L ||f - step(f - grad/L)|| at the best iterate.
            double h_f = 0;
            auto gf = ls_gradient(spec, best_f, h_f);
            auto fp = step(axpy(best_f, gf, -1.0 / L), L);
            double cert = 0;
            for (std::size_t i = 0; i < fp.size(); ++i) cert += std::norm(fp[i] - best_f[i]);
            cert = L * std::sqrt(cert);
            res.certificate = cert;
            if (cert < opts.tol_gap * (1.0 + l2_norm(best_f))) {
                res.converged = true;
                res.status = "converged";
                break;
            }
        }
    }
    if (!res.converged && res.status.empty()) res.status = "max iterations";
    res.f_hat = std::move(best_f);
    res.objective = best;
    if (res.certificate == 0 && !res.converged) {
        double h_f = 0;
        auto gf = ls_gradient(spec, res.f_hat, h_f);
        auto fp = step(axpy(res.f_hat, gf, -1.0 / L), L);
        double cert = 0;
        for (std::size_t i = 0; i < fp.size(); ++i) cert += std::norm(fp[i] - res.f_hat[i]);
        res.certificate = L * std::sqrt(cert);
    }
    return res;
}

} // namespace

SolverResult solve_constrained(const LeastSquaresSpec& spec, double radius, const SolverOptions& opts) {
    if (radius < 0) throw std::invalid_argument("solve_constrained: negative radius");
    auto step = [radius](std::span<const cplx> p, double) { return project_complex_l1_ball(p, radius); };
    auto penalty = [](std::span<const cplx>) { return 0.0; };
    return accelerated_solve(spec, opts, step, penalty);
}

SolverResult solve_penalized(const LeastSquaresSpec& spec, double lambda_eff, const SolverOptions& opts) {
    if (lambda_eff < 0) throw std::invalid_argument("solve_penalized: negative penalty");
    auto step = [lambda_eff](std::span<const cplx> p, double L) { return prox_complex_l1(p, lambda_eff / L); };
    auto penalty = [lambda_eff](std::span<const cplx> f) { return lambda_eff * l1_norm(f); };
    return accelerated_solve(spec, opts, step, penalty);
}

} // namespace sbr

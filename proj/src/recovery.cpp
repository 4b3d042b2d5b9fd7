#include "sbr/recovery.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

#include "sbr/spectrum.hpp"

namespace sbr {

namespace {

Window default_target(const Signal& y, const RecoveryConfig& cfg) {
    const std::int64_t n = cfg.n >= 0 ? cfg.n : 2 * cfg.m;
    if (y.window().rank() == 1) return Window::line(0, n);
    const std::int64_t m2 = cfg.m2 >= 0 ? cfg.m2 : cfg.m;
    const std::int64_t n2 = cfg.n2 >= 0 ? cfg.n2 : 2 * m2;
    return Window::rect(0, n, 0, n2);
}

Window filter_support(const Signal& y, const RecoveryConfig& cfg) {
    const std::int64_t m = cfg.m;
    if (y.window().rank() == 1)
        return cfg.interpolating ? Window::line(-m, m) : Window::line(0, m);
    const std::int64_t m2 = cfg.m2 >= 0 ? cfg.m2 : cfg.m;
    return cfg.interpolating ? Window::rect(-m, m, -m2, m2) : Window::rect(0, m, 0, m2);
}

double effective_lambda(const Signal& y, const RecoveryConfig& cfg) {
    if (cfg.rule) return lambda_rule(static_cast<std::int64_t>(y.size()), cfg.sigma, cfg.alpha, *cfg.rule);
    if (cfg.lambda < 0) throw std::invalid_argument("recover: lambda must be >= 0");
    return cfg.lambda;
}

Filter spectrum_to_filter(const Window& support, const std::vector<cplx>& f_hat) {
    SpectralVector f;
    f.values = f_hat;
    f.n0 = support.extent(0);
    f.n1 = support.rank() == 2 ? support.extent(1) : 1;
    return Filter(support, idft(f));
}

struct FitOutcome {
    Filter filter;
    SolverResult solver;
    double residual = 0.0;
    double spectral_l1 = 0.0;
};

FitOutcome fit_filter(const Signal& y, const Window& support, const Window& target,
                      const RecoveryConfig& cfg) {
    if (cfg.mode == RecoveryConfig::Mode::constrained && cfg.rho_bar < 1.0)
        throw std::invalid_argument("recover: constrained mode needs rho_bar >= 1");
    const double lambda = cfg.mode == RecoveryConfig::Mode::penalized ? effective_lambda(y, cfg) : 0.0;

    LeastSquaresSpec spec = filter_fit_spec(y, support, target);
    const double root_dim = std::sqrt(static_cast<double>(spec.dim));

    SolverResult sol;
    if (cfg.mode == RecoveryConfig::Mode::constrained)
        sol = solve_constrained(spec, cfg.rho_bar / root_dim, cfg.solver);
    else
        sol = solve_penalized(spec, lambda * root_dim, cfg.solver);

    FitOutcome out;
    double l1 = 0;
    for (const auto& v : sol.f_hat) l1 += std::abs(v);
    out.spectral_l1 = root_dim * l1; // rho_hat = sqrt(dim) ||phi||*_1 = sqrt(dim) ||f||_1
    out.residual = std::sqrt(least_squares_objective(spec, sol.f_hat));
    out.filter = spectrum_to_filter(support, sol.f_hat);
    out.solver = std::move(sol);
    return out;
}

RecoveryReport single_fit_report(const Signal& y, const Window& support, const Window& target,
                                 const RecoveryConfig& cfg) {
    FitOutcome fit = fit_filter(y, support, target, cfg);
    RecoveryReport rep;
    rep.x_hat = convolve(fit.filter, y, target);
    rep.filter = std::move(fit.filter);
    rep.spectral_l1 = fit.spectral_l1;
    rep.residual = fit.residual;
    rep.converged = fit.solver.converged;
    rep.fits.push_back({fit.residual, fit.spectral_l1, fit.solver.converged, fit.solver.iterations});
    rep.solver = std::move(fit.solver);
    for (const auto& v : rep.x_hat.values())
        rep.imag_residual = std::max(rep.imag_residual, std::abs(v.imag()));
    return rep;
}

Signal reversed(const Signal& s, bool ax0, bool ax1) {
    const Window& w = s.window();
    Window rw = w;
    if (w.rank() == 1) {
        if (ax0) rw = Window::line(-w.hi(0), -w.lo(0));
    } else {
        rw = Window::rect(ax0 ? -w.hi(0) : w.lo(0), ax0 ? -w.lo(0) : w.hi(0),
                          ax1 ? -w.hi(1) : w.lo(1), ax1 ? -w.lo(1) : w.hi(1));
    }
    Signal out(rw);
    if (w.rank() == 1) {
        for (std::int64_t t = w.lo(); t <= w.hi(); ++t) out(ax0 ? -t : t) = s(t);
    } else {
        for (std::int64_t r = w.lo(0); r <= w.hi(0); ++r)
            for (std::int64_t c = w.lo(1); c <= w.hi(1); ++c)
                out(ax0 ? -r : r, ax1 ? -c : c) = s(r, c);
    }
    return out;
}

std::vector<Window> tile(const Window& target, std::int64_t block) {
    std::vector<Window> out;
    if (block <= 0) {
        out.push_back(target);
        return out;
    }
    if (target.rank() == 1) {
        for (std::int64_t a = target.lo(); a <= target.hi(); a += block)
            out.push_back(Window::line(a, std::min(a + block - 1, target.hi())));
    } else {
        for (std::int64_t r = target.lo(0); r <= target.hi(0); r += block)
            for (std::int64_t c = target.lo(1); c <= target.hi(1); c += block)
                out.push_back(Window::rect(r, std::min(r + block - 1, target.hi(0)),
                                           c, std::min(c + block - 1, target.hi(1))));
    }
    return out;
}

/// Halves of an interval: [lo, lo+h-1] (may be empty for length 1) and
/// [lo+h, hi], with h = len/2.
struct Halves {
    std::optional<Window> left;
    Window right;
};

Halves split_line(std::int64_t lo, std::int64_t hi) {
    const std::int64_t h = (hi - lo + 1) / 2;
    Halves out{std::nullopt, Window::line(lo + h, hi)};
    if (h >= 1) out.left = Window::line(lo, lo + h - 1);
    return out;
}

} // namespace

double lambda_rule(std::int64_t n, double sigma, double alpha, LambdaRule which) {
    if (n < 1) throw std::invalid_argument("lambda_rule: n must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("lambda_rule: alpha must be in (0,1]");
    if (sigma < 0) throw std::invalid_argument("lambda_rule: sigma must be >= 0");
    const double logterm = std::log(63.0 * static_cast<double>(n) / alpha);
    const double c = (which == LambdaRule::theory) ? 60.0 : 2.0;
    return c * sigma * sigma * logterm;
}

LeastSquaresSpec filter_fit_spec(const Signal& y, const Window& support, const Window& target) {
    auto op = std::make_shared<ConvolutionOperator>(ConvolutionOperator::toeplitz(y, support, target));
    const std::int64_t s0 = support.extent(0);
    const std::int64_t s1 = support.rank() == 2 ? support.extent(1) : 1;

    LeastSquaresSpec spec;
    spec.dim = support.size();
    spec.apply = [op, s0, s1](std::span<const cplx> f) {
        SpectralVector sv;
        sv.values.assign(f.begin(), f.end());
        sv.n0 = s0;
        sv.n1 = s1;
        return op->matvec(idft(sv));
    };
    spec.apply_adjoint = [op, s0, s1](std::span<const cplx> w) {
        auto v = op->rmatvec(w);
        if (s1 == 1) return dft(std::span<const cplx>(v)).values;
        return dft2(v, s0, s1).values;
    };
    const Signal b = y.restricted(target);
    spec.b.assign(b.values().begin(), b.values().end());
    return spec;
}

RecoveryReport recover_constrained(const Signal& y, const RecoveryConfig& cfg) {
    return recover_constrained(y, cfg, default_target(y, cfg));
}

RecoveryReport recover_constrained(const Signal& y, const RecoveryConfig& cfg, const Window& target) {
    RecoveryConfig c = cfg;
    c.mode = RecoveryConfig::Mode::constrained;
    c.interpolating = false;
    return single_fit_report(y, filter_support(y, c), target, c);
}

RecoveryReport recover_penalized(const Signal& y, const RecoveryConfig& cfg) {
    return recover_penalized(y, cfg, default_target(y, cfg));
}

RecoveryReport recover_penalized(const Signal& y, const RecoveryConfig& cfg, const Window& target) {
    RecoveryConfig c = cfg;
    c.mode = RecoveryConfig::Mode::penalized;
    c.interpolating = false;
    return single_fit_report(y, filter_support(y, c), target, c);
}

RecoveryReport recover_interpolating(const Signal& y, const RecoveryConfig& cfg) {
    return recover_interpolating(y, cfg, default_target(y, cfg));
}

RecoveryReport recover_interpolating(const Signal& y, const RecoveryConfig& cfg, const Window& target) {
    RecoveryConfig c = cfg;
    c.interpolating = true;
    return single_fit_report(y, filter_support(y, c), target, c);
}

RecoveryReport recover_blockwise(const Signal& y, const RecoveryConfig& cfg) {
    return recover_blockwise(y, cfg, default_target(y, cfg));
}

RecoveryReport recover_blockwise(const Signal& y, const RecoveryConfig& cfg, const Window& target) {
    const auto blocks = tile(target, cfg.block_size);
    RecoveryReport rep;
    rep.x_hat = Signal(target);

    auto absorb = [&rep](const RecoveryReport& sub, const Window& dest, const Signal& values) {
        if (rep.fits.empty()) {
            rep.filter = sub.filter;
            rep.solver = sub.solver;
            rep.converged = true;
        }
        for (const auto& f : sub.fits) rep.fits.push_back(f);
        rep.converged = rep.converged && sub.converged;
        rep.spectral_l1 = std::max(rep.spectral_l1, sub.spectral_l1);
        rep.residual = std::hypot(rep.residual, sub.residual);
        if (dest.rank() == 1) {
            for (std::int64_t t = dest.lo(); t <= dest.hi(); ++t) rep.x_hat(t) = values.at(t);
        } else {
            for (std::int64_t r = dest.lo(0); r <= dest.hi(0); ++r)
                for (std::int64_t c = dest.lo(1); c <= dest.hi(1); ++c) rep.x_hat(r, c) = values.at(r, c);
        }
    };

    // Every (block, part) fit is independent; they run concurrently and are
    // absorbed in a fixed order, so scheduling cannot change the result.
    struct Task {
        Window dest;
        std::function<std::pair<RecoveryReport, Signal>()> run;
    };
    std::vector<Task> tasks;

    const int rank = target.rank();
    for (const auto& block : blocks) {
        if (!cfg.half_split) {
            tasks.push_back({block, [&, block] {
                RecoveryReport sub = cfg.interpolating
                    ? recover_interpolating(y, cfg, block)
                    : (cfg.mode == RecoveryConfig::Mode::constrained
                           ? recover_constrained(y, cfg, block)
                           : recover_penalized(y, cfg, block));
                Signal vals = sub.x_hat;
                return std::make_pair(std::move(sub), std::move(vals));
            }});
            continue;
        }

        // Half-split: right parts are fit causally, left parts on the
        // time-reversed data; 2-D blocks split into quadrants. The fit covers
        // every block index whose causal footprint stays inside the
        // observations; the filter is applied to its half only.
        struct Part {
            Window dest;
            bool rev0, rev1;
        };
        std::vector<Part> parts;
        if (rank == 1) {
            const Halves h = split_line(block.lo(), block.hi());
            parts.push_back({h.right, false, false});
            if (h.left) parts.push_back({*h.left, true, false});
        } else {
            const Halves h0 = split_line(block.lo(0), block.hi(0));
            const Halves h1 = split_line(block.lo(1), block.hi(1));
            parts.push_back({Window::rect(h0.right.lo(), h0.right.hi(), h1.right.lo(), h1.right.hi()), false, false});
            if (h1.left)
                parts.push_back({Window::rect(h0.right.lo(), h0.right.hi(), h1.left->lo(), h1.left->hi()), false, true});
            if (h0.left)
                parts.push_back({Window::rect(h0.left->lo(), h0.left->hi(), h1.right.lo(), h1.right.hi()), true, false});
            if (h0.left && h1.left)
                parts.push_back({Window::rect(h0.left->lo(), h0.left->hi(), h1.left->lo(), h1.left->hi()), true, true});
        }
        for (const auto& part : parts) {
            tasks.push_back({part.dest, [&, block, part] {
                const Signal yr = reversed(y, part.rev0, part.rev1);
                auto map_window = [&](const Window& w) {
                    if (rank == 1) return part.rev0 ? Window::line(-w.hi(), -w.lo()) : w;
                    return Window::rect(part.rev0 ? -w.hi(0) : w.lo(0), part.rev0 ? -w.lo(0) : w.hi(0),
                                        part.rev1 ? -w.hi(1) : w.lo(1), part.rev1 ? -w.lo(1) : w.hi(1));
                };
                const Window dest_r = map_window(part.dest);
                const Window block_r = map_window(block);

                RecoveryConfig cc = cfg;
                cc.interpolating = false;
                const Window support = filter_support(yr, cc);
                Window fit = block_r;
                for (int a = 0; a < rank; ++a) {
                    const std::int64_t lo = std::max(block_r.lo(a), yr.window().lo(a) + support.hi(a));
                    if (lo > block_r.hi(a))
                        throw missing_data_error("blockwise: filter order " +
                                                 std::to_string(support.hi(a)) +
                                                 " leaves no feasible fit targets in block " + block.str());
                    fit = rank == 1 ? Window::line(lo, block_r.hi(0))
                                    : (a == 0 ? Window::rect(lo, block_r.hi(0), fit.lo(1), fit.hi(1))
                                              : Window::rect(fit.lo(0), fit.hi(0), lo, block_r.hi(1)));
                }
                FitOutcome out = fit_filter(yr, support, fit, cc);
                Signal xh = reversed(convolve(out.filter, yr, dest_r), part.rev0, part.rev1);

                RecoveryReport sub;
                sub.filter = std::move(out.filter);
                sub.spectral_l1 = out.spectral_l1;
                sub.residual = out.residual;
                sub.converged = out.solver.converged;
                sub.fits.push_back(
                    {out.residual, out.spectral_l1, out.solver.converged, out.solver.iterations});
                sub.solver = std::move(out.solver);
                return std::make_pair(std::move(sub), std::move(xh));
            }});
        }
    }

    if (tasks.size() == 1) {
        auto [sub, vals] = tasks.front().run();
        absorb(sub, tasks.front().dest, vals);
    } else {
        std::vector<std::optional<std::pair<RecoveryReport, Signal>>> done(tasks.size());
        std::vector<std::exception_ptr> errors(tasks.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    done[i] = tasks[i].run();
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        const unsigned pool = std::min<std::size_t>(
            tasks.size(), std::max(1u, std::thread::hardware_concurrency()));
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < pool; ++w) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (errors[i]) std::rethrow_exception(errors[i]);
            absorb(done[i]->first, tasks[i].dest, done[i]->second);
        }
    }
    for (const auto& v : rep.x_hat.values())
        rep.imag_residual = std::max(rep.imag_residual, std::abs(v.imag()));
    return rep;
}

} // namespace sbr

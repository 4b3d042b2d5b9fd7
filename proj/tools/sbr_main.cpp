#include <CLI11.hpp>

#include <chrono>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sbr/baseline.hpp"
#include "sbr/bench.hpp"
#include "sbr/csv_io.hpp"
#include "sbr/oracle.hpp"
#include "sbr/recovery.hpp"
#include "sbr/signals.hpp"
#include "sbr/spectrum.hpp"

namespace {

using sbr::cplx;

std::vector<cplx> parse_complex_list(const std::string& text) {
    // comma-separated entries, each "a", "bi"/"bj", or "a+bi"/"a-bi"; "i" alone = 1i
    std::vector<cplx> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::erase_if(tok, [](char c) { return c == ' '; });
        if (tok.empty()) throw std::invalid_argument("empty entry in complex list");
        double re = 0, im = 0;
        char* end = nullptr;
        const bool has_i = tok.back() == 'i' || tok.back() == 'j';
        if (!has_i) {
            re = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size()) throw std::invalid_argument("bad number: " + tok);
        } else {
            std::string body = tok.substr(0, tok.size() - 1);
            // split at the last +/- that is not an exponent sign or leading
            std::size_t split = std::string::npos;
            for (std::size_t i = body.size(); i-- > 1;) {
                if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
                    split = i;
                    break;
                }
            }
            std::string im_part = split == std::string::npos ? body : body.substr(split);
            if (split != std::string::npos) {
                const std::string re_part = body.substr(0, split);
                re = std::strtod(re_part.c_str(), &end);
                if (end != re_part.c_str() + re_part.size()) throw std::invalid_argument("bad number: " + tok);
            }
            if (im_part.empty() || im_part == "+") im = 1;
            else if (im_part == "-") im = -1;
            else {
                im = std::strtod(im_part.c_str(), &end);
                if (end != im_part.c_str() + im_part.size()) throw std::invalid_argument("bad number: " + tok);
            }
        }
        out.emplace_back(re, im);
    }
    return out;
}

int cmd_gen(const std::string& scenario, std::int64_t n, std::int64_t grid_m, int spikes,
            double separation, double beta, std::uint64_t seed, double snr, bool real_output,
            const std::string& out, const std::string& observed_out) {
    sbr::ScenarioSpec spec;
    spec.name = sbr::ScenarioSpec::name_from_string(scenario);
    spec.n = n;
    spec.grid_m = grid_m;
    spec.spikes = spikes;
    if (separation > 0) spec.separation = separation;
    spec.beta = beta;
    spec.seed = seed;
    spec.real_output = real_output;
    const sbr::Signal x = sbr::generate(spec);
    sbr::write_signal_csv(out, x);
    if (!observed_out.empty()) {
        const auto obs = sbr::observe(x, sbr::NoiseModel::Kind::complex_standard, snr,
                                      sbr::mix_seed(seed, 0xabcdef12u));
        sbr::write_signal_csv(observed_out, obs.y);
        std::cout << "sigma=" << obs.sigma << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive l1-spectral filter denoising toolkit"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a scenario signal (and optional noisy observation)");
    std::string g_scenario = "random_spikes", g_out = "signal.csv", g_observed;
    std::int64_t g_n = 100, g_grid = 40;
    int g_spikes = 4;
    double g_sep = -1, g_beta = 2, g_snr = 8;
    std::uint64_t g_seed = 0;
    bool g_real = false;
    gen->add_option("--scenario", g_scenario,
                    "random_spikes|coherent_spikes|random_spikes_2d|coherent_spikes_2d|dimension_reduction_2d");
    gen->add_option("--n", g_n, "1-D sample count");
    gen->add_option("--grid-m", g_grid, "2-D grid side");
    gen->add_option("--spikes", g_spikes, "number of oscillations");
    gen->add_option("--separation", g_sep, "coherent pair separation factor");
    gen->add_option("--beta", g_beta, "single-index smoothness");
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--snr", g_snr, "SNR for --observed output");
    gen->add_flag("--real", g_real, "real-valued output (real part, renormalized)");
    gen->add_option("--out", g_out, "ground-truth CSV path")->required();
    gen->add_option("--observed", g_observed, "also write a noisy observation CSV");

    // ---- denoise ----
    auto* den = app.add_subcommand("denoise", "recover a signal from a noisy observation CSV");
    std::string d_input, d_output = "denoised.csv", d_mode = "penalized", d_lambda_rule, d_method = "filter";
    std::int64_t d_m = -1, d_n = -1, d_block = 0, d_oversample = 4;
    double d_rho = 2.0, d_lambda = -1, d_sigma = 0, d_alpha = 0.1;
    bool d_interp = false, d_half_split = false;
    int d_max_iters = 5000;
    den->add_option("--input", d_input, "observation CSV")->required();
    den->add_option("--output", d_output, "recovered signal CSV");
    den->add_option("--method", d_method, "filter|lasso");
    den->add_option("--mode", d_mode, "constrained|penalized");
    den->add_option("--m", d_m, "filter order (default: half the window)");
    den->add_option("--n", d_n, "fit-window length for one-shot causal recovery");
    den->add_option("--rho-bar", d_rho, "constrained spectral-l1 budget");
    den->add_option("--lambda", d_lambda, "penalty level");
    den->add_option("--lambda-rule", d_lambda_rule, "theory|experiment");
    den->add_option("--sigma", d_sigma, "noise level (required for rules and lasso)");
    den->add_option("--alpha", d_alpha, "confidence level for lambda rules");
    den->add_option("--block-size", d_block, "blockwise recovery block side");
    den->add_flag("--interpolating", d_interp, "two-sided filter support");
    den->add_flag("--half-split", d_half_split, "per-half-block causal/anticausal filters");
    den->add_option("--oversample", d_oversample, "lasso frequency-grid oversampling");
    den->add_option("--max-iters", d_max_iters, "solver iteration cap");

    // ---- oracle ----
    auto* orc = app.add_subcommand("oracle", "build a reproducing filter for a difference equation");
    std::string o_poly, o_roots, o_out = "oracle_filter.csv";
    std::int64_t o_m = 64;
    double o_root_tol = 1e-8;
    orc->add_option("--poly", o_poly, "characteristic coefficients p0,p1,... (p0 = 1)");
    orc->add_option("--roots", o_roots, "unit-circle roots, e.g. '1,i,-1'");
    orc->add_option("--m", o_m, "filter order");
    orc->add_option("--root-tol", o_root_tol, "unit-circle tolerance");
    orc->add_option("--out", o_out, "filter CSV path");

    // ---- bench ----
    auto* ben = app.add_subcommand("bench", "run a Monte-Carlo benchmark plan");
    std::string b_plan, b_out = "bench_out";
    ben->add_option("--plan", b_plan, "JSON plan file")->required();
    ben->add_option("--out", b_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(g_scenario, g_n, g_grid, g_spikes, g_sep, g_beta, g_seed, g_snr, g_real,
                           g_out, g_observed);

        if (den->parsed()) {
            const sbr::Signal y = sbr::read_signal_csv(d_input);
            sbr::Signal x_hat;
            bool converged = false;
            if (d_method == "lasso") {
                sbr::SolverOptions opts;
                opts.max_iters = d_max_iters;
                auto res = sbr::lasso_denoise(y, d_sigma, d_oversample, opts);
                x_hat = std::move(res.x_hat);
                converged = res.solver.converged;
                std::cout << "lambda=" << res.lambda << " objective=" << res.objective
                          << " iters=" << res.solver.iterations << "\n";
            } else {
                sbr::RecoveryConfig cfg;
                cfg.mode = d_mode == "constrained" ? sbr::RecoveryConfig::Mode::constrained
                                                   : sbr::RecoveryConfig::Mode::penalized;
                cfg.rho_bar = d_rho;
                cfg.sigma = d_sigma;
                cfg.alpha = d_alpha;
                cfg.interpolating = d_interp;
                cfg.block_size = d_block;
                cfg.half_split = d_half_split;
                cfg.solver.max_iters = d_max_iters;
                if (d_lambda >= 0) cfg.lambda = d_lambda;
                if (!d_lambda_rule.empty())
                    cfg.rule = d_lambda_rule == "theory" ? sbr::LambdaRule::theory
                                                         : sbr::LambdaRule::experiment;
                sbr::RecoveryReport rep;
                if (d_n >= 0 && d_block == 0 && !d_half_split) {
                    cfg.m = d_m >= 0 ? d_m : d_n / 2;
                    cfg.n = d_n;
                    rep = d_interp ? sbr::recover_interpolating(y, cfg)
                                   : (cfg.mode == sbr::RecoveryConfig::Mode::constrained
                                          ? sbr::recover_constrained(y, cfg)
                                          : sbr::recover_penalized(y, cfg));
                } else {
                    if (d_m >= 0) cfg.m = d_m;
                    else {
                        // whole-signal default: directional order side/3 per axis
                        const std::int64_t side0 = d_block > 0 ? d_block : y.window().extent(0);
                        cfg.m = std::max<std::int64_t>(1, side0 / 3);
                        if (y.window().rank() == 2) {
                            const std::int64_t side1 = d_block > 0 ? d_block : y.window().extent(1);
                            cfg.m2 = std::max<std::int64_t>(1, side1 / 3);
                        }
                        if (!d_interp) cfg.half_split = true;
                    }
                    rep = sbr::recover_blockwise(y, cfg, y.window());
                }
                x_hat = std::move(rep.x_hat);
                converged = rep.converged;
                std::cout << "residual=" << rep.residual << " rho_hat=" << rep.spectral_l1
                          << " fits=" << rep.fits.size() << " imag_residual=" << rep.imag_residual
                          << "\n";
            }
            sbr::write_signal_csv(d_output, x_hat);
            return converged ? 0 : 2;
        }

        if (orc->parsed()) {
            sbr::CharPoly p = [&] {
                if (!o_roots.empty()) {
                    auto roots = parse_complex_list(o_roots);
                    return sbr::CharPoly::from_roots(roots);
                }
                if (o_poly.empty()) throw std::invalid_argument("oracle: need --poly or --roots");
                return sbr::CharPoly::from_coeffs(parse_complex_list(o_poly));
            }();
            const auto res = sbr::unit_circle_filter(p, o_m, o_root_tol);
            sbr::write_signal_csv(o_out, res.q.as_signal());
            std::cout << "m=" << o_m << " ell=" << res.ell << " alpha=" << res.alpha
                      << " epsilon=" << res.epsilon << "\n"
                      << "sum|q_i|^2=" << res.qnorm_sq << " bound(10a/l)=" << res.qnorm_bound
                      << " certificate=" << (res.qnorm_sq <= res.qnorm_bound ? "ok" : "VIOLATED")
                      << " alpha_small=" << (res.alpha_small ? "yes" : "no") << "\n"
                      << "||q||_2=" << std::sqrt(res.qnorm_sq) << " written to " << o_out << "\n";
            return 0;
        }

        if (ben->parsed()) {
            sbr::BenchPlan plan = sbr::load_plan(b_plan);
            if (!b_out.empty()) plan.out_dir = b_out;
            const auto t0 = std::chrono::steady_clock::now();
            sbr::BenchResult res = sbr::run(plan);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            int failed = 0;
            for (const auto& r : res.trials)
                if (!r.failure.empty()) ++failed;
            std::cout << res.trials.size() << " trial records in " << secs << " s, " << failed
                      << " failures; outputs in " << plan.out_dir << "\n";
            for (const auto& s : res.summary)
                std::cout << s.scenario << " " << s.method << " snr=" << s.snr
                          << " mean=" << s.mean_error << " se=" << s.stderr_error
                          << " excluded=" << s.excluded << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

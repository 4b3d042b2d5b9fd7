#include "sbr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sbr/baseline.hpp"
#include "sbr/csv_io.hpp"
#include "sbr/oracle.hpp"
#include "sbr/spectrum.hpp"
#include "sbr/svg.hpp"

namespace sbr {

namespace {

using json = nlohmann::json;

ScenarioSpec scenario_from_json(const json& j) {
    ScenarioSpec s;
    s.name = ScenarioSpec::name_from_string(j.at("name").get<std::string>());
    if (j.contains("n")) s.n = j["n"].get<std::int64_t>();
    if (j.contains("grid_m")) s.grid_m = j["grid_m"].get<std::int64_t>();
    if (j.contains("spikes")) s.spikes = j["spikes"].get<int>();
    if (j.contains("separation")) s.separation = j["separation"].get<double>();
    if (j.contains("grid_snap")) s.grid_snap = j["grid_snap"].get<std::int64_t>();
    if (j.contains("beta")) s.beta = j["beta"].get<double>();
    if (j.contains("real_output")) s.real_output = j["real_output"].get<bool>();
    return s;
}

MethodConfig method_from_json(const json& j) {
    MethodConfig m;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "penalized") m.kind = MethodConfig::Kind::penalized;
    else if (kind == "constrained") m.kind = MethodConfig::Kind::constrained;
    else if (kind == "lasso") m.kind = MethodConfig::Kind::lasso;
    else throw std::invalid_argument("plan: unknown method kind '" + kind + "'");
    m.name = j.contains("name") ? j["name"].get<std::string>() : kind;

    RecoveryConfig& r = m.recovery;
    r.mode = m.kind == MethodConfig::Kind::constrained ? RecoveryConfig::Mode::constrained
                                                       : RecoveryConfig::Mode::penalized;
    r.m = 0; // auto: whole-signal half-split geometry chosen per scenario
    if (j.contains("m")) r.m = j["m"].get<std::int64_t>();
    if (j.contains("rho_bar")) r.rho_bar = j["rho_bar"].get<double>();
    if (j.contains("lambda")) r.lambda = j["lambda"].get<double>();
    if (j.contains("lambda_rule")) {
        const std::string rule = j["lambda_rule"].get<std::string>();
        if (rule == "theory") r.rule = LambdaRule::theory;
        else if (rule == "experiment") r.rule = LambdaRule::experiment;
        else throw std::invalid_argument("plan: unknown lambda_rule '" + rule + "'");
    }
    if (j.contains("alpha")) r.alpha = j["alpha"].get<double>();
    if (j.contains("block_size")) r.block_size = j["block_size"].get<std::int64_t>();
    if (j.contains("half_split")) r.half_split = j["half_split"].get<bool>();
    if (j.contains("interpolating")) r.interpolating = j["interpolating"].get<bool>();
    if (j.contains("max_iters")) r.solver.max_iters = j["max_iters"].get<int>();
    if (j.contains("oversample")) m.oversample = j["oversample"].get<std::int64_t>();
    return m;
}

/// Default whole-signal method setup for a scenario when the plan omits the
/// geometry: one block covering the window, half-split directional fits of
/// order side/3 (fit on all feasible targets, applied to the matching half).
void apply_default_geometry(RecoveryConfig& r, const ScenarioSpec& s) {
    const bool two_d = s.name == ScenarioSpec::Name::random_spikes_2d ||
                       s.name == ScenarioSpec::Name::coherent_spikes_2d ||
                       s.name == ScenarioSpec::Name::dimension_reduction_2d;
    r.half_split = true;
    r.block_size = 0;
    if (two_d) {
        r.m = std::max<std::int64_t>(1, s.grid_m / 3);
        r.m2 = r.m;
    } else {
        r.m = std::max<std::int64_t>(1, s.n / 3);
    }
}

TrialRecord run_method(const MethodConfig& method, const ScenarioSpec& scenario, const Signal& x,
                       const Signal& y, double sigma, double timeout_seconds) {
    TrialRecord rec;
    rec.method = method.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Signal x_hat;
        bool converged = false;
        if (method.kind == MethodConfig::Kind::lasso) {
            SolverOptions opts;
            if (timeout_seconds > 0)
                opts.deadline = t0 + std::chrono::milliseconds(static_cast<long>(timeout_seconds * 1000));
            LassoResult lr = lasso_denoise(y, sigma, method.oversample, opts);
            x_hat = std::move(lr.x_hat);
            converged = lr.solver.converged;
        } else {
            RecoveryConfig cfg = method.recovery;
            if (cfg.m <= 0) apply_default_geometry(cfg, scenario);
            cfg.sigma = sigma;
            if (cfg.lambda == 0 && !cfg.rule && cfg.mode == RecoveryConfig::Mode::penalized)
                cfg.rule = LambdaRule::experiment;
            if (timeout_seconds > 0)
                cfg.solver.deadline = t0 + std::chrono::milliseconds(static_cast<long>(timeout_seconds * 1000));
            RecoveryReport rep = recover_blockwise(y, cfg, y.window());
            x_hat = std::move(rep.x_hat);
            converged = rep.converged;
        }
        double err = 0;
        for (std::size_t i = 0; i < x.size(); ++i) err += std::norm(x_hat.values()[i] - x.values()[i]);
        rec.error = std::sqrt(err);
        rec.converged = converged;
    } catch (const std::exception& e) {
        rec.error = std::numeric_limits<double>::quiet_NaN();
        rec.converged = false;
        rec.failure = e.what();
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::string bool_str(bool b) { return b ? "1" : "0"; }

} // namespace

BenchPlan parse_plan(const std::string& text) {
    const json j = json::parse(text);
    BenchPlan plan;
    for (const auto& s : j.at("scenarios")) {
        BenchScenario bs;
        bs.spec = scenario_from_json(s);
        if (s.contains("trials")) bs.trials = s["trials"].get<int>();
        plan.scenarios.push_back(bs);
    }
    if (j.contains("snrs")) plan.snrs = j["snrs"].get<std::vector<double>>();
    for (const auto& m : j.at("methods")) plan.methods.push_back(method_from_json(m));
    if (j.contains("master_seed")) plan.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("workers")) plan.workers = j["workers"].get<int>();
    if (j.contains("timeout_seconds")) plan.timeout_seconds = j["timeout_seconds"].get<double>();
    if (j.contains("runtime_in_csv")) plan.runtime_in_csv = j["runtime_in_csv"].get<bool>();
    if (j.contains("out_dir")) plan.out_dir = j["out_dir"].get<std::string>();
    if (plan.scenarios.empty() || plan.methods.empty())
        throw std::invalid_argument("plan: needs at least one scenario and one method");
    return plan;
}

std::string serialize_plan(const BenchPlan& plan) {
    json j;
    for (const auto& sc : plan.scenarios) {
        json s;
        s["name"] = ScenarioSpec::to_string(sc.spec.name);
        s["n"] = sc.spec.n;
        s["grid_m"] = sc.spec.grid_m;
        s["spikes"] = sc.spec.spikes;
        if (sc.spec.separation > 0) s["separation"] = sc.spec.separation;
        if (sc.spec.grid_snap > 0) s["grid_snap"] = sc.spec.grid_snap;
        s["beta"] = sc.spec.beta;
        if (sc.spec.real_output) s["real_output"] = true;
        if (sc.trials > 0) s["trials"] = sc.trials;
        j["scenarios"].push_back(s);
    }
    j["snrs"] = plan.snrs;
    for (const auto& m : plan.methods) {
        json mj;
        mj["kind"] = m.kind == MethodConfig::Kind::penalized
                         ? "penalized"
                         : (m.kind == MethodConfig::Kind::constrained ? "constrained" : "lasso");
        mj["name"] = m.name;
        if (m.kind == MethodConfig::Kind::lasso) {
            mj["oversample"] = m.oversample;
        } else {
            if (m.recovery.m > 0) mj["m"] = m.recovery.m;
            if (m.kind == MethodConfig::Kind::constrained) mj["rho_bar"] = m.recovery.rho_bar;
            if (m.recovery.rule)
                mj["lambda_rule"] = *m.recovery.rule == LambdaRule::theory ? "theory" : "experiment";
            else if (m.recovery.lambda > 0)
                mj["lambda"] = m.recovery.lambda;
            mj["alpha"] = m.recovery.alpha;
            if (m.recovery.block_size > 0) mj["block_size"] = m.recovery.block_size;
            if (m.recovery.half_split) mj["half_split"] = true;
            if (m.recovery.interpolating) mj["interpolating"] = true;
            mj["max_iters"] = m.recovery.solver.max_iters;
        }
        j["methods"].push_back(mj);
    }
    j["master_seed"] = plan.master_seed;
    j["workers"] = plan.workers;
    j["timeout_seconds"] = plan.timeout_seconds;
    j["runtime_in_csv"] = plan.runtime_in_csv;
    return j.dump(2) + "\n";
}

BenchPlan load_plan(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open plan: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_plan(ss.str());
}

BenchResult run(const BenchPlan& plan) {
    if (plan.scenarios.empty() || plan.methods.empty())
        throw std::invalid_argument("bench: plan needs at least one scenario and one method");

    struct Task {
        std::size_t scenario_idx;
        std::size_t snr_idx;
        int trial;
    };
    std::vector<Task> tasks;
    std::vector<int> trials_per_scenario;
    for (std::size_t si = 0; si < plan.scenarios.size(); ++si) {
        const auto& sc = plan.scenarios[si];
        const bool two_d = sc.spec.name == ScenarioSpec::Name::random_spikes_2d ||
                           sc.spec.name == ScenarioSpec::Name::coherent_spikes_2d ||
                           sc.spec.name == ScenarioSpec::Name::dimension_reduction_2d;
        const int trials = sc.trials > 0 ? sc.trials : (two_d ? 40 : 100);
        trials_per_scenario.push_back(trials);
        for (std::size_t ki = 0; ki < plan.snrs.size(); ++ki)
            for (int t = 0; t < trials; ++t) tasks.push_back({si, ki, t});
    }

    // One record slot per (task, method): scheduling cannot affect output order.
    std::vector<TrialRecord> records(tasks.size() * plan.methods.size());
    std::atomic<std::size_t> next{0};
    const int workers = plan.workers > 0
                            ? plan.workers
                            : std::max(1u, std::thread::hardware_concurrency());

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            const auto& sc = plan.scenarios[task.scenario_idx];
            const double snr = plan.snrs[task.snr_idx];

            ScenarioSpec spec = sc.spec;
            spec.seed = mix_seed(plan.master_seed, mix_seed(task.scenario_idx * 1000003u + 17u,
                                                            static_cast<std::uint64_t>(task.trial)));
            const Signal x = generate(spec);
            const std::uint64_t noise_seed = mix_seed(spec.seed, 0xabcdef12u);
            const Observation obs = observe(x, NoiseModel::Kind::complex_standard, snr, noise_seed);

            for (std::size_t mi = 0; mi < plan.methods.size(); ++mi) {
                TrialRecord rec = run_method(plan.methods[mi], spec, x, obs.y, obs.sigma, plan.timeout_seconds);
                rec.scenario = ScenarioSpec::to_string(spec.name);
                rec.snr = snr;
                rec.trial = task.trial;
                records[i * plan.methods.size() + mi] = std::move(rec);
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BenchResult result;
    result.trials = std::move(records);

    std::ostringstream results_csv;
    results_csv << "scenario,method,snr,trial,error,runtime_ms,converged\n";
    for (const auto& r : result.trials)
        results_csv << r.scenario << ',' << r.method << ',' << format_double(r.snr) << ',' << r.trial
                    << ',' << format_double(r.error) << ','
                    << format_double(plan.runtime_in_csv ? r.runtime_ms : 0.0) << ','
                    << bool_str(r.converged) << '\n';
    result.results_csv = results_csv.str();

    // Aggregate in deterministic (scenario, method, snr) order of appearance.
    std::map<std::tuple<std::string, std::string, double>, std::vector<double>> groups;
    std::map<std::tuple<std::string, std::string, double>, int> failures;
    std::vector<std::tuple<std::string, std::string, double>> order;
    for (const auto& r : result.trials) {
        auto key = std::make_tuple(r.scenario, r.method, r.snr);
        if (!groups.count(key)) order.push_back(key);
        if (std::isnan(r.error))
            failures[key]++;
        else
            groups[key].push_back(r.error);
    }
    std::sort(order.begin(), order.end());
    std::ostringstream summary_csv;
    summary_csv << "scenario,method,snr,mean_error,stderr,trials,excluded\n";
    for (const auto& key : order) {
        const auto& vals = groups[key];
        SummaryRecord s;
        s.scenario = std::get<0>(key);
        s.method = std::get<1>(key);
        s.snr = std::get<2>(key);
        s.trials_used = static_cast<int>(vals.size());
        s.excluded = failures.count(key) ? failures.at(key) : 0;
        double mean = 0;
        for (double v : vals) mean += v;
        if (!vals.empty()) mean /= static_cast<double>(vals.size());
        double var = 0;
        for (double v : vals) var += (v - mean) * (v - mean);
        if (vals.size() > 1) var /= static_cast<double>(vals.size() - 1);
        s.mean_error = mean;
        s.stderr_error = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size())) : 0.0;
        result.summary.push_back(s);
        summary_csv << s.scenario << ',' << s.method << ',' << format_double(s.snr) << ','
                    << format_double(s.mean_error) << ',' << format_double(s.stderr_error) << ','
                    << s.trials_used << ',' << s.excluded << '\n';
    }
    result.summary_csv = summary_csv.str();
    result.plan_snapshot = serialize_plan(plan);

    if (!plan.out_dir.empty()) {
        std::filesystem::create_directories(plan.out_dir);
        {
            std::ofstream f(plan.out_dir + "/results.csv");
            f << result.results_csv;
        }
        {
            std::ofstream f(plan.out_dir + "/summary.csv");
            f << result.summary_csv;
        }
        {
            std::ofstream f(plan.out_dir + "/plan.json");
            f << result.plan_snapshot;
        }
        // One chart per scenario: mean error vs 1/SNR.
        std::map<std::string, std::map<std::string, SvgSeries>> charts;
        for (const auto& s : result.summary) {
            SvgSeries& sr = charts[s.scenario][s.method];
            sr.label = s.method;
            sr.x.push_back(1.0 / s.snr);
            sr.y.push_back(s.mean_error);
            sr.yerr.push_back(s.stderr_error);
        }
        for (auto& [scenario, by_method] : charts) {
            std::vector<SvgSeries> series;
            for (auto& [name, sr] : by_method) {
                // sort by x
                std::vector<std::size_t> idx(sr.x.size());
                for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
                std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sr.x[a] < sr.x[b]; });
                SvgSeries sorted;
                sorted.label = sr.label;
                for (auto i : idx) {
                    sorted.x.push_back(sr.x[i]);
                    sorted.y.push_back(sr.y[i]);
                    sorted.yerr.push_back(sr.yerr[i]);
                }
                series.push_back(std::move(sorted));
            }
            write_svg_chart(plan.out_dir + "/" + scenario + ".svg", scenario, "1/SNR", "mean l2 error",
                            series);
        }
    }
    return result;
}

std::vector<StochasticBoundReport> validate_stochastic_bounds(int trials, std::uint64_t seed) {
    std::vector<StochasticBoundReport> out;
    const double alpha = 0.1;
    const double env_factor = 20.0 * std::sqrt(1.0 + std::log(1.0 / alpha));

    struct Setup {
        std::string name;
        std::int64_t m;
        Filter phi_short; ///< causal witness, length m+1
        Signal x;         ///< subspace element on [-2m, 2m], ||x_0^n|| = 1
        double rho;
    };
    std::vector<Setup> setups;

    {
        // Constants: averaging witness, rho = 1.
        Setup s;
        s.name = "constants";
        s.m = 32;
        std::vector<cplx> coeffs(static_cast<std::size_t>(s.m + 1),
                                 cplx(1.0 / static_cast<double>(s.m + 1), 0.0));
        s.phi_short = Filter(Window::line(0, s.m), std::move(coeffs));
        s.rho = 1.0;
        Signal x(Window::line(-2 * s.m, 2 * s.m));
        const double c = 1.0 / std::sqrt(static_cast<double>(2 * s.m + 1));
        for (auto& v : x.values()) v = c;
        s.x = std::move(x);
        setups.push_back(std::move(s));
    }
    {
        // On-grid oscillation pair: causal projector-column witness, rho = sqrt(2).
        Setup s;
        s.name = "oscillation_pair";
        s.m = 50;
        const double pi2 = 2.0 * std::acos(-1.0);
        const std::int64_t g1 = 3, g2 = 11;
        const double w1 = pi2 * static_cast<double>(g1) / static_cast<double>(s.m + 1);
        const double w2 = pi2 * static_cast<double>(g2) / static_cast<double>(s.m + 1);
        std::vector<cplx> coeffs(static_cast<std::size_t>(s.m + 1));
        for (std::int64_t j = 0; j <= s.m; ++j) {
            const double a1 = w1 * static_cast<double>(j), a2 = w2 * static_cast<double>(j);
            coeffs[static_cast<std::size_t>(j)] =
                (cplx(std::cos(a1), std::sin(a1)) + cplx(std::cos(a2), std::sin(a2))) /
                static_cast<double>(s.m + 1);
        }
        s.phi_short = Filter(Window::line(0, s.m), std::move(coeffs));
        s.rho = std::sqrt(2.0);
        Signal x(Window::line(-2 * s.m, 2 * s.m));
        for (std::int64_t t = -2 * s.m; t <= 2 * s.m; ++t) {
            const double a1 = w1 * static_cast<double>(t), a2 = w2 * static_cast<double>(t);
            x(t) = cplx(std::cos(a1), std::sin(a1)) + 0.7 * cplx(std::cos(a2), std::sin(a2));
        }
        double nrm = 0;
        for (std::int64_t t = 0; t <= 2 * s.m; ++t) nrm += std::norm(x(t));
        nrm = std::sqrt(nrm);
        for (auto& v : x.values()) v /= nrm;
        s.x = std::move(x);
        setups.push_back(std::move(s));
    }

    for (auto& s : setups) {
        const std::int64_t n = 2 * s.m;
        const double sigma = 0.05;
        const Window target = Window::line(0, n);
        const CompositionBound comp = compose_and_bound(s.phi_short);

        StochasticBoundReport rep;
        rep.scenario = s.name;
        rep.rho = s.rho;
        rep.sigma = sigma;
        rep.trials = trials;
        rep.envelope = env_factor * sigma * s.rho * s.rho;
        {
            Signal fit = convolve(comp.composed, s.x, target);
            double bias = 0;
            for (std::int64_t t = 0; t <= n; ++t) bias += std::norm(fit(t) - s.x(t));
            rep.bias_zero_noise = std::sqrt(bias);
        }
        std::vector<double> errors;
        errors.reserve(static_cast<std::size_t>(trials));
        for (int tr = 0; tr < trials; ++tr) {
            const Signal y = add_noise(s.x, NoiseModel{NoiseModel::Kind::complex_standard, sigma},
                                       mix_seed(seed, static_cast<std::uint64_t>(tr) * 977u + (s.m)));
            Signal fit = convolve(comp.composed, y, target);
            double err = 0;
            for (std::int64_t t = 0; t <= n; ++t) err += std::norm(fit(t) - s.x(t));
            errors.push_back(std::sqrt(err));
        }
        std::sort(errors.begin(), errors.end());
        const std::size_t q = static_cast<std::size_t>(std::ceil(0.9 * trials)) - 1;
        rep.percentile90 = errors[std::min(q, errors.size() - 1)];
        rep.within = rep.percentile90 <= rep.envelope;
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace sbr

#include "sbr/signals.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sbr {

namespace {

constexpr double kPi = 3.14159265358979323846;

void normalize(Signal& x) {
    const double n = x.norm2();
    if (n == 0) throw std::invalid_argument("generate: degenerate zero signal");
    for (auto& v : x.values()) v /= n;
}

SpikeParameters draw_spikes(const ScenarioSpec& spec, std::mt19937_64& rng, bool two_d) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SpikeParameters s;
    const bool coherent = spec.name == ScenarioSpec::Name::coherent_spikes ||
                          spec.name == ScenarioSpec::Name::coherent_spikes_2d;
    if (spec.spikes < 1) throw std::invalid_argument("generate: spike count must be >= 1");
    if (coherent && spec.spikes % 2 != 0)
        throw std::invalid_argument("generate: coherent scenarios need an even spike count");

    auto draw_amp = [&] {
        const double mag = 0.5 + unif(rng);
        const double ph = 2.0 * kPi * unif(rng);
        return cplx(mag * std::cos(ph), mag * std::sin(ph));
    };
    auto draw_freq = [&] {
        const double w = 2.0 * kPi * unif(rng);
        if (spec.grid_snap <= 0) return w;
        const double bin = 2.0 * kPi / static_cast<double>(spec.grid_snap);
        return bin * std::floor(w / bin);
    };

    if (!coherent) {
        for (int k = 0; k < spec.spikes; ++k) {
            s.freq0.push_back(draw_freq());
            if (two_d) s.freq1.push_back(draw_freq());
            s.amp.push_back(draw_amp());
        }
        return s;
    }
    const double factor = spec.separation > 0 ? spec.separation : (two_d ? 0.2 : 0.1);
    const double gap = two_d ? factor * kPi / static_cast<double>(spec.grid_m)
                             : factor * 2.0 * kPi / static_cast<double>(spec.n);
    for (int k = 0; k < spec.spikes / 2; ++k) {
        const double w0 = draw_freq();
        const double w1 = two_d ? draw_freq() : 0.0;
        const cplx a = draw_amp();
        s.freq0.push_back(w0);
        s.freq0.push_back(w0 + gap);
        if (two_d) {
            s.freq1.push_back(w1);
            s.freq1.push_back(w1 + gap);
        }
        s.amp.push_back(a);
        s.amp.push_back(a);
    }
    return s;
}

} // namespace

ScenarioSpec::Name ScenarioSpec::name_from_string(const std::string& s) {
    if (s == "random_spikes") return Name::random_spikes;
    if (s == "coherent_spikes") return Name::coherent_spikes;
    if (s == "random_spikes_2d") return Name::random_spikes_2d;
    if (s == "coherent_spikes_2d") return Name::coherent_spikes_2d;
    if (s == "dimension_reduction_2d") return Name::dimension_reduction_2d;
    throw std::invalid_argument("unknown scenario: " + s);
}

std::string ScenarioSpec::to_string(Name n) {
    switch (n) {
    case Name::random_spikes: return "random_spikes";
    case Name::coherent_spikes: return "coherent_spikes";
    case Name::random_spikes_2d: return "random_spikes_2d";
    case Name::coherent_spikes_2d: return "coherent_spikes_2d";
    case Name::dimension_reduction_2d: return "dimension_reduction_2d";
    }
    return "?";
}

SpikeParameters spike_parameters(const ScenarioSpec& spec) {
    const bool two_d = spec.name == ScenarioSpec::Name::random_spikes_2d ||
                       spec.name == ScenarioSpec::Name::coherent_spikes_2d;
    if (two_d || spec.name == ScenarioSpec::Name::random_spikes ||
        spec.name == ScenarioSpec::Name::coherent_spikes) {
        std::mt19937_64 rng(spec.seed);
        return draw_spikes(spec, rng, two_d);
    }
    throw std::invalid_argument("spike_parameters: not a spike scenario");
}

std::vector<cplx> sobolev_coefficients(const ScenarioSpec& spec) {
    std::mt19937_64 rng(mix_seed(spec.seed, 0x50b01ef5u));
    std::normal_distribution<double> gauss;
    const int K = spec.sobolev_terms;
    std::vector<cplx> c(static_cast<std::size_t>(K));
    double sum = 0;
    for (int k = 1; k <= K; ++k) {
        const cplx a(gauss(rng), gauss(rng));
        c[static_cast<std::size_t>(k - 1)] = a / std::pow(2.0 * kPi * k, spec.beta);
        sum += 2.0 * std::pow(2.0 * kPi * k, 2.0 * spec.beta) * std::norm(c[static_cast<std::size_t>(k - 1)]);
    }
    const double scale = 1.0 / std::sqrt(sum);
    for (auto& v : c) v *= scale;
    return c;
}

Signal generate(const ScenarioSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Signal x;
    switch (spec.name) {
    case ScenarioSpec::Name::random_spikes:
    case ScenarioSpec::Name::coherent_spikes: {
        if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
        auto s = draw_spikes(spec, rng, false);
        x = Signal(Window::line(0, spec.n - 1));
        for (std::int64_t t = 0; t < spec.n; ++t) {
            cplx v{};
            for (std::size_t k = 0; k < s.amp.size(); ++k) {
                const double ang = s.freq0[k] * static_cast<double>(t);
                v += s.amp[k] * cplx(std::cos(ang), std::sin(ang));
            }
            x(t) = v;
        }
        break;
    }
    case ScenarioSpec::Name::random_spikes_2d:
    case ScenarioSpec::Name::coherent_spikes_2d: {
        if (spec.grid_m < 1) throw std::invalid_argument("generate: grid_m must be >= 1");
        auto s = draw_spikes(spec, rng, true);
        x = Signal(Window::rect(0, spec.grid_m - 1, 0, spec.grid_m - 1));
        for (std::int64_t r = 0; r < spec.grid_m; ++r)
            for (std::int64_t c = 0; c < spec.grid_m; ++c) {
                cplx v{};
                for (std::size_t k = 0; k < s.amp.size(); ++k) {
                    const double ang = s.freq0[k] * static_cast<double>(r) + s.freq1[k] * static_cast<double>(c);
                    v += s.amp[k] * cplx(std::cos(ang), std::sin(ang));
                }
                x(r, c) = v;
            }
        break;
    }
    case ScenarioSpec::Name::dimension_reduction_2d: {
        if (spec.grid_m < 1) throw std::invalid_argument("generate: grid_m must be >= 1");
        const double phase = 2.0 * kPi * unif(rng);
        const double th0 = std::cos(phase), th1 = std::sin(phase);
        const auto c = sobolev_coefficients(spec);
        auto g = [&](double u) {
            cplx v{};
            for (std::size_t k = 0; k < c.size(); ++k) {
                const double ang = 2.0 * kPi * static_cast<double>(k + 1) * u;
                const cplx e(std::cos(ang), std::sin(ang));
                v += c[k] * e + std::conj(c[k] * e);
            }
            return v.real();
        };
        x = sample_grid_function(
            [&](double t0, double t1) { return cplx(g(th0 * t0 + th1 * t1), 0.0); }, spec.grid_m);
        break;
    }
    }
    if (spec.real_output) {
        for (auto& v : x.values()) v = cplx(v.real(), 0.0);
    }
    normalize(x);
    return x;
}

Signal add_noise(const Signal& x, const NoiseModel& noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Signal y = x;
    if (noise.sigma == 0) return y;
    for (auto& v : y.values()) {
        if (noise.kind == NoiseModel::Kind::complex_standard)
            v += noise.sigma * cplx(gauss(rng), gauss(rng));
        else
            v += noise.sigma * cplx(gauss(rng), 0.0);
    }
    return y;
}

Observation observe(const Signal& x, NoiseModel::Kind kind, double snr, std::uint64_t seed) {
    if (!(snr > 0)) throw std::invalid_argument("observe: snr must be positive");
    Observation obs;
    obs.sigma = std::isinf(snr) ? 0.0 : 1.0 / (snr * std::sqrt(static_cast<double>(x.size())));
    obs.y = add_noise(x, NoiseModel{kind, obs.sigma}, seed);
    return obs;
}

Signal sample_grid_function(const std::function<cplx(double, double)>& f, std::int64_t m) {
    if (m < 1) throw std::invalid_argument("sample_grid_function: m must be >= 1");
    Signal x(Window::rect(0, m - 1, 0, m - 1));
    for (std::int64_t r = 0; r < m; ++r)
        for (std::int64_t c = 0; c < m; ++c)
            x(r, c) = f(static_cast<double>(r) / static_cast<double>(m),
                        static_cast<double>(c) / static_cast<double>(m));
    return x;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace sbr

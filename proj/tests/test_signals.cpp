#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sbr/signals.hpp"

using namespace sbr;
using oracles::kPi;

TEST_CASE("ground-truth generators") {
    SUBCASE("normalization to unit l2 across scenarios") {
        for (auto name : {ScenarioSpec::Name::random_spikes, ScenarioSpec::Name::coherent_spikes,
                          ScenarioSpec::Name::random_spikes_2d, ScenarioSpec::Name::coherent_spikes_2d,
                          ScenarioSpec::Name::dimension_reduction_2d}) {
            ScenarioSpec spec;
            spec.name = name;
            spec.n = 100;
            spec.grid_m = 16;
            spec.seed = 42;
            const Signal x = generate(spec);
            CHECK(std::abs(x.norm2() - 1.0) < 1e-12);
        }
    }
    SUBCASE("determinism: identical spec and seed give bit-identical values") {
        ScenarioSpec spec;
        spec.name = ScenarioSpec::Name::random_spikes;
        spec.seed = 7;
        const Signal a = generate(spec);
        const Signal b = generate(spec);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values()[i] == b.values()[i]);
        spec.seed = 8;
        const Signal c = generate(spec);
        double diff = 0;
        for (std::size_t i = 0; i < a.size(); ++i) diff += std::norm(a.values()[i] - c.values()[i]);
        CHECK(diff > 1e-6);
    }
    SUBCASE("coherent pairs: separation exactly 0.1 of the DFT bin, shared amplitude") {
        ScenarioSpec spec;
        spec.name = ScenarioSpec::Name::coherent_spikes;
        spec.n = 100;
        spec.seed = 3;
        const auto params = spike_parameters(spec);
        REQUIRE(params.freq0.size() == 4);
        const double gap = 0.1 * 2.0 * kPi / 100.0;
        CHECK(params.freq0[1] == params.freq0[0] + gap);
        CHECK(params.freq0[3] == params.freq0[2] + gap);
        CHECK(params.amp[0] == params.amp[1]);
        CHECK(params.amp[2] == params.amp[3]);
    }
    SUBCASE("coherent 2-D separation is 0.2 pi/m per axis") {
        ScenarioSpec spec;
        spec.name = ScenarioSpec::Name::coherent_spikes_2d;
        spec.grid_m = 40;
        spec.seed = 5;
        const auto params = spike_parameters(spec);
        const double gap = 0.2 * kPi / 40.0;
        CHECK(params.freq0[1] == params.freq0[0] + gap);
        CHECK(params.freq1[1] == params.freq1[0] + gap);
    }
    SUBCASE("spike amplitudes: magnitudes in [0.5, 1.5] before normalization") {
        ScenarioSpec spec;
        spec.name = ScenarioSpec::Name::random_spikes;
        spec.seed = 11;
        const auto params = spike_parameters(spec);
        for (const auto& a : params.amp) {
            CHECK(std::abs(a) >= 0.5);
            CHECK(std::abs(a) <= 1.5);
        }
    }
    SUBCASE("generated signal matches the drawn parameters") {
        ScenarioSpec spec;
        spec.name = ScenarioSpec::Name::random_spikes;
        spec.n = 50;
        spec.seed = 19;
        const auto params = spike_parameters(spec);
        Signal manual(Window::line(0, 49));
        for (std::int64_t t = 0; t < 50; ++t) {
            cplx v{};
            for (std::size_t k = 0; k < params.amp.size(); ++k)
                v += params.amp[k] * std::polar(1.0, params.freq0[k] * static_cast<double>(t));
            manual(t) = v;
        }
        const double nrm = manual.norm2();
        const Signal x = generate(spec);
        for (std::int64_t t = 0; t < 50; ++t) CHECK(std::abs(x(t) - manual(t) / nrm) < 1e-12);
    }
    SUBCASE("invalid specs are rejected") {
        ScenarioSpec spec;
        spec.name = ScenarioSpec::Name::coherent_spikes;
        spec.spikes = 3;
        CHECK_THROWS_AS(generate(spec), std::invalid_argument);
        spec.name = ScenarioSpec::Name::random_spikes;
        spec.spikes = 0;
        CHECK_THROWS_AS(generate(spec), std::invalid_argument);
    }
}

TEST_CASE("sobolev-ball coefficients for the single-index scenario") {
    ScenarioSpec spec;
    spec.name = ScenarioSpec::Name::dimension_reduction_2d;
    spec.beta = 2.0;
    spec.seed = 23;
    const auto c = sobolev_coefficients(spec);
    double seminorm_sq = 0;
    for (std::size_t k = 1; k <= c.size(); ++k)
        seminorm_sq +=
            2.0 * std::pow(2.0 * kPi * static_cast<double>(k), 2.0 * spec.beta) * std::norm(c[k - 1]);
    CHECK(std::abs(seminorm_sq - 1.0) < 1e-6);
}

TEST_CASE("observation model") {
    ScenarioSpec spec;
    spec.name = ScenarioSpec::Name::random_spikes;
    spec.n = 100;
    spec.seed = 31;
    const Signal x = generate(spec);

    SUBCASE("infinite snr returns the clean signal") {
        const auto obs = observe(x, NoiseModel::Kind::complex_standard,
                                 std::numeric_limits<double>::infinity(), 1);
        CHECK(obs.sigma == 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(obs.y.values()[i] == x.values()[i]);
    }
    SUBCASE("snr = 1 with n = 100 samples gives sigma = 0.1") {
        const auto obs = observe(x, NoiseModel::Kind::complex_standard, 1.0, 2);
        CHECK(obs.sigma == doctest::Approx(0.1).epsilon(1e-14));
    }
    SUBCASE("per-sample complex noise second moment is 2 sigma^2 within 3%") {
        Signal zero(Window::line(0, 9999));
        const double sigma = 0.7;
        const Signal noisy = add_noise(zero, {NoiseModel::Kind::complex_standard, sigma}, 12345);
        double sum = 0;
        for (const auto& v : noisy.values()) sum += std::norm(v);
        const double per_sample = sum / 10000.0;
        CHECK(per_sample == doctest::Approx(2.0 * sigma * sigma).epsilon(0.03));
    }
    SUBCASE("real noise kind stays real") {
        Signal zero(Window::line(0, 99));
        const Signal noisy = add_noise(zero, {NoiseModel::Kind::real, 1.0}, 77);
        for (const auto& v : noisy.values()) CHECK(v.imag() == 0.0);
    }
    SUBCASE("noise is deterministic given the seed") {
        const auto a = observe(x, NoiseModel::Kind::complex_standard, 4.0, 99);
        const auto b = observe(x, NoiseModel::Kind::complex_standard, 4.0, 99);
        for (std::size_t i = 0; i < a.y.size(); ++i) CHECK(a.y.values()[i] == b.y.values()[i]);
    }
    SUBCASE("invalid snr") {
        CHECK_THROWS_AS(observe(x, NoiseModel::Kind::complex_standard, 0.0, 1), std::invalid_argument);
    }
}

TEST_CASE("grid sampling") {
    SUBCASE("constant function") {
        const Signal x = sample_grid_function([](double, double) { return cplx(1, 0); }, 8);
        for (const auto& v : x.values()) CHECK(v == cplx(1, 0));
    }
    SUBCASE("separable exponential matches the closed form") {
        const std::int64_t m = 12;
        const Signal x = sample_grid_function(
            [](double t0, double t1) { return std::polar(1.0, 2.0 * kPi * (t0 + t1)); }, m);
        for (std::int64_t r = 0; r < m; ++r)
            for (std::int64_t c = 0; c < m; ++c) {
                const cplx expect = std::polar(1.0, 2.0 * kPi * (double(r) + double(c)) / double(m));
                CHECK(std::abs(x(r, c) - expect) < 1e-12);
            }
    }
    SUBCASE("single-index with axis-aligned direction is constant along the other axis") {
        const std::int64_t m = 10;
        auto g = [](double u) { return cplx(std::sin(2 * kPi * u), 0); };
        const Signal x = sample_grid_function([&](double t0, double) { return g(t0); }, m);
        for (std::int64_t r = 0; r < m; ++r)
            for (std::int64_t c = 1; c < m; ++c) CHECK(x(r, c) == x(r, 0));
    }
}

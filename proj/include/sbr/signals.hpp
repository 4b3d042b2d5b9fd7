#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "sbr/signal.hpp"

namespace sbr {

/// Monte-Carlo ground-truth scenarios. All generated signals are normalized
/// to ||x||_2 = 1 and are deterministic given the seed.
struct ScenarioSpec {
    enum class Name {
        random_spikes,
        coherent_spikes,
        random_spikes_2d,
        coherent_spikes_2d,
        dimension_reduction_2d,
    };

    Name name = Name::random_spikes;
    std::int64_t n = 100;      ///< 1-D sample count (window [0, n-1])
    std::int64_t grid_m = 40;  ///< 2-D grid side (window [0, m-1]^2)
    int spikes = 4;
    /// Coherent pair gap: separation * (2*pi/n) in 1-D, separation * (pi/m)
    /// per axis in 2-D; <= 0 picks the scenario default (0.1 resp. 0.2).
    double separation = 0.0;
    /// If > 0, spike frequencies snap to multiples of 2*pi/grid_snap
    /// (debug/noiseless runs where exact recovery is expected).
    std::int64_t grid_snap = 0;
    double beta = 2.0;         ///< single-index smoothness
    int sobolev_terms = 32;
    bool real_output = false;  ///< take the real part and renormalize
    std::uint64_t seed = 0;

    static Name name_from_string(const std::string& s);
    static std::string to_string(Name n);
};

struct NoiseModel {
    enum class Kind { complex_standard, real };
    Kind kind = Kind::complex_standard;
    double sigma = 0.0;
};

Signal generate(const ScenarioSpec& spec);

/// Frequencies and (pre-normalization) amplitudes drawn for a spike scenario,
/// exactly as generate() uses them.
struct SpikeParameters {
    std::vector<double> freq0;
    std::vector<double> freq1; ///< empty in 1-D
    std::vector<cplx> amp;
};
SpikeParameters spike_parameters(const ScenarioSpec& spec);

/// Fourier coefficients c_1..c_K of the random Sobolev-ball function g used by
/// dimension_reduction_2d (normalized so 2 sum (2 pi k)^{2 beta} |c_k|^2 = 1).
std::vector<cplx> sobolev_coefficients(const ScenarioSpec& spec);

Signal add_noise(const Signal& x, const NoiseModel& noise, std::uint64_t seed);

struct Observation {
    Signal y;
    double sigma = 0.0;
};

/// y = x + sigma*zeta with sigma = 1/(snr*sqrt(#samples)); snr = inf gives y = x.
Observation observe(const Signal& x, NoiseModel::Kind kind, double snr, std::uint64_t seed);

/// x_tau = f(tau/m) on the m x m grid, f defined on [0,1]^2.
Signal sample_grid_function(const std::function<cplx(double, double)>& f, std::int64_t m);

/// Deterministic seed mixing for per-trial substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace sbr

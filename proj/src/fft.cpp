#include "sbr/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>

namespace sbr::fft {
namespace {

// FFTW's planner is not thread-safe; plan creation/destruction is serialized
// here. Execution runs lock-free on per-thread plans and buffers.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t n = 0;

    PlanEntry() = default;
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;
    PlanEntry(PlanEntry&& o) noexcept : plan(o.plan), in(o.in), out(o.out), n(o.n) {
        o.plan = nullptr;
        o.in = o.out = nullptr;
    }

    ~PlanEntry() {
        if (!plan && !in) return;
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan) fftw_destroy_plan(plan);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};

struct Key {
    std::int64_t n0, n1;
    int sign;
    bool operator<(const Key& o) const {
        if (n0 != o.n0) return n0 < o.n0;
        if (n1 != o.n1) return n1 < o.n1;
        return sign < o.sign;
    }
};

PlanEntry& plan_for(std::int64_t n0, std::int64_t n1, int sign) {
    thread_local std::map<Key, PlanEntry> cache;
    Key key{n0, n1, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    PlanEntry e;
    e.n = static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        e.in = fftw_alloc_complex(e.n);
        e.out = fftw_alloc_complex(e.n);
        // FFTW_BACKWARD carries the +i exponent, FFTW_FORWARD the -i one.
        const int fftw_sign = (sign > 0) ? FFTW_BACKWARD : FFTW_FORWARD;
        if (n1 == 1)
            e.plan = fftw_plan_dft_1d(static_cast<int>(n0), e.in, e.out, fftw_sign, FFTW_ESTIMATE);
        else
            e.plan = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), e.in, e.out,
                                      fftw_sign, FFTW_ESTIMATE);
    }
    if (!e.plan) throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(key, std::move(e)).first->second;
}

std::vector<cplx> execute(std::span<const cplx> in, std::int64_t n0, std::int64_t n1, int sign) {
    if (n0 < 1 || n1 < 1) throw std::invalid_argument("fft: empty input");
    if (in.size() != static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1))
        throw std::invalid_argument("fft: shape does not match data size");
    PlanEntry& e = plan_for(n0, n1, sign);
    // std::complex<double> is layout-compatible with fftw_complex (double[2])
    std::copy_n(in.data(), e.n, reinterpret_cast<cplx*>(e.in));
    fftw_execute(e.plan);
    std::vector<cplx> out(e.n);
    std::copy_n(reinterpret_cast<const cplx*>(e.out), e.n, out.data());
    return out;
}

} // namespace

std::vector<cplx> raw(std::span<const cplx> in, int sign) {
    return execute(in, static_cast<std::int64_t>(in.size()), 1, sign);
}

std::vector<cplx> raw2(std::span<const cplx> in, std::int64_t n0, std::int64_t n1, int sign) {
    return execute(in, n0, n1, sign);
}

} // namespace sbr::fft

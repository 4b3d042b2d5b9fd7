#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sbr {

/// Integer index window: an interval [lo, hi] in 1-D or an axis-aligned
/// rectangle [lo0,hi0]x[lo1,hi1] in 2-D. Signals and filters live on windows;
/// indices outside are implicitly zero.
class Window {
public:
    Window() = default;

    static Window line(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw std::invalid_argument("Window::line: empty interval [" +
                                                 std::to_string(lo) + "," + std::to_string(hi) + "]");
        Window w;
        w.rank_ = 1;
        w.lo_ = {lo, 0};
        w.hi_ = {hi, 0};
        return w;
    }

    static Window rect(std::int64_t lo0, std::int64_t hi0, std::int64_t lo1, std::int64_t hi1) {
        if (hi0 < lo0 || hi1 < lo1) throw std::invalid_argument("Window::rect: empty rectangle");
        Window w;
        w.rank_ = 2;
        w.lo_ = {lo0, lo1};
        w.hi_ = {hi0, hi1};
        return w;
    }

    int rank() const { return rank_; }
    std::int64_t lo(int axis = 0) const { return lo_[static_cast<std::size_t>(axis)]; }
    std::int64_t hi(int axis = 0) const { return hi_[static_cast<std::size_t>(axis)]; }
    std::int64_t extent(int axis = 0) const { return hi(axis) - lo(axis) + 1; }

    std::size_t size() const {
        std::size_t n = static_cast<std::size_t>(extent(0));
        if (rank_ == 2) n *= static_cast<std::size_t>(extent(1));
        return n;
    }

    bool contains(std::int64_t t0, std::int64_t t1 = 0) const {
        if (t0 < lo(0) || t0 > hi(0)) return false;
        if (rank_ == 2 && (t1 < lo(1) || t1 > hi(1))) return false;
        return true;
    }

    bool covers(const Window& inner) const {
        if (rank_ != inner.rank_) return false;
        for (int a = 0; a < rank_; ++a)
            if (inner.lo(a) < lo(a) || inner.hi(a) > hi(a)) return false;
        return true;
    }

    /// Row-major flat index of a point inside the window.
    std::size_t flat(std::int64_t t0, std::int64_t t1 = 0) const {
        std::size_t i = static_cast<std::size_t>(t0 - lo(0));
        if (rank_ == 2) i = i * static_cast<std::size_t>(extent(1)) + static_cast<std::size_t>(t1 - lo(1));
        return i;
    }

    /// Window of v-indices touched when convolving a filter on `support`
    /// and evaluating on `*this`: per axis [lo - sup.hi, hi - sup.lo].
    Window convolution_input(const Window& support) const {
        if (support.rank_ != rank_)
            throw std::invalid_argument("convolution_input: rank mismatch");
        if (rank_ == 1) return line(lo(0) - support.hi(0), hi(0) - support.lo(0));
        return rect(lo(0) - support.hi(0), hi(0) - support.lo(0),
                    lo(1) - support.hi(1), hi(1) - support.lo(1));
    }

    Window dilated(std::int64_t by) const {
        if (rank_ == 1) return line(lo(0) - by, hi(0) + by);
        return rect(lo(0) - by, hi(0) + by, lo(1) - by, hi(1) + by);
    }

    bool operator==(const Window& o) const {
        return rank_ == o.rank_ && lo_ == o.lo_ && hi_ == o.hi_;
    }

    std::string str() const {
        if (rank_ == 1) return "[" + std::to_string(lo(0)) + "," + std::to_string(hi(0)) + "]";
        return "[" + std::to_string(lo(0)) + "," + std::to_string(hi(0)) + "]x[" +
               std::to_string(lo(1)) + "," + std::to_string(hi(1)) + "]";
    }

private:
    int rank_ = 1;
    std::array<std::int64_t, 2> lo_{0, 0};
    std::array<std::int64_t, 2> hi_{0, 0};
};

} // namespace sbr

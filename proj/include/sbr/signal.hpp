#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "sbr/errors.hpp"
#include "sbr/window.hpp"

namespace sbr {

using cplx = std::complex<double>;

/// Complex-valued sequence on an integer window (1-D) or grid (2-D),
/// stored row-major. Values off the window are implicitly zero.
class Signal {
public:
    Signal() : window_(Window::line(0, 0)), values_(1) {}

    explicit Signal(Window w) : window_(w), values_(w.size()) {}

    Signal(Window w, std::vector<cplx> v) : window_(w), values_(std::move(v)) {
        if (values_.size() != window_.size())
            throw dimension_mismatch("Signal: " + std::to_string(values_.size()) +
                                     " values for window " + window_.str());
    }

    const Window& window() const { return window_; }
    std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }
    std::size_t size() const { return values_.size(); }

    cplx& operator()(std::int64_t t0, std::int64_t t1 = 0) { return values_[window_.flat(t0, t1)]; }
    const cplx& operator()(std::int64_t t0, std::int64_t t1 = 0) const { return values_[window_.flat(t0, t1)]; }

    /// Value at an index, zero off the window.
    cplx at(std::int64_t t0, std::int64_t t1 = 0) const {
        return window_.contains(t0, t1) ? values_[window_.flat(t0, t1)] : cplx{};
    }

    /// Copy of the values on a sub-window. Throws missing_data_error unless
    /// zero_extend is set, in which case off-window samples are zero.
    Signal restricted(const Window& sub, bool zero_extend = false) const {
        if (!zero_extend && !window_.covers(sub))
            throw missing_data_error("samples needed on " + sub.str() +
                                     " but observations cover " + window_.str());
        Signal out(sub);
        if (sub.rank() == 1) {
            for (std::int64_t t = sub.lo(); t <= sub.hi(); ++t) out(t) = at(t);
        } else {
            for (std::int64_t r = sub.lo(0); r <= sub.hi(0); ++r)
                for (std::int64_t c = sub.lo(1); c <= sub.hi(1); ++c) out(r, c) = at(r, c);
        }
        return out;
    }

    double norm2() const {
        double s = 0;
        for (const auto& v : values_) s += std::norm(v);
        return std::sqrt(s);
    }

private:
    Window window_;
    std::vector<cplx> values_;
};

/// Linear filter: complex coefficients on a support window, e.g. [0,m] for a
/// causal filter or [-m,m] for an interpolating one. A filter is the same
/// data as a Signal; the distinct type marks which role it plays in u*v.
struct Filter {
    Window support = Window::line(0, 0);
    std::vector<cplx> coeffs = {cplx{}};

    Filter() = default;
    Filter(Window s, std::vector<cplx> c) : support(s), coeffs(std::move(c)) {
        if (coeffs.size() != support.size())
            throw dimension_mismatch("Filter: coefficient count does not match support " + support.str());
    }

    static Filter delta() { return Filter(Window::line(0, 0), {cplx{1.0, 0.0}}); }

    std::size_t size() const { return coeffs.size(); }

    cplx at(std::int64_t t0, std::int64_t t1 = 0) const {
        return support.contains(t0, t1) ? coeffs[support.flat(t0, t1)] : cplx{};
    }

    double norm2() const {
        double s = 0;
        for (const auto& v : coeffs) s += std::norm(v);
        return std::sqrt(s);
    }

    Signal as_signal() const { return Signal(support, coeffs); }
};

} // namespace sbr

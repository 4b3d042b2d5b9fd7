#include "sbr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sbr/fft.hpp"

namespace sbr {

namespace {

std::vector<cplx> scaled(std::vector<cplx> v, double s) {
    for (auto& x : v) x *= s;
    return v;
}

// Linear convolution of two flat sequences (shapes a0 x a1, b0 x b1) on the
// zero-padded grid (a0+b0-1) x (a1+b1-1).
std::vector<cplx> linear_conv(std::span<const cplx> a, std::int64_t a0, std::int64_t a1,
                              std::span<const cplx> b, std::int64_t b0, std::int64_t b1,
                              std::int64_t& p0, std::int64_t& p1) {
    p0 = a0 + b0 - 1;
    p1 = a1 + b1 - 1;
    std::vector<cplx> pa(static_cast<std::size_t>(p0 * p1));
    std::vector<cplx> pb(static_cast<std::size_t>(p0 * p1));
    for (std::int64_t r = 0; r < a0; ++r)
        for (std::int64_t c = 0; c < a1; ++c)
            pa[static_cast<std::size_t>(r * p1 + c)] = a[static_cast<std::size_t>(r * a1 + c)];
    for (std::int64_t r = 0; r < b0; ++r)
        for (std::int64_t c = 0; c < b1; ++c)
            pb[static_cast<std::size_t>(r * p1 + c)] = b[static_cast<std::size_t>(r * b1 + c)];
    auto fa = fft::raw2(pa, p0, p1, -1);
    auto fb = fft::raw2(pb, p0, p1, -1);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    auto out = fft::raw2(fa, p0, p1, +1);
    const double inv = 1.0 / static_cast<double>(p0 * p1);
    for (auto& x : out) x *= inv;
    return out;
}

} // namespace

double SpectralVector::lp_norm(double p) const {
    if (p < 1.0) throw std::invalid_argument("spectral norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 2.0) {
        double s = 0;
        for (const auto& v : values) s += std::norm(v);
        return std::sqrt(s);
    }
    double s = 0;
    for (const auto& v : values) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

SpectralVector dft(std::span<const cplx> z) {
    if (z.empty()) throw std::invalid_argument("dft: empty input");
    SpectralVector f;
    f.n0 = static_cast<std::int64_t>(z.size());
    f.n1 = 1;
    f.values = scaled(fft::raw(z, +1), 1.0 / std::sqrt(static_cast<double>(z.size())));
    return f;
}

SpectralVector dft2(std::span<const cplx> z, std::int64_t n0, std::int64_t n1) {
    if (z.empty()) throw std::invalid_argument("dft: empty input");
    SpectralVector f;
    f.n0 = n0;
    f.n1 = n1;
    f.values = scaled(fft::raw2(z, n0, n1, +1), 1.0 / std::sqrt(static_cast<double>(z.size())));
    return f;
}

SpectralVector dft(const Signal& x) {
    const Window& w = x.window();
    if (w.rank() == 1) return dft(x.values());
    return dft2(x.values(), w.extent(0), w.extent(1));
}

SpectralVector dft(const Filter& f) {
    const Window& w = f.support;
    if (w.rank() == 1) return dft(std::span<const cplx>(f.coeffs));
    return dft2(f.coeffs, w.extent(0), w.extent(1));
}

std::vector<cplx> idft(const SpectralVector& f) {
    if (f.values.empty()) throw std::invalid_argument("idft: empty input");
    return scaled(fft::raw2(f.values, f.n0, f.n1, -1), 1.0 / std::sqrt(static_cast<double>(f.values.size())));
}

double spectral_norm(const Signal& x, double p) { return dft(x).lp_norm(p); }
double spectral_norm(const Filter& f, double p) { return dft(f).lp_norm(p); }

Signal convolve(const Filter& u, const Signal& v, const Window& out_window, bool zero_extend) {
    if (u.support.rank() != v.window().rank() || out_window.rank() != v.window().rank())
        throw dimension_mismatch("convolve: mixed 1-D/2-D arguments");
    const Window needed = out_window.convolution_input(u.support);
    if (!zero_extend && !v.window().covers(needed))
        throw missing_data_error("convolve: samples needed on " + needed.str() +
                                 " but observations cover " + v.window().str());
    const Signal seg = v.restricted(needed, /*zero_extend=*/true);

    const std::int64_t a0 = u.support.extent(0);
    const std::int64_t a1 = u.support.rank() == 2 ? u.support.extent(1) : 1;
    const std::int64_t b0 = needed.extent(0);
    const std::int64_t b1 = needed.rank() == 2 ? needed.extent(1) : 1;
    std::int64_t p0 = 0, p1 = 0;
    auto full = linear_conv(u.coeffs, a0, a1, seg.values(), b0, b1, p0, p1);

    // full[j] is the value at index u.lo + needed.lo + j per axis.
    Signal out(out_window);
    const std::int64_t base0 = u.support.lo(0) + needed.lo(0);
    const std::int64_t base1 = (out_window.rank() == 2) ? u.support.lo(1) + needed.lo(1) : 0;
    if (out_window.rank() == 1) {
        for (std::int64_t t = out_window.lo(); t <= out_window.hi(); ++t)
            out(t) = full[static_cast<std::size_t>(t - base0)];
    } else {
        for (std::int64_t r = out_window.lo(0); r <= out_window.hi(0); ++r)
            for (std::int64_t c = out_window.lo(1); c <= out_window.hi(1); ++c)
                out(r, c) = full[static_cast<std::size_t>((r - base0) * p1 + (c - base1))];
    }
    return out;
}

ConvolutionOperator ConvolutionOperator::toeplitz(const Signal& y, const Window& filter_support,
                                                  const Window& target) {
    if (filter_support.rank() != y.window().rank() || target.rank() != y.window().rank())
        throw dimension_mismatch("toeplitz: mixed 1-D/2-D arguments");
    ConvolutionOperator op;
    op.kind_ = Kind::ToeplitzT;
    op.support_ = filter_support;
    op.target_ = target;
    op.input_ = target.convolution_input(filter_support);
    if (!y.window().covers(op.input_))
        throw missing_data_error("toeplitz: samples needed on " + op.input_.str() +
                                 " but observations cover " + y.window().str());
    op.rows_ = target.size();
    op.cols_ = filter_support.size();

    const Signal seg = y.restricted(op.input_);
    const int rank = y.window().rank();
    for (int a = 0; a < 2; ++a) {
        if (a < rank) {
            const std::int64_t ly = op.input_.extent(a);
            const std::int64_t lmax = std::max(filter_support.extent(a), target.extent(a));
            op.pad_[static_cast<std::size_t>(a)] = ly + lmax - 1;
        } else {
            op.pad_[static_cast<std::size_t>(a)] = 1;
        }
    }
    const std::int64_t p0 = op.pad_[0], p1 = op.pad_[1];
    std::vector<cplx> buf(static_cast<std::size_t>(p0 * p1));
    const std::int64_t s0 = op.input_.extent(0);
    const std::int64_t s1 = rank == 2 ? op.input_.extent(1) : 1;
    for (std::int64_t r = 0; r < s0; ++r)
        for (std::int64_t c = 0; c < s1; ++c)
            buf[static_cast<std::size_t>(r * p1 + c)] = seg.values()[static_cast<std::size_t>(r * s1 + c)];
    op.y_spec_ = fft::raw2(buf, p0, p1, -1);

    std::fill(buf.begin(), buf.end(), cplx{});
    for (std::int64_t r = 0; r < s0; ++r)
        for (std::int64_t c = 0; c < s1; ++c)
            buf[static_cast<std::size_t>(r * p1 + c)] =
                std::conj(seg.values()[static_cast<std::size_t>((s0 - 1 - r) * s1 + (s1 - 1 - c))]);
    op.y_rev_spec_ = fft::raw2(buf, p0, p1, -1);
    return op;
}

ConvolutionOperator ConvolutionOperator::banded(const Filter& phi, std::int64_t n) {
    if (phi.support.rank() != 1 || phi.support.lo() != 0)
        throw std::invalid_argument("banded: phi must be causal 1-D on [0,m]");
    if (n < 0) throw std::invalid_argument("banded: n must be >= 0");
    ConvolutionOperator op;
    op.kind_ = Kind::BandedM;
    op.phi_ = phi;
    op.band_n_ = n;
    op.rows_ = static_cast<std::size_t>(n + 1);
    op.cols_ = static_cast<std::size_t>(phi.support.hi() + n + 1);
    return op;
}

ConvolutionOperator ConvolutionOperator::circulant(const Filter& phi, std::int64_t size) {
    if (phi.support.rank() != 1 || phi.support.lo() != 0)
        throw std::invalid_argument("circulant: phi must be causal 1-D on [0,m]");
    if (size < static_cast<std::int64_t>(phi.size()))
        throw dimension_mismatch("circulant: size smaller than filter support");
    ConvolutionOperator op;
    op.kind_ = Kind::CirculantC;
    op.rows_ = op.cols_ = static_cast<std::size_t>(size);
    std::vector<cplx> padded(static_cast<std::size_t>(size));
    std::copy(phi.coeffs.begin(), phi.coeffs.end(), padded.begin());
    op.circ_eigs_ = fft::raw(padded, +1); // sqrt(N) (F phi)_k
    return op;
}

std::vector<cplx> ConvolutionOperator::matvec(std::span<const cplx> v) const {
    if (v.size() != cols_) throw dimension_mismatch("matvec: expected " + std::to_string(cols_) +
                                                    " entries, got " + std::to_string(v.size()));
    switch (kind_) {
    case Kind::ToeplitzT: {
        const std::int64_t p0 = pad_[0], p1 = pad_[1];
        const int rank = support_.rank();
        std::vector<cplx> buf(static_cast<std::size_t>(p0 * p1));
        const std::int64_t f0 = support_.extent(0);
        const std::int64_t f1 = rank == 2 ? support_.extent(1) : 1;
        for (std::int64_t r = 0; r < f0; ++r)
            for (std::int64_t c = 0; c < f1; ++c)
                buf[static_cast<std::size_t>(r * p1 + c)] = v[static_cast<std::size_t>(r * f1 + c)];
        auto spec = fft::raw2(buf, p0, p1, -1);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= y_spec_[i];
        auto full = fft::raw2(spec, p0, p1, +1);
        const double inv = 1.0 / static_cast<double>(p0 * p1);
        // full[j] = [phi*y] at index support.lo + input.lo + j.
        std::vector<cplx> out(rows_);
        const std::int64_t base0 = support_.lo(0) + input_.lo(0);
        const std::int64_t base1 = rank == 2 ? support_.lo(1) + input_.lo(1) : 0;
        const std::int64_t t1 = rank == 2 ? target_.extent(1) : 1;
        for (std::int64_t r = 0; r < target_.extent(0); ++r)
            for (std::int64_t c = 0; c < t1; ++c) {
                const std::int64_t j0 = target_.lo(0) + r - base0;
                const std::int64_t j1 = (rank == 2 ? target_.lo(1) + c : 0) - base1;
                out[static_cast<std::size_t>(r * t1 + c)] =
                    full[static_cast<std::size_t>(j0 * p1 + j1)] * inv;
            }
        return out;
    }
    case Kind::BandedM: {
        const std::int64_t m = phi_.support.hi();
        Signal yseg(Window::line(-m, band_n_), std::vector<cplx>(v.begin(), v.end()));
        Signal out = convolve(phi_, yseg, Window::line(0, band_n_));
        return std::vector<cplx>(out.values().begin(), out.values().end());
    }
    case Kind::CirculantC: {
        auto spec = fft::raw(v, +1);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= circ_eigs_[i];
        auto out = fft::raw(spec, -1);
        const double inv = 1.0 / static_cast<double>(rows_);
        for (auto& x : out) x *= inv;
        return out;
    }
    }
    throw std::logic_error("unreachable");
}

std::vector<cplx> ConvolutionOperator::rmatvec(std::span<const cplx> w) const {
    if (w.size() != rows_) throw dimension_mismatch("rmatvec: expected " + std::to_string(rows_) +
                                                    " entries, got " + std::to_string(w.size()));
    switch (kind_) {
    case Kind::ToeplitzT: {
        // (T^H w)_tau = sum_t conj(y_{t-tau}) w_t: correlation, realized as
        // convolution with the conjugate reversal of the y segment.
        const std::int64_t p0 = pad_[0], p1 = pad_[1];
        const int rank = support_.rank();
        std::vector<cplx> buf(static_cast<std::size_t>(p0 * p1));
        const std::int64_t t1 = rank == 2 ? target_.extent(1) : 1;
        for (std::int64_t r = 0; r < target_.extent(0); ++r)
            for (std::int64_t c = 0; c < t1; ++c)
                buf[static_cast<std::size_t>(r * p1 + c)] = w[static_cast<std::size_t>(r * t1 + c)];
        auto spec = fft::raw2(buf, p0, p1, -1);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= y_rev_spec_[i];
        auto full = fft::raw2(spec, p0, p1, +1);
        const double inv = 1.0 / static_cast<double>(p0 * p1);
        // g_u = conj(y_{-u}) lives on [-input.hi, -input.lo], so the full
        // convolution g*w starts at flat index corresponding to
        // target.lo - input.hi; lag tau sits at tau + input.hi - target.lo.
        std::vector<cplx> out(cols_);
        const std::int64_t f1 = rank == 2 ? support_.extent(1) : 1;
        for (std::int64_t r = 0; r < support_.extent(0); ++r)
            for (std::int64_t c = 0; c < f1; ++c) {
                const std::int64_t k0 = (support_.lo(0) + r) + input_.hi(0) - target_.lo(0);
                const std::int64_t k1 = rank == 2
                    ? (support_.lo(1) + c) + input_.hi(1) - target_.lo(1)
                    : 0;
                out[static_cast<std::size_t>(r * f1 + c)] =
                    full[static_cast<std::size_t>(k0 * p1 + k1)] * inv;
            }
        return out;
    }
    case Kind::BandedM: {
        // (M^H w)_j = conj(phi_{i - (j - m)}) w_i summed over valid i.
        const std::int64_t m = phi_.support.hi();
        std::vector<cplx> out(cols_);
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(cols_); ++j) {
            const std::int64_t t = j - m; // time index of v_j
            cplx acc{};
            for (std::int64_t i = std::max<std::int64_t>(0, t); i <= std::min(band_n_, t + m); ++i)
                acc += std::conj(phi_.coeffs[static_cast<std::size_t>(i - t)]) * w[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(j)] = acc;
        }
        return out;
    }
    case Kind::CirculantC: {
        auto spec = fft::raw(w, +1);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= std::conj(circ_eigs_[i]);
        auto out = fft::raw(spec, -1);
        const double inv = 1.0 / static_cast<double>(rows_);
        for (auto& x : out) x *= inv;
        return out;
    }
    }
    throw std::logic_error("unreachable");
}

std::vector<std::vector<cplx>> ConvolutionOperator::dense() const {
    std::vector<std::vector<cplx>> mat(rows_, std::vector<cplx>(cols_));
    std::vector<cplx> e(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        e[j] = 1.0;
        auto col = matvec(e);
        for (std::size_t i = 0; i < rows_; ++i) mat[i][j] = col[i];
        e[j] = 0.0;
    }
    return mat;
}

FrobeniusReport frobenius_identities_check(const Signal& y, const Filter& phi, std::int64_t n) {
    const std::int64_t m = phi.support.hi();
    FrobeniusReport rep;

    auto T = ConvolutionOperator::toeplitz(y, Window::line(0, m), Window::line(0, n));
    for (const auto& row : T.dense())
        for (const auto& v : row) rep.toeplitz_lhs += std::norm(v);
    for (std::int64_t tau = 0; tau <= m; ++tau)
        for (std::int64_t t = 0; t <= n; ++t) rep.toeplitz_rhs += std::norm(y.at(t - tau));
    rep.toeplitz_residual = std::abs(rep.toeplitz_lhs - rep.toeplitz_rhs);

    auto M = ConvolutionOperator::banded(phi, n);
    for (const auto& row : M.dense())
        for (const auto& v : row) rep.banded_lhs += std::norm(v);
    double phi2 = 0;
    for (const auto& c : phi.coeffs) phi2 += std::norm(c);
    rep.banded_rhs = static_cast<double>(n + 1) * phi2;
    rep.banded_residual = std::abs(rep.banded_lhs - rep.banded_rhs);
    return rep;
}

double window_skew(std::int64_t m, std::int64_t n) {
    return std::sqrt(static_cast<double>(n + 1) / static_cast<double>(m + 1));
}

double zero_padded_extreme_point_norm(std::int64_t m, std::int64_t n, std::int64_t j) {
    // [u^j]_0^m = F_m^{-1} e_j, zero-padded to length m+n+1.
    const std::int64_t len = m + 1;
    const double pi2 = 2.0 * std::acos(-1.0);
    std::vector<cplx> u(static_cast<std::size_t>(m + n + 1));
    const double scale = 1.0 / std::sqrt(static_cast<double>(len));
    for (std::int64_t t = 0; t < len; ++t) {
        const double ang = -pi2 * static_cast<double>(j) * static_cast<double>(t) / static_cast<double>(len);
        u[static_cast<std::size_t>(t)] = scale * cplx(std::cos(ang), std::sin(ang));
    }
    return dft(std::span<const cplx>(u)).lp_norm(1.0);
}

} // namespace sbr

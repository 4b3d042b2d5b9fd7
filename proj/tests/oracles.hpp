// Independent reference implementations used as test oracles: naive O(n^2)
// transforms, direct summation convolution, dense convolution matrices, a
// bisection l1-ball projection, and long-run first-order reference solvers.
// Nothing here may call the FFT/solver paths it is used to check.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "sbr/signal.hpp"
#include "sbr/solver.hpp"

namespace oracles {

using sbr::cplx;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

inline std::vector<cplx> naive_dft(const std::vector<cplx>& z) {
    const std::size_t n = z.size();
    std::vector<cplx> out(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = 2.0 * kPi * static_cast<double>(k) * static_cast<double>(t) / static_cast<double>(n);
            acc += z[t] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = scale * acc;
    }
    return out;
}

inline std::vector<cplx> naive_idft(const std::vector<cplx>& f) {
    const std::size_t n = f.size();
    std::vector<cplx> out(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t t = 0; t < n; ++t) {
        cplx acc{};
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(t) / static_cast<double>(n);
            acc += f[k] * cplx(std::cos(ang), std::sin(ang));
        }
        out[t] = scale * acc;
    }
    return out;
}

/// [u*v]_t by direct summation over the filter support.
inline sbr::Signal direct_convolve(const sbr::Filter& u, const sbr::Signal& v, const sbr::Window& out_w) {
    sbr::Signal out(out_w);
    if (out_w.rank() == 1) {
        for (std::int64_t t = out_w.lo(); t <= out_w.hi(); ++t) {
            cplx acc{};
            for (std::int64_t tau = u.support.lo(); tau <= u.support.hi(); ++tau)
                acc += u.at(tau) * v.at(t - tau);
            out(t) = acc;
        }
    } else {
        for (std::int64_t r = out_w.lo(0); r <= out_w.hi(0); ++r)
            for (std::int64_t c = out_w.lo(1); c <= out_w.hi(1); ++c) {
                cplx acc{};
                for (std::int64_t a = u.support.lo(0); a <= u.support.hi(0); ++a)
                    for (std::int64_t b = u.support.lo(1); b <= u.support.hi(1); ++b)
                        acc += u.at(a, b) * v.at(r - a, c - b);
                out(r, c) = acc;
            }
    }
    return out;
}

/// Dense T(y): rows t in target, columns tau in support, entry y_{t-tau}.
inline CMatrix dense_toeplitz(const sbr::Signal& y, std::int64_t m, std::int64_t n) {
    CMatrix T(n + 1, m + 1);
    for (std::int64_t t = 0; t <= n; ++t)
        for (std::int64_t tau = 0; tau <= m; ++tau) T(t, tau) = y.at(t - tau);
    return T;
}

/// Dense M(phi): (n+1) x (m+n+1), row t, column j (= time j-m): phi_{t-j+m}.
inline CMatrix dense_banded(const sbr::Filter& phi, std::int64_t n) {
    const std::int64_t m = phi.support.hi();
    CMatrix M = CMatrix::Zero(n + 1, m + n + 1);
    for (std::int64_t t = 0; t <= n; ++t)
        for (std::int64_t j = 0; j <= m + n; ++j) {
            const std::int64_t tau = t - (j - m);
            if (tau >= 0 && tau <= m) M(t, j) = phi.coeffs[static_cast<std::size_t>(tau)];
        }
    return M;
}

/// Dense circulant with first column = phi zero-padded: entry phi_{(i-j) mod N}.
inline CMatrix dense_circulant(const sbr::Filter& phi, std::int64_t N) {
    CMatrix C = CMatrix::Zero(N, N);
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = 0; j < N; ++j) {
            const std::int64_t k = ((i - j) % N + N) % N;
            if (k <= phi.support.hi()) C(i, j) = phi.coeffs[static_cast<std::size_t>(k)];
        }
    return C;
}

/// l1-ball projection via bisection on the threshold.
inline std::vector<cplx> project_l1_bisection(const std::vector<cplx>& z, double radius) {
    double l1 = 0, maxmag = 0;
    for (const auto& v : z) {
        l1 += std::abs(v);
        maxmag = std::max(maxmag, std::abs(v));
    }
    if (l1 <= radius) return z;
    double lo = 0, hi = maxmag;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double s = 0;
        for (const auto& v : z) s += std::max(std::abs(v) - mid, 0.0);
        (s > radius ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    std::vector<cplx> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double m = std::abs(z[i]);
        out[i] = m > t ? z[i] * ((m - t) / m) : cplx{};
    }
    return out;
}

/// Long-run projected gradient descent with constant step 1/L (L from a dense
/// SVD), projection by bisection. Returns the best objective seen.
inline double projected_gradient_oracle(const CMatrix& A, const CVector& b, double radius, int iters) {
    const double L = 2.0 * std::pow(A.jacobiSvd().singularValues()(0), 2.0);
    CVector f = CVector::Zero(A.cols());
    double best = (b - A * f).squaredNorm();
    for (int k = 0; k < iters; ++k) {
        CVector g = 2.0 * (A.adjoint() * (A * f - b));
        CVector p = f - g / L;
        std::vector<cplx> pv(p.data(), p.data() + p.size());
        auto proj = project_l1_bisection(pv, radius);
        for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = proj[static_cast<std::size_t>(i)];
        best = std::min(best, (b - A * f).squaredNorm());
    }
    return best;
}

/// Long-run proximal gradient (ISTA) with constant step 1/L for
/// ||b - A f||^2 + lambda_eff ||f||_1.
inline double proximal_gradient_oracle(const CMatrix& A, const CVector& b, double lambda_eff, int iters) {
    const double L = 2.0 * std::pow(A.jacobiSvd().singularValues()(0), 2.0);
    CVector f = CVector::Zero(A.cols());
    auto objective = [&](const CVector& v) {
        return (b - A * v).squaredNorm() + lambda_eff * v.cwiseAbs().sum();
    };
    double best = objective(f);
    for (int k = 0; k < iters; ++k) {
        CVector g = 2.0 * (A.adjoint() * (A * f - b));
        CVector p = f - g / L;
        const double tau = lambda_eff / L;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            const double m = std::abs(p(i));
            f(i) = m > tau ? p(i) * ((m - tau) / m) : cplx{};
        }
        best = std::min(best, objective(f));
    }
    return best;
}

inline std::vector<cplx> random_complex(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::vector<cplx> out(n);
    for (auto& v : out) v = cplx(gauss(rng), gauss(rng));
    return out;
}

inline sbr::LeastSquaresSpec dense_spec(const CMatrix& A, const CVector& b) {
    sbr::LeastSquaresSpec spec;
    spec.dim = static_cast<std::size_t>(A.cols());
    spec.apply = [A](std::span<const cplx> f) {
        CVector v = Eigen::Map<const CVector>(f.data(), static_cast<Eigen::Index>(f.size()));
        CVector out = A * v;
        return std::vector<cplx>(out.data(), out.data() + out.size());
    };
    spec.apply_adjoint = [A](std::span<const cplx> w) {
        CVector v = Eigen::Map<const CVector>(w.data(), static_cast<Eigen::Index>(w.size()));
        CVector out = A.adjoint() * v;
        return std::vector<cplx>(out.data(), out.data() + out.size());
    };
    spec.b.assign(b.data(), b.data() + b.size());
    return spec;
}

} // namespace oracles

#include "sbr/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbr/spectrum.hpp"

namespace sbr {

namespace {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

CMatrix basis_matrix(const std::vector<Signal>& basis) {
    if (basis.empty()) throw std::invalid_argument("empty basis");
    const Window& w = basis.front().window();
    if (w.rank() != 1) throw std::invalid_argument("subspace basis must be 1-D");
    CMatrix B(w.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (!(basis[j].window() == w)) throw dimension_mismatch("basis windows differ");
        for (std::size_t i = 0; i < w.size(); ++i) B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = basis[j].values()[i];
    }
    return B;
}

/// Thin orthonormal basis Q of the column span (rank-revealing).
CMatrix orthonormalize(const CMatrix& B, double tol = 1e-10) {
    Eigen::ColPivHouseholderQR<CMatrix> qr(B);
    qr.setThreshold(tol);
    const Eigen::Index r = qr.rank();
    CMatrix Q = qr.householderQ() * CMatrix::Identity(B.rows(), r);
    return Q;
}

} // namespace

CharPoly CharPoly::from_coeffs(std::vector<cplx> c) {
    if (c.size() < 2) throw std::invalid_argument("CharPoly: degree must be >= 1");
    if (std::abs(c.front() - cplx{1.0, 0.0}) > 1e-12)
        throw std::invalid_argument("CharPoly: p(0) must equal 1");
    if (std::abs(c.back()) == 0.0) throw std::invalid_argument("CharPoly: leading coefficient is zero");
    CharPoly p;
    p.coeffs = std::move(c);
    return p;
}

CharPoly CharPoly::from_roots(std::span<const cplx> thetas) {
    if (thetas.empty()) throw std::invalid_argument("CharPoly: need at least one root");
    std::vector<cplx> c{cplx{1.0, 0.0}};
    for (const auto& th : thetas) {
        if (std::abs(th) < 1e-14) throw std::invalid_argument("CharPoly: zero root not allowed (p(0)=1)");
        // multiply by (1 - z/th)
        std::vector<cplx> next(c.size() + 1);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= c[i] / th;
        }
        c = std::move(next);
    }
    CharPoly p;
    p.coeffs = std::move(c);
    p.roots = std::vector<cplx>(thetas.begin(), thetas.end());
    return p;
}

std::vector<cplx> CharPoly::all_roots() const {
    if (roots) return *roots;
    // Companion matrix of the monic reversal: roots of sum p_k z^k.
    const std::size_t s = degree();
    CMatrix comp = CMatrix::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    const cplx lead = coeffs.back();
    for (std::size_t i = 0; i + 1 < s; ++i) comp(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t i = 0; i < s; ++i)
        comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s - 1)) = -coeffs[i] / lead;
    Eigen::ComplexEigenSolver<CMatrix> es(comp);
    std::vector<cplx> out(s);
    for (std::size_t i = 0; i < s; ++i) out[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    return out;
}

SubspaceModel SubspaceModel::from_poly(CharPoly p, const Window& w) {
    SubspaceModel m;
    m.dim = p.degree();
    m.basis = subspace_from_poly(p, w);
    m.poly = std::move(p);
    return m;
}

SubspaceModel SubspaceModel::from_basis(std::vector<Signal> basis) {
    SubspaceModel m;
    m.dim = basis.size();
    m.basis = std::move(basis);
    return m;
}

CharPoly poly_from_subspace(const std::vector<Signal>& basis, double tol) {
    const CMatrix B = basis_matrix(basis);
    const std::size_t s = basis.size();
    const std::size_t len = static_cast<std::size_t>(B.rows());
    if (len < 2 * s + 1)
        throw std::invalid_argument("poly_from_subspace: window too short for degree " + std::to_string(s));
    if (orthonormalize(B).cols() != static_cast<Eigen::Index>(s))
        throw std::invalid_argument("poly_from_subspace: basis columns are dependent");

    // Stack the difference equation over all basis sequences:
    // sum_{tau=1}^s p_tau x_{t-tau} = -x_t for t = s .. len-1.
    const std::size_t rows_per = len - s;
    CMatrix A(rows_per * s, s);
    CVector rhs(rows_per * s);
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t t = s; t < len; ++t) {
            const std::size_t r = j * rows_per + (t - s);
            for (std::size_t tau = 1; tau <= s; ++tau)
                A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(tau - 1)) =
                    B(static_cast<Eigen::Index>(t - tau), static_cast<Eigen::Index>(j));
            rhs(static_cast<Eigen::Index>(r)) = -B(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
        }
    CVector p = A.colPivHouseholderQr().solve(rhs);
    CVector resid = A * p - rhs;
    const double rel = resid.norm() / std::max(1.0, rhs.norm());
    if (rel > tol) {
        std::vector<cplx> cert(resid.data(), resid.data() + resid.size());
        throw not_shift_invariant_error(
            "poly_from_subspace: no degree-" + std::to_string(s) +
                " difference equation annihilates the basis (residual " + std::to_string(rel) + ")",
            std::move(cert));
    }
    std::vector<cplx> coeffs(s + 1);
    coeffs[0] = 1.0;
    for (std::size_t k = 1; k <= s; ++k) coeffs[k] = p(static_cast<Eigen::Index>(k - 1));
    return CharPoly::from_coeffs(std::move(coeffs));
}

std::vector<Signal> subspace_from_poly(const CharPoly& p, const Window& w) {
    if (w.rank() != 1) throw std::invalid_argument("subspace_from_poly: 1-D windows only");
    const std::size_t s = p.degree();
    if (w.size() < s) throw std::invalid_argument("subspace_from_poly: window shorter than degree");
    std::vector<Signal> basis;
    basis.reserve(s);
    for (std::size_t j = 0; j < s; ++j) {
        Signal x(w);
        x(w.lo() + static_cast<std::int64_t>(j)) = 1.0;
        for (std::int64_t t = w.lo() + static_cast<std::int64_t>(s); t <= w.hi(); ++t) {
            cplx acc{};
            for (std::size_t tau = 1; tau <= s; ++tau) acc += p.coeffs[tau] * x(t - static_cast<std::int64_t>(tau));
            x(t) = -acc;
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

ProjectorColumnFilter projector_column_filter(const std::vector<Signal>& basis) {
    const CMatrix B = basis_matrix(basis);
    const CMatrix Q = orthonormalize(B);
    if (Q.cols() != static_cast<Eigen::Index>(basis.size()))
        throw std::invalid_argument("projector_column_filter: rank-deficient basis");
    const std::int64_t n = basis.front().window().hi() - basis.front().window().lo();
    const Eigen::Index len = Q.rows();

    // Column norms of Pi = Q Q^H are the row norms of Q^H, i.e. ||Q.row(i)||.
    Eigen::Index iota = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < len; ++i) {
        const double nrm = Q.row(i).norm();
        if (nrm < best - 1e-15) {
            best = nrm;
            iota = i;
        }
    }
    const CVector col = Q * Q.row(iota).adjoint(); // Pi e_iota

    // phi_j = conj(Pi_iota[iota - j]) placed so the iota-th element is central.
    Filter phi(Window::line(-n, n), std::vector<cplx>(static_cast<std::size_t>(2 * n + 1)));
    for (Eigen::Index k = 0; k < len; ++k) {
        const std::int64_t j = iota - k;
        phi.coeffs[phi.support.flat(j)] = std::conj(col(k));
    }
    ProjectorColumnFilter out;
    out.filter = std::move(phi);
    out.column = iota;
    out.norm2 = col.norm();
    out.norm2_bound = std::sqrt(static_cast<double>(basis.size()) / static_cast<double>(len));
    return out;
}

UnitCircleFilter unit_circle_filter(const CharPoly& p, std::int64_t m, double root_tol) {
    const std::int64_t s = static_cast<std::int64_t>(p.degree());
    auto thetas = p.all_roots();
    for (const auto& th : thetas)
        if (std::abs(std::abs(th) - 1.0) > root_tol)
            throw std::invalid_argument("unit_circle_filter: root " + std::to_string(th.real()) + "+" +
                                        std::to_string(th.imag()) + "i is off the unit circle");

    auto params_ok = [&](std::int64_t mm, double& alpha, double& eps) {
        const std::int64_t ell = mm - s;
        if (ell < 1) return false;
        alpha = 4.0 * static_cast<double>(s) * static_cast<double>(s + 2) *
                std::log(8.0 * static_cast<double>(ell) * static_cast<double>(s));
        eps = alpha / (2.0 * static_cast<double>(ell) * static_cast<double>(s));
        return eps < 1.0;
    };

    double alpha = 0, eps = 0;
    if (!params_ok(m, alpha, eps)) {
        std::int64_t mm = std::max<std::int64_t>(m, s + 1);
        double a2, e2;
        while (!params_ok(mm, a2, e2)) ++mm;
        throw std::invalid_argument("unit_circle_filter: m = " + std::to_string(m) +
                                    " is below the construction's validity threshold; use m >= " +
                                    std::to_string(mm));
    }
    const std::int64_t ell = m - s;
    const double delta = 1.0 - eps;

    // D(z) = prod_i (1 - delta z / theta_i), then r = Taylor of 1/D up to ell.
    std::vector<cplx> D{cplx{1.0, 0.0}};
    for (const auto& th : thetas) {
        std::vector<cplx> next(D.size() + 1);
        for (std::size_t i = 0; i < D.size(); ++i) {
            next[i] += D[i];
            next[i + 1] -= D[i] * (delta / th);
        }
        D = std::move(next);
    }
    std::vector<cplx> r(static_cast<std::size_t>(ell + 1));
    r[0] = 1.0;
    for (std::int64_t j = 1; j <= ell; ++j) {
        cplx acc{};
        const std::int64_t kmax = std::min<std::int64_t>(j, s);
        for (std::int64_t k = 1; k <= kmax; ++k) acc += D[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(j - k)];
        r[static_cast<std::size_t>(j)] = -acc;
    }

    // q^ell = p * r has degree m and q^ell(0) = 1; the filter is q_i = -q^ell_i.
    std::vector<cplx> c(static_cast<std::size_t>(m + 1));
    for (std::size_t k = 0; k < p.coeffs.size(); ++k)
        for (std::size_t j = 0; j < r.size(); ++j) c[k + j] += p.coeffs[k] * r[j];

    UnitCircleFilter out;
    std::vector<cplx> qc(static_cast<std::size_t>(m + 1));
    double qnorm_sq = 0;
    for (std::int64_t i = 1; i <= m; ++i) {
        qc[static_cast<std::size_t>(i)] = -c[static_cast<std::size_t>(i)];
        qnorm_sq += std::norm(c[static_cast<std::size_t>(i)]);
    }
    out.q = Filter(Window::line(0, m), std::move(qc));
    out.ell = ell;
    out.alpha = alpha;
    out.epsilon = eps;
    out.qnorm_sq = qnorm_sq;
    out.qnorm_bound = 10.0 * alpha / static_cast<double>(ell);
    out.alpha_small = alpha / static_cast<double>(ell) <= 0.25;
    return out;
}

CompositionBound compose_and_bound(const Filter& phi) {
    if (phi.support.rank() != 1 || phi.support.lo() != 0)
        throw std::invalid_argument("compose_and_bound: phi must be causal on [0,m]");
    const std::int64_t m = phi.support.hi();
    Signal as_sig = phi.as_signal();
    Signal conv = convolve(phi, as_sig, Window::line(0, 2 * m), /*zero_extend=*/true);

    CompositionBound out;
    out.composed = Filter(Window::line(0, 2 * m),
                          std::vector<cplx>(conv.values().begin(), conv.values().end()));
    out.spectral_l1 = spectral_norm(out.composed, 1.0);
    const double phi2 = phi.norm2();
    out.identity_rhs = std::sqrt(static_cast<double>(2 * m + 1)) * phi2 * phi2;
    out.identity_residual = std::abs(out.spectral_l1 - out.identity_rhs);
    out.rho = std::sqrt(static_cast<double>(m + 1)) * phi2;
    out.l1f_bound = 2.0 * out.rho * out.rho / std::sqrt(static_cast<double>(2 * m + 1));
    out.bound_holds = out.spectral_l1 <= out.l1f_bound * (1.0 + 1e-12) + 1e-15;
    return out;
}

double assumption_a_check(const Signal& x, const SubspaceModel& model, std::int64_t m,
                          std::int64_t n, double sigma) {
    if (x.window().rank() != 1) throw std::invalid_argument("assumption_a_check: 1-D only");
    if (!x.window().covers(Window::line(-m, n)))
        throw missing_data_error("assumption_a_check: x needed on [" + std::to_string(-m) + "," +
                                 std::to_string(n) + "] but defined on " + x.window().str());
    std::vector<Signal> basis = model.basis;
    if (basis.empty() && model.poly) basis = subspace_from_poly(*model.poly, Window::line(0, n));
    if (basis.empty()) throw std::invalid_argument("assumption_a_check: model has no basis or polynomial");
    if (!(basis.front().window() == Window::line(0, n)))
        throw dimension_mismatch("assumption_a_check: model basis must live on [0,n]");
    const CMatrix Q = orthonormalize(basis_matrix(basis));

    double worst = 0;
    CVector v(n + 1);
    for (std::int64_t tau = 0; tau <= m; ++tau) {
        for (std::int64_t t = 0; t <= n; ++t) v(t) = x.at(t - tau);
        const double resid = (v - Q * (Q.adjoint() * v)).norm();
        worst = std::max(worst, resid);
    }
    if (sigma == 0.0) return worst <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    return worst / sigma;
}

} // namespace sbr

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sbr/signal.hpp"

namespace sbr {

/// Characteristic polynomial p(z) = sum_k p_k z^k with p(0) = 1 of a
/// homogeneous difference equation sum_k p_k x_{t-k} = 0. Solutions are
/// exponential polynomials with frequencies at the roots of p.
struct CharPoly {
    std::vector<cplx> coeffs;                 ///< p_0 .. p_s, p_0 = 1
    std::optional<std::vector<cplx>> roots;   ///< optional root list

    static CharPoly from_coeffs(std::vector<cplx> c);
    /// p(z) = prod_i (1 - z/theta_i); roots must be nonzero.
    static CharPoly from_roots(std::span<const cplx> thetas);

    std::size_t degree() const { return coeffs.size() - 1; }

    /// Roots, from the stored list or via companion-matrix eigenvalues.
    std::vector<cplx> all_roots() const;
};

class not_shift_invariant_error : public std::runtime_error {
public:
    not_shift_invariant_error(const std::string& what, std::vector<cplx> cert)
        : std::runtime_error(what), certificate(std::move(cert)) {}
    std::vector<cplx> certificate; ///< residual of the best annihilating equation
};

/// Shift-invariant subspace: characteristic polynomial and/or explicit basis
/// on a window, dimension s, closeness kappa in sigma units.
struct SubspaceModel {
    std::optional<CharPoly> poly;
    std::vector<Signal> basis;
    std::size_t dim = 0;
    double kappa = 0.0;

    static SubspaceModel from_poly(CharPoly p, const Window& w);
    static SubspaceModel from_basis(std::vector<Signal> basis);
};

/// Unique p with p(0)=1, deg = #basis, annihilating every basis sequence.
/// Throws not_shift_invariant_error (with the residual certificate) when no
/// degree-s difference equation fits.
CharPoly poly_from_subspace(const std::vector<Signal>& basis, double tol = 1e-8);

/// Basis of solutions of p(Delta)x = 0 on the window, seeded by canonical
/// initial conditions at the window start.
std::vector<Signal> subspace_from_poly(const CharPoly& p, const Window& w);

struct ProjectorColumnFilter {
    Filter filter;              ///< two-sided, support [-n, n]
    std::int64_t column = 0;    ///< minimal-norm projector column used
    double norm2 = 0.0;         ///< ||phi||_2
    double norm2_bound = 0.0;   ///< sqrt(s/(n+1))
};

/// Reproducing filter built from the minimal-norm column of the orthogonal
/// projector onto span(basis): x = phi*x for all x in the subspace, with
/// ||phi||_2 <= sqrt(s/(n+1)).
ProjectorColumnFilter projector_column_filter(const std::vector<Signal>& basis);

struct UnitCircleFilter {
    Filter q;                   ///< support [0,m], q_0 = 0, q*x = x on the subspace
    std::int64_t ell = 0;       ///< truncation order m - s
    double alpha = 0.0;         ///< 4 s (s+2) ln(8 ell s)
    double epsilon = 0.0;       ///< alpha / (2 ell s)
    double qnorm_sq = 0.0;      ///< sum_{i>=1} |q_i|^2
    double qnorm_bound = 0.0;   ///< 10 alpha / ell
    bool alpha_small = false;   ///< proof condition alpha/ell <= 1/4
};

/// Causal reproducing filter for a difference equation whose characteristic
/// polynomial has all roots on the unit circle: 1 - q(z) = p(z) r(z) with r
/// the order-ell Taylor truncation of [prod_i (1 - delta z / theta_i)]^{-1}.
/// Requires m > deg(p) and a truncation long enough that delta = 1 - eps > 0;
/// otherwise throws with the minimal usable m in the message.
UnitCircleFilter unit_circle_filter(const CharPoly& p, std::int64_t m, double root_tol = 1e-8);

struct CompositionBound {
    Filter composed;            ///< phi*phi, support [0, 2m]
    double spectral_l1 = 0.0;   ///< ||phi*phi||*_{2m,1}
    double identity_rhs = 0.0;  ///< sqrt(2m+1) ||phi||_2^2
    double identity_residual = 0.0;
    double rho = 0.0;           ///< implied simplicity constant sqrt(m+1) ||phi||_2
    double l1f_bound = 0.0;     ///< 2 rho^2 / sqrt(2m+1)
    bool bound_holds = false;
};

/// Self-convolution of a causal filter with the exact spectral-l1 identity
/// ||phi*phi||*_{2m,1} = sqrt(2m+1) ||phi||_2^2 and the induced l1 bound.
CompositionBound compose_and_bound(const Filter& phi);

/// max over tau in [0,m] of ||(I - Pi_S)[Delta^tau x]_0^n||_2 / sigma, the
/// measured closeness of x to the subspace. x must cover [-m, n].
double assumption_a_check(const Signal& x, const SubspaceModel& model, std::int64_t m,
                          std::int64_t n, double sigma);

} // namespace sbr

#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "sbr/signal.hpp"
#include "sbr/window.hpp"

namespace sbr {

/// Unitary DFT of a sequence (or row-major grid), convention
/// [F z]_k = N^{-1/2} sum_t z_t e^{+2 pi i k t / N}, separable per axis.
struct SpectralVector {
    std::vector<cplx> values;
    std::int64_t n0 = 0; ///< samples along axis 0
    std::int64_t n1 = 1; ///< samples along axis 1 (1 for 1-D)

    std::size_t size() const { return values.size(); }

    double lp_norm(double p) const;
};

SpectralVector dft(std::span<const cplx> z);
SpectralVector dft2(std::span<const cplx> z, std::int64_t n0, std::int64_t n1);
SpectralVector dft(const Signal& x);
SpectralVector dft(const Filter& f);

std::vector<cplx> idft(const SpectralVector& f);

/// ||F x||_p of the signal's own window; p = 2 matches the plain l2 norm
/// (Parseval). p must be >= 1; p = infinity is accepted.
double spectral_norm(const Signal& x, double p);
double spectral_norm(const Filter& f, double p);

/// Exact discrete convolution [u*v]_t = sum_tau u_tau v_{t-tau} restricted to
/// out_window, via zero-padded FFTs. The observation window of v must cover
/// out_window - support(u) unless zero_extend is set.
Signal convolve(const Filter& u, const Signal& v, const Window& out_window, bool zero_extend = false);

/// Matrix-free convolution operators: Toeplitz T(y) (filter coefficients to
/// fitted-window values), banded M(phi) (stacked observations to fitted-window
/// values) and the circulant C(phi) with its DFT diagonalization. Matvecs run
/// in O(N log N) against cached spectra.
class ConvolutionOperator {
public:
    /// T(y): c^{|support|} -> c^{|target|}, phi |-> [phi*y]_target.
    /// y must cover target - support.
    static ConvolutionOperator toeplitz(const Signal& y, const Window& filter_support, const Window& target);

    /// M(phi): c^{m+n+1} -> c^{n+1}, y_{-m}^n |-> [phi*y]_0^n, for causal phi on [0,m].
    static ConvolutionOperator banded(const Filter& phi, std::int64_t n);

    /// C(phi): c^N -> c^N, circular convolution with phi zero-padded to length
    /// N >= |support|; satisfies C(phi) = F^H D(phi) F with
    /// D(phi) = sqrt(N) diag(F phi_padded).
    static ConvolutionOperator circulant(const Filter& phi, std::int64_t size);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::vector<cplx> matvec(std::span<const cplx> v) const;
    /// Hermitian adjoint A^H w.
    std::vector<cplx> rmatvec(std::span<const cplx> w) const;

    /// Dense entries, small sizes only (tests and report utilities).
    std::vector<std::vector<cplx>> dense() const;

private:
    enum class Kind { ToeplitzT, BandedM, CirculantC };
    Kind kind_ = Kind::ToeplitzT;
    std::size_t rows_ = 0, cols_ = 0;

    // ToeplitzT state: cached padded spectra of the y segment (forward) and of
    // its conjugate reversal (adjoint), one padded grid per axis.
    Window support_ = Window::line(0, 0);
    Window target_ = Window::line(0, 0);
    Window input_ = Window::line(0, 0); // y-window touched
    std::array<std::int64_t, 2> pad_{1, 1};
    std::vector<cplx> y_spec_;
    std::vector<cplx> y_rev_spec_;

    // BandedM state
    Filter phi_;
    std::int64_t band_n_ = 0;

    // CirculantC state: eigenvalues sqrt(N) (F phi_padded)_k = raw_+(phi_padded).
    std::vector<cplx> circ_eigs_;
};

struct FrobeniusReport {
    double toeplitz_lhs = 0, toeplitz_rhs = 0;   ///< ||T(y)||_F^2 vs sum_tau ||Delta^tau y||^2
    double banded_lhs = 0, banded_rhs = 0;       ///< ||M(phi)||_F^2 vs (n+1) ||phi||^2
    double toeplitz_residual = 0, banded_residual = 0;
};

/// Checks the two Frobenius-norm identities of the convolution matrices on
/// explicit (small) instances.
FrobeniusReport frobenius_identities_check(const Signal& y, const Filter& phi, std::int64_t n);

/// sqrt(1 + (n+1)/(m+1)): the window-skew ratio entering the zero-padding bound.
double window_skew(std::int64_t m, std::int64_t n);

/// Spectral l1 norm of the extreme point u^j (inverse DFT of the j-th canonical
/// basis vector of c^{m+1}) after zero-padding to length m+n+1.
double zero_padded_extreme_point_norm(std::int64_t m, std::int64_t n, std::int64_t j);

} // namespace sbr

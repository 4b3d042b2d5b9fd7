#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace sbr::fft {

using cplx = std::complex<double>;

/// Unnormalized 1-D transform: out_k = sum_t in_t exp(sign * 2*pi*i*k*t/n).
/// Mixed-radix, any n >= 1. sign is +1 or -1.
std::vector<cplx> raw(std::span<const cplx> in, int sign);

/// Unnormalized separable 2-D transform on an n0 x n1 row-major grid.
std::vector<cplx> raw2(std::span<const cplx> in, std::int64_t n0, std::int64_t n1, int sign);

} // namespace sbr::fft

#pragma once

#include <complex>
#include <vector>

namespace phg::detail {

using CArray = std::vector<std::complex<double>>;

/// In-place n-dimensional DFT of a row-major side^n complex array
/// (last axis fastest). Unscaled in both directions:
///   forward:  X_k = sum_j x_j e^{-2 pi i j.k / side}
///   inverse:  x_j = sum_k X_k e^{+2 pi i j.k / side}
void fft_nd(CArray& data, int n, int side, bool inverse);

}  // namespace phg::detail

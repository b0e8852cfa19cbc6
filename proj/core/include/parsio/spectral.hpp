#pragma once

#include <complex>
#include <vector>

#include "parsio/geometry.hpp"

namespace parsio {

using Complex = std::complex<double>;

/// In-place unnormalized multidimensional DFT over a row-major array with the
/// given extents: X_k = sum_j x_j exp(sign * 2 pi i j.k / N). sign = -1 is the
/// forward transform.
void dft_inplace(std::vector<Complex>& data, const std::vector<int>& counts, int sign);

/// Forward DFT of real samples (full complex spectrum).
std::vector<Complex> dft_forward(const std::vector<double>& values, const std::vector<int>& counts);

/// Inverse DFT including the 1/N normalization.
std::vector<Complex> dft_inverse(std::vector<Complex> spectrum, const std::vector<int>& counts);

/// Signed mode index of DFT bin i along an axis of `count` nodes, in [-count/2, count/2).
inline int signed_mode(int i, int count) { return i < count - count / 2 ? i : i - count; }

/// Frequencies (xi_1, ..., xi_{n-1}, tau) of a DFT bin on the torus of `grid`,
/// in cycles per unit length (resp. time).
std::array<double, kMaxSpatialDims + 1> frequency(const ParabolicGrid& grid, std::size_t bin);

/// True when the bin sits on the unpaired Nyquist index of some even axis.
bool is_nyquist(const ParabolicGrid& grid, std::size_t bin);

}  // namespace parsio

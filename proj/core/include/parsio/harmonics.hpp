#pragma once

#include <string>
#include <vector>

#include "parsio/geometry.hpp"

namespace parsio {

/// Dimension h_k of the degree-k spherical harmonics on S^{n-1} (n = 2, 3).
int harmonic_dimension(int n, int k);

/// Real orthonormal basis on S^{n-1}, with omega = (spatial..., time).
///   n = 2: omega = (cos a, sin a); Y_{0,0} = (2 pi)^{-1/2},
///          Y_{k,0} = cos(k a)/sqrt(pi), Y_{k,1} = sin(k a)/sqrt(pi).
///   n = 3: polar axis along time, omega = (sin th cos ph, sin th sin ph, cos th);
///          Y_{k,j} with m = j - k: sqrt(2) Pbar_k^m cos(m ph) (m > 0),
///          Pbar_k^0 (m = 0), sqrt(2) Pbar_k^|m| sin(|m| ph) (m < 0),
///          Pbar the fully normalized associated Legendre function.
double harmonic_value(int n, int k, int j, const SpaceTimePoint& omega);

/// Whether Y_{k,j} is odd under omega' -> -omega'.
bool harmonic_is_odd(int n, int k, int j);

/// Pbar_l^m(c) for 0 <= m <= l <= lmax, stored at index l (l + 1) / 2 + m.
std::vector<double> normalized_legendre_table(int lmax, double c);

struct HarmonicExpansion {
  int n = 2;
  int k_max = 0;
  int resolution = 0;
  std::vector<double> b;
  std::vector<std::vector<double>> coeffs;  ///< coeffs[k][j], j < h_k

  double evaluate(const SpaceTimePoint& omega) const;
  double coefficient_energy() const;  ///< sum a_{k,j}^2
};

/// Default angular resolution used by expand_sine for a given degree and |b|.
int default_harmonic_resolution(int n, int k_max, double b_norm);

/// Projection of f(b, omega) = sin(omega' . b) onto the basis up to degree
/// k_max. n = 2 uses `resolution` trapezoid nodes on the circle; n = 3 uses
/// `resolution` Gauss-Legendre nodes in cos th times 2 * resolution azimuthal
/// nodes. Rejects k_max the rule cannot resolve (2 k_max >= resolution for
/// n = 2, k_max >= resolution for n = 3).
HarmonicExpansion expand_sine(const std::vector<double>& b, int n, int k_max, int resolution = 0);

/// ||f(b, .)||^2_{L^2(S^{n-1})} by the same rule as expand_sine.
double sine_energy(const std::vector<double>& b, int n, int resolution);

/// Max |<Y_i, Y_j> - delta_ij| over the basis up to k_max under the angular rule.
double gram_error(int n, int k_max, int resolution);

/// Parameter vectors with |b| <= M used for sup_{|b| <= M}: magnitudes
/// M i / radial for i = 1..radial, and for n = 3 `angular` directions in [0, pi/2].
std::vector<std::vector<double>> b_sweep(int n, double M, int radial = 8, int angular = 4);

struct CoeffDecayEntry {
  int m = 2;
  std::vector<int> k;
  std::vector<double> profile;  ///< max_j max_b |a_{k,j}| k^m M^{-m}
  double sup = 0.0;
  bool monotone = false;
};

struct CoeffDecayReport {
  int n = 2;
  double M = 0.0;
  std::vector<CoeffDecayEntry> entries;
  double noise_floor = 1e-13;
  bool pass = false;
};

/// Profiles over the degrees in [k_lo, k_hi] whose coefficients are not zero
/// by parity (odd k). Monotone means profile(k') <= profile(k) + floor(k') for
/// k < k', where floor(k') = noise_floor k'^m M^{-m} is the profile of a
/// coefficient at the quadrature noise level.
CoeffDecayReport coeff_decay_report(const std::vector<HarmonicExpansion>& sweep,
                                    const std::vector<int>& m_list, double M, int k_lo = 4,
                                    int k_hi = 32);

struct YBoundsReport {
  int n = 2;
  int k_max = 0;
  std::vector<int> dimension;         ///< number of basis functions built per degree
  std::vector<int> expected;          ///< h_k from the dimension formula
  std::vector<double> sup_Y;          ///< max_j sup |Y_{k,j}|
  std::vector<double> sup_grad;       ///< max_j sup |grad Y_{k,j}|
  std::vector<double> normalized;     ///< sup_Y k^{-(n-2)/2} (k >= 1; k = 0 unnormalized)
  std::vector<double> combined;       ///< (sup|Y| + sup|grad Y| / k) k^{-(n-2)/2}
  bool dimensions_ok = false;
  double max_small = 0.0;             ///< max of `normalized` over k <= 4
  double max_all = 0.0;
  bool pass = false;                  ///< dimensions exact and max_all <= 2 max_small
};

YBoundsReport y_bounds_check(int n, int k_max, int grid = 0);

/// One row per (b sample, k, j): b components, k, j, odd, a_{k,j}.
void write_expansions_csv(const std::vector<HarmonicExpansion>& exps, const std::string& path);

}  // namespace parsio

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "parsio/geometry.hpp"

namespace parsio {

/// Scalar samples over a ParabolicGrid in its flat layout.
class GridField {
 public:
  explicit GridField(ParabolicGrid grid);
  GridField(ParabolicGrid grid, std::vector<double> values);

  const ParabolicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double max_abs() const;
  /// (sum |f|^2 dV)^{1/2}.
  double l2_norm() const;

  GridField& operator+=(const GridField& other);
  GridField& operator-=(const GridField& other);
  GridField& operator*=(double c);

 private:
  ParabolicGrid grid_;
  std::vector<double> values_;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double c, GridField a);

/// Integral of f g dV.
double inner(const GridField& f, const GridField& g);

GridField sample(const ParabolicGrid& grid, const std::function<double(const SpaceTimePoint&)>& f);

struct MultiplierResult {
  GridField field;
  double imag_residual = 0.0;  ///< max |Im| of the inverse transform
};

/// Applies a Fourier multiplier m(xi, tau) on the torus of f's grid, with the
/// convention f^(xi, tau) = int f exp(-2 pi i (x.xi + t tau)). When
/// `drop_nyquist` is set the unpaired Nyquist bins are zeroed (needed for odd
/// multipliers to map real data to real data).
MultiplierResult apply_multiplier(
    const GridField& f,
    const std::function<std::complex<double>(const std::array<double, kMaxSpatialDims + 1>&)>& m,
    bool drop_nyquist);

/// I_p: multiplier ||(xi, tau)||^{-1}, mean mode set to 0.
GridField ip_apply(const GridField& f);
/// D_n = I_p d_t: multiplier 2 pi i tau ||(xi, tau)||^{-1}.
MultiplierResult dn_apply_checked(const GridField& f);
GridField dn_apply(const GridField& f);
/// Spectral d/dx_axis (axis < n-1) or d/dt (axis == n-1).
GridField spectral_derivative(const GridField& f, int axis);

/// Plancherel-side norm (sum |f^|^2 dxi dtau)^{1/2} computed from the DFT.
double fourier_l2_norm(const GridField& f);

/// Max over dyadic parabolic cubes (spatial side s cells, time side s^2
/// cells, s = 2, 4, 8, ... up to the grid) at every non-wrapping position of
/// the mean oscillation of f.
double bmo_norm(const GridField& f);

/// One term c cos(2 pi (k.x / P_x + m t / P_t) + theta) of a torus trigonometric polynomial.
struct TrigMode {
  std::array<int, kMaxSpatialDims> k{};
  int m = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// A regular Lip(1,1/2) function with its derivative fields on a grid.
struct Surface {
  GridField A;
  std::vector<GridField> grad;  ///< one field per spatial axis
  GridField dt;
  GridField dn;
  double M = 0.0;        ///< comm-norm used for normalization
  bool periodic = true;  ///< false for surfaces not defined as torus functions
  std::string label;
  std::vector<TrigMode> modes;  ///< analytic description (empty if none)
  double scale = 1.0;           ///< multiplies every mode amplitude

  const ParabolicGrid& grid() const { return A.grid(); }
};

/// max |grad A| + bmo_norm(D_n A) from the stored fields.
double comm_norm(const Surface& s);

/// c A: every field and M scale (M by |c|).
Surface scaled(const Surface& s, double c);

Surface zero_surface(const ParabolicGrid& grid);

/// Samples A = scale * sum c cos(...) and its analytic derivatives, including
/// D_n A = -scale * sum 2 pi tau / ||(xi, tau)|| c sin(...).
Surface trig_surface(const ParabolicGrid& grid, std::vector<TrigMode> modes, double scale,
                     std::string label);

/// A at an arbitrary point from the analytic modes; throws if there are none.
double surface_value(const Surface& s, const SpaceTimePoint& p);

/// The grid on which the comm-norm of a generated surface is measured: the
/// same torus with 32 spatial cells per axis when that is compatible with
/// dt = h^2, otherwise the grid itself.
ParabolicGrid design_grid(const ParabolicGrid& grid);

/// Random trigonometric surface, rescaled so that its comm-norm on
/// design_grid(grid) equals target_M. Deterministic in (seed, torus).
Surface gen_surface(std::uint64_t seed, const ParabolicGrid& grid, double target_M);

/// A = lambda * g(x_1) with g' a smooth zero-mean periodic profile that equals
/// 1 on the central quarter of the period (so A = lambda x_1 there) and has
/// max |g'| = 1, so that
/// comm_norm = lambda exactly (time-independent: D_n A = 0).
Surface linear_surface(const ParabolicGrid& grid, double lambda);

/// A = b.x + c, not periodic.
Surface affine_surface(const ParabolicGrid& grid, const std::vector<double>& b, double c);

}  // namespace parsio

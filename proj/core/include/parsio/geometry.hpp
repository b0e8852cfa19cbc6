#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

namespace parsio {

inline constexpr int kMaxSpatialDims = 3;

/// A point (x, t) of space-time R^{n-1} x R, or (x0, x, t) of the ambient
/// R^{n+1} (in which case x0 is stored as the first spatial coordinate).
struct SpaceTimePoint {
  std::array<double, kMaxSpatialDims> x{};
  int spatial_dims = 1;
  double t = 0.0;

  SpaceTimePoint() = default;
  SpaceTimePoint(std::initializer_list<double> space, double time);

  /// Space-time dimension n of the space the point lives in.
  int dimension() const { return spatial_dims + 1; }
  double space_norm_sq() const;
  bool is_zero() const;
};

SpaceTimePoint operator+(const SpaceTimePoint& a, const SpaceTimePoint& b);
SpaceTimePoint operator-(const SpaceTimePoint& a, const SpaceTimePoint& b);
bool operator==(const SpaceTimePoint& a, const SpaceTimePoint& b);

/// (x, t) -> (-x, t).
SpaceTimePoint reflect_space(const SpaceTimePoint& p);

/// Prepends a distinguished spatial coordinate: (x, t) -> (x0, x, t).
SpaceTimePoint ambient_point(double x0, const SpaceTimePoint& p);

/// Drops the first spatial coordinate: (x0, x, t) -> (x, t).
SpaceTimePoint drop_first_coordinate(const SpaceTimePoint& p);

/// Parabolic homogeneous dimension d = n + 1 of n-dimensional space-time.
constexpr int homogeneous_dimension(int n) { return n + 1; }

/// Fabes-Riviere parabolic norm: the unique rho > 0 with
/// |x|^2 / rho^2 + t^2 / rho^4 = 1.
double pnorm(double space_norm_sq, double t);
double pnorm(const SpaceTimePoint& p);

/// Parabolic dilation (x, t) -> (r x, r^2 t).
SpaceTimePoint dilate(const SpaceTimePoint& p, double r);

/// Uniform grid on the torus R^{n-1} x R with spatial step h and time step h^2,
/// centred so that the origin is a node. Axis order is (x_1, ..., x_{n-1}, t);
/// the time index varies fastest in the flat layout.
class ParabolicGrid {
 public:
  ParabolicGrid(int n, double h, std::vector<int> counts);

  /// Box [-L, L)^{n-1} x [-L^2, L^2). 2L/h must be an even integer.
  static ParabolicGrid box(int n, double half_width, double h);

  int n() const { return n_; }
  double h() const { return h_; }
  double dt() const { return h_ * h_; }
  double step(int axis) const { return axis == n_ - 1 ? dt() : h_; }
  int count(int axis) const { return counts_[axis]; }
  const std::vector<int>& counts() const { return counts_; }
  std::size_t size() const { return size_; }
  double cell_volume() const;

  /// Period of the torus along `axis` (count * step).
  double period(int axis) const { return counts_[axis] * step(axis); }

  /// Largest spatial half-width (count * h / 2 along the first axis).
  double spatial_half_width() const { return 0.5 * period(0); }

  std::array<int, kMaxSpatialDims + 1> unravel(std::size_t index) const;
  std::size_t ravel(const std::array<int, kMaxSpatialDims + 1>& idx) const;
  SpaceTimePoint point(std::size_t index) const;
  double coordinate(int axis, int i) const { return (i - counts_[axis] / 2) * step(axis); }

  /// Index of the node nearest to p (clamped to the box).
  std::size_t nearest_index(const SpaceTimePoint& p) const;

  /// True when p lies inside [first node - step/2, last node + step/2] on every axis.
  bool contains(const SpaceTimePoint& p) const;

  /// Is the closed parabolic ball of radius r around c inside the box?
  bool contains_ball(const SpaceTimePoint& c, double r) const;

  bool operator==(const ParabolicGrid& other) const;

 private:
  int n_;
  double h_;
  std::vector<int> counts_;
  std::size_t size_;
};

/// Minimum-image displacement i - j along one periodic axis of `count` nodes.
/// Returns values in [-count/2, count/2).
int min_image(int diff, int count);

struct Ball {
  SpaceTimePoint center;
  double radius = 1.0;
};

/// All grid indices with pnorm(p - center) < r (plain coordinates, no wrap).
std::vector<std::size_t> ball_points(const ParabolicGrid& grid, const SpaceTimePoint& center,
                                     double r);

/// Parabolic polar coordinates x = rho^{(1,2)} omega, omega on the Euclidean
/// unit sphere S^{n-1}, with d x = rho^{d-1} (1 + omega_n^2) d rho d sigma(omega).
struct PolarQuadrature {
  int n = 2;
  std::vector<double> radii;
  std::vector<double> radial_weights;  ///< d rho weights (no Jacobian)
  std::vector<SpaceTimePoint> directions;
  std::vector<double> angular_weights;  ///< surface measure d sigma

  /// Full weight of node (i, j) including rho^{d-1} (1 + omega_n^2).
  double weight(std::size_t i, std::size_t j) const;
  double integrate(const std::function<double(const SpaceTimePoint&)>& g) const;
  double angular_total() const;
};

/// Radial Gauss-Legendre in log(rho) on [rho_min, rho_max]; angular trapezoid
/// on the circle for n = 2, Gauss-Legendre(cos theta) x trapezoid(phi) for n = 3.
PolarQuadrature polar_quadrature(int n, double rho_min, double rho_max, int radial_count,
                                 int angular_count);

/// Surface measure of the Euclidean unit sphere S^{n-1}.
double sphere_area(int n);

}  // namespace parsio

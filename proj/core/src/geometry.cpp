#include "parsio/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "parsio/quadrature.hpp"

namespace parsio {

SpaceTimePoint::SpaceTimePoint(std::initializer_list<double> space, double time) : t(time) {
  if (space.size() < 1 || space.size() > kMaxSpatialDims) {
    throw std::invalid_argument("SpaceTimePoint: spatial dimension must be in [1, 3]");
  }
  spatial_dims = static_cast<int>(space.size());
  std::copy(space.begin(), space.end(), x.begin());
  for (int i = 0; i < spatial_dims; ++i) {
    if (!std::isfinite(x[i])) throw std::invalid_argument("SpaceTimePoint: non-finite x");
  }
  if (!std::isfinite(t)) throw std::invalid_argument("SpaceTimePoint: non-finite t");
}

double SpaceTimePoint::space_norm_sq() const {
  double s = 0.0;
  for (int i = 0; i < spatial_dims; ++i) s += x[i] * x[i];
  return s;
}

bool SpaceTimePoint::is_zero() const { return t == 0.0 && space_norm_sq() == 0.0; }

SpaceTimePoint operator+(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  SpaceTimePoint r = a;
  for (int i = 0; i < a.spatial_dims; ++i) r.x[i] += b.x[i];
  r.t += b.t;
  return r;
}

SpaceTimePoint operator-(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  SpaceTimePoint r = a;
  for (int i = 0; i < a.spatial_dims; ++i) r.x[i] -= b.x[i];
  r.t -= b.t;
  return r;
}

bool operator==(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  if (a.spatial_dims != b.spatial_dims || a.t != b.t) return false;
  for (int i = 0; i < a.spatial_dims; ++i) {
    if (a.x[i] != b.x[i]) return false;
  }
  return true;
}

SpaceTimePoint reflect_space(const SpaceTimePoint& p) {
  SpaceTimePoint r = p;
  for (int i = 0; i < p.spatial_dims; ++i) r.x[i] = -p.x[i];
  return r;
}

SpaceTimePoint ambient_point(double x0, const SpaceTimePoint& p) {
  if (p.spatial_dims >= kMaxSpatialDims) {
    throw std::invalid_argument("ambient_point: too many spatial dimensions");
  }
  SpaceTimePoint r;
  r.spatial_dims = p.spatial_dims + 1;
  r.x[0] = x0;
  for (int i = 0; i < p.spatial_dims; ++i) r.x[i + 1] = p.x[i];
  r.t = p.t;
  return r;
}

SpaceTimePoint drop_first_coordinate(const SpaceTimePoint& p) {
  if (p.spatial_dims < 2) throw std::invalid_argument("drop_first_coordinate: need >= 2 dims");
  SpaceTimePoint r;
  r.spatial_dims = p.spatial_dims - 1;
  for (int i = 0; i < r.spatial_dims; ++i) r.x[i] = p.x[i + 1];
  r.t = p.t;
  return r;
}

double pnorm(double s, double t) {
  if (s == 0.0 && t == 0.0) return 0.0;
  const double q = s * s + 4.0 * t * t;
  // hypot only where the squares under- or overflow.
  return std::sqrt(0.5 * (s + (std::isnormal(q) ? std::sqrt(q) : std::hypot(s, 2.0 * t))));
}

double pnorm(const SpaceTimePoint& p) { return pnorm(p.space_norm_sq(), p.t); }

SpaceTimePoint dilate(const SpaceTimePoint& p, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
  SpaceTimePoint q = p;
  for (int i = 0; i < p.spatial_dims; ++i) q.x[i] *= r;
  q.t *= r * r;
  return q;
}

ParabolicGrid::ParabolicGrid(int n, double h, std::vector<int> counts)
    : n_(n), h_(h), counts_(std::move(counts)), size_(1) {
  if (n < 2 || n > kMaxSpatialDims) {
    throw std::invalid_argument("ParabolicGrid: n must be 2 or 3");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("ParabolicGrid: h must be > 0");
  if (static_cast<int>(counts_.size()) != n) {
    throw std::invalid_argument("ParabolicGrid: need one count per axis (n-1 spatial + time)");
  }
  for (int c : counts_) {
    if (c < 1) throw std::invalid_argument("ParabolicGrid: counts must be positive");
    size_ *= static_cast<std::size_t>(c);
  }
}

ParabolicGrid ParabolicGrid::box(int n, double half_width, double h) {
  const double nx = 2.0 * half_width / h;
  const double nt = 2.0 * half_width * half_width / (h * h);
  const auto ix = static_cast<int>(std::lround(nx));
  const auto it = static_cast<int>(std::lround(nt));
  if (std::abs(nx - ix) > 1e-9 * nx || std::abs(nt - it) > 1e-9 * nt) {
    throw std::invalid_argument("ParabolicGrid::box: 2L/h and 2L^2/h^2 must be integers");
  }
  std::vector<int> counts(n - 1, ix);
  counts.push_back(it);
  return ParabolicGrid(n, h, counts);
}

double ParabolicGrid::cell_volume() const { return std::pow(h_, n_ - 1) * dt(); }

std::array<int, kMaxSpatialDims + 1> ParabolicGrid::unravel(std::size_t index) const {
  std::array<int, kMaxSpatialDims + 1> idx{};
  for (int a = n_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(index % counts_[a]);
    index /= counts_[a];
  }
  return idx;
}

std::size_t ParabolicGrid::ravel(const std::array<int, kMaxSpatialDims + 1>& idx) const {
  std::size_t index = 0;
  for (int a = 0; a < n_; ++a) index = index * counts_[a] + idx[a];
  return index;
}

SpaceTimePoint ParabolicGrid::point(std::size_t index) const {
  const auto idx = unravel(index);
  SpaceTimePoint p;
  p.spatial_dims = n_ - 1;
  for (int a = 0; a < n_ - 1; ++a) p.x[a] = coordinate(a, idx[a]);
  p.t = coordinate(n_ - 1, idx[n_ - 1]);
  return p;
}

std::size_t ParabolicGrid::nearest_index(const SpaceTimePoint& p) const {
  std::array<int, kMaxSpatialDims + 1> idx{};
  for (int a = 0; a < n_; ++a) {
    const double c = (a == n_ - 1) ? p.t : p.x[a];
    const long i = std::lround(c / step(a)) + counts_[a] / 2;
    idx[a] = static_cast<int>(std::clamp<long>(i, 0, counts_[a] - 1));
  }
  return ravel(idx);
}

bool ParabolicGrid::contains(const SpaceTimePoint& p) const {
  for (int a = 0; a < n_; ++a) {
    const double c = (a == n_ - 1) ? p.t : p.x[a];
    const double lo = coordinate(a, 0) - 0.5 * step(a);
    const double hi = coordinate(a, counts_[a] - 1) + 0.5 * step(a);
    if (c < lo || c > hi) return false;
  }
  return true;
}

bool ParabolicGrid::contains_ball(const SpaceTimePoint& c, double r) const {
  for (int a = 0; a < n_; ++a) {
    const double centre = (a == n_ - 1) ? c.t : c.x[a];
    const double reach = (a == n_ - 1) ? r * r : r;
    const double lo = coordinate(a, 0);
    const double hi = coordinate(a, counts_[a] - 1);
    if (centre - reach < lo || centre + reach > hi) return false;
  }
  return true;
}

bool ParabolicGrid::operator==(const ParabolicGrid& other) const {
  return n_ == other.n_ && h_ == other.h_ && counts_ == other.counts_;
}

int min_image(int diff, int count) {
  int d = diff % count;
  if (d < -count / 2) d += count;
  if (d >= count - count / 2) d -= count;
  return d;
}

std::vector<std::size_t> ball_points(const ParabolicGrid& grid, const SpaceTimePoint& center,
                                     double r) {
  std::vector<std::size_t> out;
  if (!(r > 0.0)) return out;
  const int n = grid.n();
  std::array<int, kMaxSpatialDims + 1> lo{}, hi{};
  for (int a = 0; a < n; ++a) {
    const double c = (a == n - 1) ? center.t : center.x[a];
    // |x_a - c_a| <= pnorm  and  |t - c_t| <= pnorm^2
    const double reach = (a == n - 1) ? r * r : r;
    const double s = grid.step(a);
    const int half = grid.count(a) / 2;
    lo[a] = std::max(0, static_cast<int>(std::floor((c - reach) / s)) + half);
    hi[a] = std::min(grid.count(a) - 1, static_cast<int>(std::ceil((c + reach) / s)) + half);
    if (lo[a] > hi[a]) return out;
  }
  std::array<int, kMaxSpatialDims + 1> idx = lo;
  while (true) {
    const std::size_t flat = grid.ravel(idx);
    if (pnorm(grid.point(flat) - center) < r) out.push_back(flat);
    int a = n - 1;
    while (a >= 0) {
      if (++idx[a] <= hi[a]) break;
      idx[a] = lo[a];
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

double PolarQuadrature::weight(std::size_t i, std::size_t j) const {
  const int d = homogeneous_dimension(n);
  const double on = directions[j].t;
  return radial_weights[i] * std::pow(radii[i], d - 1) * angular_weights[j] * (1.0 + on * on);
}

double PolarQuadrature::integrate(const std::function<double(const SpaceTimePoint&)>& g) const {
  std::vector<double> terms;
  terms.reserve(radii.size() * directions.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    for (std::size_t j = 0; j < directions.size(); ++j) {
      terms.push_back(weight(i, j) * g(dilate(directions[j], radii[i])));
    }
  }
  double s = 0.0;
  for (double v : terms) s += v;
  return s;
}

double PolarQuadrature::angular_total() const {
  double s = 0.0;
  for (double w : angular_weights) s += w;
  return s;
}

double sphere_area(int n) {
  // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

PolarQuadrature polar_quadrature(int n, double rho_min, double rho_max, int radial_count,
                                 int angular_count) {
  if (!(rho_min > 0.0) || !(rho_max > rho_min)) {
    throw std::invalid_argument("polar_quadrature: need 0 < rho_min < rho_max");
  }
  if (radial_count < 2 || angular_count < 2) {
    throw std::invalid_argument("polar_quadrature: counts must be >= 2");
  }
  if (n != 2 && n != 3) throw std::invalid_argument("polar_quadrature: n must be 2 or 3");
  PolarQuadrature q;
  q.n = n;
  // d rho = rho d(log rho)
  const auto radial = gauss_legendre(radial_count, std::log(rho_min), std::log(rho_max));
  for (int i = 0; i < radial_count; ++i) {
    const double rho = std::exp(radial.nodes[i]);
    q.radii.push_back(rho);
    q.radial_weights.push_back(radial.weights[i] * rho);
  }
  const double two_pi = 2.0 * std::numbers::pi;
  if (n == 2) {
    for (int j = 0; j < angular_count; ++j) {
      const double a = two_pi * j / angular_count;
      q.directions.push_back(SpaceTimePoint({std::cos(a)}, std::sin(a)));
      q.angular_weights.push_back(two_pi / angular_count);
    }
  } else {
    const auto polar = gauss_legendre(angular_count, -1.0, 1.0);
    const int azimuthal = 2 * angular_count;
    for (int i = 0; i < angular_count; ++i) {
      const double c = polar.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < azimuthal; ++j) {
        const double phi = two_pi * j / azimuthal;
        q.directions.push_back(SpaceTimePoint({s * std::cos(phi), s * std::sin(phi)}, c));
        q.angular_weights.push_back(polar.weights[i] * two_pi / azimuthal);
      }
    }
  }
  return q;
}

}  // namespace parsio

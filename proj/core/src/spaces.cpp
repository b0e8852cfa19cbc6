#include "parsio/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "parsio/parallel.hpp"
#include "parsio/random.hpp"
#include "parsio/spectral.hpp"

namespace parsio {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

GridField::GridField(ParabolicGrid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

GridField::GridField(ParabolicGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("GridField: value count does not match the grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("GridField: non-finite value");
  }
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridField::l2_norm() const {
  std::vector<double> sq(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) sq[i] = values_[i] * values_[i];
  return std::sqrt(pairwise_sum(sq.data(), sq.size()) * grid_.cell_volume());
}

GridField& GridField::operator+=(const GridField& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("GridField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("GridField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridField& GridField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double c, GridField a) { return a *= c; }

double inner(const GridField& f, const GridField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("inner: grid mismatch");
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) prod[i] = f[i] * g[i];
  return pairwise_sum(prod.data(), prod.size()) * f.grid().cell_volume();
}

GridField sample(const ParabolicGrid& grid,
                 const std::function<double(const SpaceTimePoint&)>& f) {
  GridField out(grid);
  parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = f(grid.point(i));
  });
  return out;
}

MultiplierResult apply_multiplier(
    const GridField& f,
    const std::function<std::complex<double>(const std::array<double, kMaxSpatialDims + 1>&)>& m,
    bool drop_nyquist) {
  const auto& grid = f.grid();
  auto spec = dft_forward(f.values(), grid.counts());
  for (std::size_t b = 0; b < spec.size(); ++b) {
    if (drop_nyquist && is_nyquist(grid, b)) {
      spec[b] = 0.0;
    } else {
      spec[b] *= m(frequency(grid, b));
    }
  }
  const auto back = dft_inverse(std::move(spec), grid.counts());
  MultiplierResult r{GridField(grid), 0.0};
  for (std::size_t i = 0; i < back.size(); ++i) {
    r.field[i] = back[i].real();
    r.imag_residual = std::max(r.imag_residual, std::abs(back[i].imag()));
  }
  return r;
}

namespace {

double freq_pnorm(const std::array<double, kMaxSpatialDims + 1>& f, int n) {
  double s = 0.0;
  for (int a = 0; a < n - 1; ++a) s += f[a] * f[a];
  return pnorm(s, f[n - 1]);
}

}  // namespace

GridField ip_apply(const GridField& f) {
  const int n = f.grid().n();
  return apply_multiplier(
             f,
             [n](const auto& q) -> std::complex<double> {
               const double r = freq_pnorm(q, n);
               return r == 0.0 ? 0.0 : 1.0 / r;
             },
             false)
      .field;
}

MultiplierResult dn_apply_checked(const GridField& f) {
  const int n = f.grid().n();
  return apply_multiplier(
      f,
      [n](const auto& q) -> std::complex<double> {
        const double r = freq_pnorm(q, n);
        if (r == 0.0) return 0.0;
        return {0.0, kTwoPi * q[n - 1] / r};
      },
      true);
}

GridField dn_apply(const GridField& f) { return dn_apply_checked(f).field; }

GridField spectral_derivative(const GridField& f, int axis) {
  if (axis < 0 || axis >= f.grid().n()) {
    throw std::invalid_argument("spectral_derivative: bad axis");
  }
  return apply_multiplier(
             f, [axis](const auto& q) { return std::complex<double>(0.0, kTwoPi * q[axis]); },
             true)
      .field;
}

double fourier_l2_norm(const GridField& f) {
  const auto spec = dft_forward(f.values(), f.grid().counts());
  std::vector<double> sq(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) sq[i] = std::norm(spec[i]);
  const double vol = f.grid().cell_volume();
  const double n = static_cast<double>(spec.size());
  return std::sqrt(pairwise_sum(sq.data(), sq.size()) * vol / n);
}

double bmo_norm(const GridField& f) {
  const auto& grid = f.grid();
  const int n = grid.n();
  const int nt = grid.count(n - 1);
  double best = 0.0;
  for (int s = 2;; s *= 2) {
    bool fits = static_cast<long>(s) * s <= nt;
    for (int a = 0; a < n - 1; ++a) fits = fits && s <= grid.count(a);
    if (!fits) break;
    std::array<int, kMaxSpatialDims + 1> side{};
    std::array<int, kMaxSpatialDims + 1> positions{};
    std::size_t cube_count = 1;
    for (int a = 0; a < n; ++a) {
      side[a] = a == n - 1 ? s * s : s;
      positions[a] = grid.count(a) - side[a] + 1;
      cube_count *= positions[a];
    }
    std::vector<double> osc(cube_count, 0.0);
    parallel_for(cube_count, [&](std::size_t b, std::size_t e) {
      std::vector<double> vals;
      for (std::size_t c = b; c < e; ++c) {
        std::array<int, kMaxSpatialDims + 1> origin{};
        std::size_t rest = c;
        for (int a = n - 1; a >= 0; --a) {
          origin[a] = static_cast<int>(rest % positions[a]);
          rest /= positions[a];
        }
        vals.clear();
        std::array<int, kMaxSpatialDims + 1> idx = origin;
        while (true) {
          vals.push_back(f[grid.ravel(idx)]);
          int a = n - 1;
          while (a >= 0) {
            if (++idx[a] < origin[a] + side[a]) break;
            idx[a] = origin[a];
            --a;
          }
          if (a < 0) break;
        }
        const double mean = pairwise_sum(vals.data(), vals.size()) / vals.size();
        for (double& v : vals) v = std::abs(v - mean);
        osc[c] = pairwise_sum(vals.data(), vals.size()) / vals.size();
      }
    });
    for (double v : osc) best = std::max(best, v);
  }
  return best;
}

double comm_norm(const Surface& s) {
  const std::size_t size = s.A.size();
  double g = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    double sq = 0.0;
    for (const auto& c : s.grad) sq += c[i] * c[i];
    g = std::max(g, std::sqrt(sq));
  }
  return g + bmo_norm(s.dn);
}

Surface scaled(const Surface& s, double c) {
  Surface r = s;
  r.A *= c;
  for (auto& g : r.grad) g *= c;
  r.dt *= c;
  r.dn *= c;
  r.M = std::abs(c) * s.M;
  r.scale = c * s.scale;
  return r;
}

Surface zero_surface(const ParabolicGrid& grid) {
  Surface s{GridField(grid), std::vector<GridField>(grid.n() - 1, GridField(grid)),
            GridField(grid), GridField(grid), 0.0, true, "zero", {}, 1.0};
  return s;
}

double surface_value(const Surface& s, const SpaceTimePoint& p) {
  if (s.modes.empty()) throw std::invalid_argument("surface_value: surface has no analytic modes");
  const auto& grid = s.grid();
  const int n = grid.n();
  double v = 0.0;
  for (const auto& m : s.modes) {
    double arg = m.m * p.t / grid.period(n - 1);
    for (int a = 0; a < n - 1; ++a) arg += m.k[a] * p.x[a] / grid.period(a);
    v += m.amplitude * std::cos(kTwoPi * arg + m.phase);
  }
  return s.scale * v;
}

Surface trig_surface(const ParabolicGrid& grid, std::vector<TrigMode> modes, double scale,
                     std::string label) {
  const int n = grid.n();
  Surface s = zero_surface(grid);
  s.label = std::move(label);
  s.scale = scale;
  s.modes = std::move(modes);
  struct Freq {
    std::array<double, kMaxSpatialDims> xi{};
    double tau = 0.0;
    double dn_factor = 0.0;
  };
  std::vector<Freq> freqs;
  for (const auto& m : s.modes) {
    Freq q;
    double sq = 0.0;
    for (int a = 0; a < n - 1; ++a) {
      q.xi[a] = m.k[a] / grid.period(a);
      sq += q.xi[a] * q.xi[a];
    }
    q.tau = m.m / grid.period(n - 1);
    const double r = pnorm(sq, q.tau);
    q.dn_factor = r == 0.0 ? 0.0 : -kTwoPi * q.tau / r;
    freqs.push_back(q);
  }
  parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto p = grid.point(i);
      double a = 0.0, dt = 0.0, dn = 0.0;
      std::array<double, kMaxSpatialDims> g{};
      for (std::size_t j = 0; j < s.modes.size(); ++j) {
        const auto& q = freqs[j];
        double arg = q.tau * p.t;
        for (int ax = 0; ax < n - 1; ++ax) arg += q.xi[ax] * p.x[ax];
        arg = kTwoPi * arg + s.modes[j].phase;
        const double c = s.modes[j].amplitude * std::cos(arg);
        const double sn = s.modes[j].amplitude * std::sin(arg);
        a += c;
        for (int ax = 0; ax < n - 1; ++ax) g[ax] -= kTwoPi * q.xi[ax] * sn;
        dt -= kTwoPi * q.tau * sn;
        dn += q.dn_factor * sn;
      }
      s.A[i] = scale * a;
      for (int ax = 0; ax < n - 1; ++ax) s.grad[ax][i] = scale * g[ax];
      s.dt[i] = scale * dt;
      s.dn[i] = scale * dn;
    }
  });
  return s;
}

ParabolicGrid design_grid(const ParabolicGrid& grid) {
  constexpr int kCells = 32;
  const int n = grid.n();
  for (int a = 0; a < n - 1; ++a) {
    if (grid.count(a) <= kCells || grid.period(a) != grid.period(0)) return grid;
  }
  const double h = grid.period(0) / kCells;
  const double nt = grid.period(n - 1) / (h * h);
  const long it = std::lround(nt);
  if (it < 1 || std::abs(nt - it) > 1e-9 * nt) return grid;
  std::vector<int> counts(n - 1, kCells);
  counts.push_back(static_cast<int>(it));
  return ParabolicGrid(n, h, counts);
}

Surface gen_surface(std::uint64_t seed, const ParabolicGrid& grid, double target_M) {
  if (target_M < 0.0) throw std::invalid_argument("gen_surface: target_M must be >= 0");
  const int n = grid.n();
  if (target_M == 0.0) {
    Surface s = zero_surface(grid);
    s.label = "random(seed=" + std::to_string(seed) + ", M=0)";
    return s;
  }
  const ParabolicGrid design = design_grid(grid);
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed + attempt);
    std::vector<TrigMode> modes;
    constexpr int kModes = 16;
    while (static_cast<int>(modes.size()) < kModes) {
      TrigMode m;
      int weight = 0;
      for (int a = 0; a < n - 1; ++a) {
        m.k[a] = static_cast<int>(rng.next() % 5) - 2;
        weight += m.k[a] * m.k[a];
      }
      m.m = static_cast<int>(rng.next() % 5) - 2;
      weight += std::abs(m.m);
      const double amp = rng.normal();
      const double phase = rng.uniform(0.0, kTwoPi);
      if (weight == 0) continue;
      m.amplitude = amp / (1.0 + weight);
      m.phase = phase;
      modes.push_back(m);
    }
    const Surface probe = trig_surface(design, modes, 1.0, "");
    const double m0 = comm_norm(probe);
    if (!(m0 > 1e-12)) continue;
    Surface s = trig_surface(grid, modes, target_M / m0,
                             "random(seed=" + std::to_string(seed) + ")");
    s.M = target_M;
    return s;
  }
}

namespace {

double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep5_integral(double u) { return u * u * u * u * (2.5 + u * (-3.0 + u)); }

}  // namespace

Surface linear_surface(const ParabolicGrid& grid, double lambda) {
  const double P = grid.period(0);
  const double a = P / 8.0;
  const double w = P / 4.0;
  auto slope = [&](double y) {  // g'(y), y = |x|
    if (y <= a) return 1.0;
    if (y >= a + w) return -1.0;
    return 1.0 - 2.0 * smoothstep5((y - a) / w);
  };
  auto profile = [&](double x) {
    const double y = std::abs(x);
    double G;
    if (y <= a) {
      G = y;
    } else if (y < a + w) {
      G = y - 2.0 * w * smoothstep5_integral((y - a) / w);
    } else {
      G = a - (y - a - w);
    }
    return std::copysign(G, x);
  };
  Surface s = zero_surface(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i).x[0];
    s.A[i] = lambda * profile(x);
    s.grad[0][i] = lambda * slope(std::abs(x));
  }
  s.M = std::abs(lambda);
  s.label = "linear(lambda=" + std::to_string(lambda) + ")";
  return s;
}

Surface affine_surface(const ParabolicGrid& grid, const std::vector<double>& b, double c) {
  const int n = grid.n();
  if (static_cast<int>(b.size()) != n - 1) {
    throw std::invalid_argument("affine_surface: b must have n-1 components");
  }
  Surface s = zero_surface(grid);
  double norm = 0.0;
  for (double v : b) norm += v * v;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    double v = c;
    for (int a = 0; a < n - 1; ++a) {
      v += b[a] * p.x[a];
      s.grad[a][i] = b[a];
    }
    s.A[i] = v;
  }
  s.M = std::sqrt(norm);
  s.periodic = false;
  s.label = "affine";
  return s;
}

}  // namespace parsio

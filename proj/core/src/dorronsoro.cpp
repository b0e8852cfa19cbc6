#include "parsio/dorronsoro.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "parsio/operators.hpp"
#include "parsio/parallel.hpp"

namespace parsio {

namespace {

struct ShellOffset {
  std::array<int, kMaxSpatialDims + 1> delta{};
  std::array<double, kMaxSpatialDims> x{};
};

std::vector<ShellOffset> shell_offsets(const ParabolicGrid& grid, double delta, bool periodic) {
  if (delta < 4.0 * grid.h() * (1.0 - 1e-12)) {
    throw std::invalid_argument("gamma: delta = " + std::to_string(delta) +
                                " is below 4 grid cells; the shell is unresolved");
  }
  const int n = grid.n();
  std::array<int, kMaxSpatialDims + 1> m{};
  for (int a = 0; a < n; ++a) {
    const double reach = a == n - 1 ? delta * delta : delta;
    m[a] = static_cast<int>(std::floor(reach / grid.step(a) * (1.0 + 1e-12)));
    if (periodic && 2 * m[a] + 1 > grid.count(a)) {
      throw std::invalid_argument("gamma: shell of radius " + std::to_string(delta) +
                                  " wraps around the torus");
    }
  }
  std::vector<ShellOffset> out;
  std::array<int, kMaxSpatialDims + 1> d{};
  for (int a = 0; a < n; ++a) d[a] = -m[a];
  while (true) {
    SpaceTimePoint p;
    p.spatial_dims = n - 1;
    for (int a = 0; a < n - 1; ++a) p.x[a] = d[a] * grid.step(a);
    p.t = d[n - 1] * grid.step(n - 1);
    const double r = pnorm(p);
    if (r >= 0.25 * delta && r <= delta) {
      ShellOffset o;
      o.delta = d;
      o.x = p.x;
      out.push_back(o);
    }
    int a = n - 1;
    while (a >= 0) {
      if (++d[a] <= m[a]) break;
      d[a] = -m[a];
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

double gamma_with(const Surface& s, std::size_t index, double delta,
                  const std::vector<ShellOffset>& shell, const std::vector<double>& b) {
  const auto& grid = s.grid();
  const int n = grid.n();
  const auto idx = grid.unravel(index);
  const double ax = s.A[index];
  double acc = 0.0;
  for (const auto& o : shell) {
    std::array<int, kMaxSpatialDims + 1> k{};
    bool inside = true;
    for (int a = 0; a < n; ++a) {
      int v = idx[a] - o.delta[a];
      const int c = grid.count(a);
      if (s.periodic) {
        v = ((v % c) + c) % c;
      } else if (v < 0 || v >= c) {
        inside = false;
        break;
      }
      k[a] = v;
    }
    if (!inside) continue;
    double dev = ax - s.A[grid.ravel(k)];
    for (int a = 0; a < n - 1; ++a) dev -= o.x[a] * b[a];
    acc += dev * dev;
  }
  const int d = homogeneous_dimension(n);
  return std::sqrt(acc * grid.cell_volume() * std::pow(delta, -d - 2));
}

Boundary boundary_of(const Surface& s) { return s.periodic ? Boundary::periodic : Boundary::open; }

}  // namespace

std::vector<double> dyadic_deltas(double floor, double top, int per_octave) {
  if (!(floor > 0.0) || !(top >= floor) || per_octave < 1) {
    throw std::invalid_argument("dyadic_deltas: need 0 < floor <= top and per_octave >= 1");
  }
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double d = top * std::exp2(-static_cast<double>(i) / per_octave);
    if (d < floor * (1.0 - 1e-12)) break;
    out.push_back(d);
  }
  return out;
}

double gamma_coeff(const Surface& s, std::size_t index, double delta) {
  const auto shell = shell_offsets(s.grid(), delta, s.periodic);
  std::vector<double> b;
  for (const auto& g : s.grad) b.push_back(approx_identity_at(g, index, delta, boundary_of(s)));
  return gamma_with(s, index, delta, shell, b);
}

GammaField gamma_field(const Surface& s, const std::vector<std::size_t>& nodes,
                       const std::vector<double>& deltas) {
  GammaField f{s.grid(), nodes, deltas, std::vector<double>(nodes.size() * deltas.size(), 0.0)};
  const int dims = s.grid().n() - 1;
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    const auto shell = shell_offsets(s.grid(), deltas[j], s.periodic);
    std::vector<std::vector<double>> b;
    for (int a = 0; a < dims; ++a) {
      b.push_back(approx_identity_at(s.grad[a], nodes, deltas[j], boundary_of(s)));
    }
    parallel_for(nodes.size(), [&](std::size_t begin, std::size_t end) {
      std::vector<double> bi(dims);
      for (std::size_t i = begin; i < end; ++i) {
        for (int a = 0; a < dims; ++a) bi[a] = b[a][i];
        f.values[i * deltas.size() + j] = gamma_with(s, nodes[i], deltas[j], shell, bi);
      }
    });
  }
  return f;
}

double carleson_integral(const GammaField& field, double dlog) {
  const auto& d = field.deltas;
  if (d.empty() || field.nodes.empty()) throw std::invalid_argument("carleson_integral: empty field");
  if (dlog <= 0.0) {
    if (d.size() < 2) throw std::invalid_argument("carleson_integral: need dlog for one delta");
    dlog = std::abs(std::log(d[1] / d[0]));
    for (std::size_t i = 2; i < d.size(); ++i) {
      if (std::abs(std::abs(std::log(d[i] / d[i - 1])) - dlog) > 1e-9 * dlog) {
        throw std::invalid_argument("carleson_integral: delta list is not log-uniform");
      }
    }
  }
  std::vector<double> sq(field.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = field.values[i] * field.values[i];
  // sum gamma^2 dlog dV / (count dV)
  return pairwise_sum(sq.data(), sq.size()) * dlog / static_cast<double>(field.nodes.size());
}

double carleson_integral(const Surface& s, const Ball& B, const std::vector<double>& deltas,
                         double dlog) {
  const auto nodes = ball_points(s.grid(), B.center, B.radius);
  if (nodes.empty()) throw std::invalid_argument("carleson_integral: the ball contains no node");
  return carleson_integral(gamma_field(s, nodes, deltas), dlog);
}

void write_gamma_csv(const GammaField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  const int n = field.grid.n();
  for (int a = 0; a < n - 1; ++a) out << "x" << a + 1 << ",";
  out << "t,delta,gamma\n";
  char buf[96];
  for (std::size_t i = 0; i < field.nodes.size(); ++i) {
    const auto p = field.grid.point(field.nodes[i]);
    for (std::size_t j = 0; j < field.deltas.size(); ++j) {
      for (int a = 0; a < n - 1; ++a) {
        std::snprintf(buf, sizeof buf, "%.10g,", p.x[a]);
        out << buf;
      }
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12g\n", p.t, field.deltas[j], field.at(i, j));
      out << buf;
    }
  }
}

}  // namespace parsio

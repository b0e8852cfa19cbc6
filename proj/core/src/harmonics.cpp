#include "parsio/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "parsio/parallel.hpp"
#include "parsio/quadrature.hpp"

namespace parsio {

namespace {

constexpr double kPi = std::numbers::pi;

void require_n(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("harmonics: n must be 2 or 3");
}

std::size_t lm_index(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }

}  // namespace

int harmonic_dimension(int n, int k) {
  require_n(n);
  if (k < 0) throw std::invalid_argument("harmonic_dimension: k must be >= 0");
  if (n == 2) return k == 0 ? 1 : 2;
  return 2 * k + 1;
}

std::vector<double> normalized_legendre_table(int lmax, double c) {
  std::vector<double> p(lm_index(lmax, lmax) + 1, 0.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    p[lm_index(m, m)] = pmm;
    if (m + 1 <= lmax) p[lm_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * c * pmm;
    for (int l = m + 2; l <= lmax; ++l) {
      const double ll = static_cast<double>(l) * l;
      const double mm = static_cast<double>(m) * m;
      const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      p[lm_index(l, m)] = a * (c * p[lm_index(l - 1, m)] - b * p[lm_index(l - 2, m)]);
    }
  }
  return p;
}

bool harmonic_is_odd(int n, int k, int j) {
  require_n(n);
  if (j < 0 || j >= harmonic_dimension(n, k)) throw std::out_of_range("harmonic index");
  if (n == 2) {
    if (k == 0) return false;
    return j == 0 ? (k % 2 == 1) : (k % 2 == 0);
  }
  return std::abs(j - k) % 2 == 1;
}

double harmonic_value(int n, int k, int j, const SpaceTimePoint& omega) {
  require_n(n);
  if (j < 0 || j >= harmonic_dimension(n, k)) throw std::out_of_range("harmonic index");
  if (n == 2) {
    const double a = std::atan2(omega.t, omega.x[0]);
    if (k == 0) return 1.0 / std::sqrt(2.0 * kPi);
    return (j == 0 ? std::cos(k * a) : std::sin(k * a)) / std::sqrt(kPi);
  }
  const double c = std::clamp(omega.t, -1.0, 1.0);
  const double ph = std::atan2(omega.x[1], omega.x[0]);
  const int m = j - k;
  const auto table = normalized_legendre_table(k, c);
  const double p = table[lm_index(k, std::abs(m))];
  if (m == 0) return p;
  return std::sqrt(2.0) * p * (m > 0 ? std::cos(m * ph) : std::sin(-m * ph));
}

double HarmonicExpansion::evaluate(const SpaceTimePoint& omega) const {
  double s = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    for (std::size_t j = 0; j < coeffs[k].size(); ++j) {
      if (coeffs[k][j] != 0.0) s += coeffs[k][j] * harmonic_value(n, k, static_cast<int>(j), omega);
    }
  }
  return s;
}

double HarmonicExpansion::coefficient_energy() const {
  double s = 0.0;
  for (const auto& row : coeffs) {
    for (double a : row) s += a * a;
  }
  return s;
}

int default_harmonic_resolution(int n, int k_max, double b_norm) {
  require_n(n);
  const int extra = 64 + static_cast<int>(std::ceil(2.0 * b_norm));
  return n == 2 ? 2 * k_max + 2 * extra : k_max + extra;
}

namespace {

struct Rule3 {
  QuadratureRule polar;  // in c = cos th
  int azimuthal = 0;
};

Rule3 sphere_rule(int resolution) {
  return {gauss_legendre(resolution, -1.0, 1.0), 2 * resolution};
}

double sine_at(const std::vector<double>& b, int n, double s, double ph, double a) {
  if (n == 2) return std::sin(b[0] * std::cos(a));
  return std::sin(s * (b[0] * std::cos(ph) + b[1] * std::sin(ph)));
}

}  // namespace

HarmonicExpansion expand_sine(const std::vector<double>& b, int n, int k_max, int resolution) {
  require_n(n);
  if (static_cast<int>(b.size()) != n - 1) {
    throw std::invalid_argument("expand_sine: b must have n - 1 components");
  }
  if (k_max < 0) throw std::invalid_argument("expand_sine: k_max must be >= 0");
  double bn = 0.0;
  for (double v : b) bn += v * v;
  bn = std::sqrt(bn);
  if (resolution <= 0) resolution = default_harmonic_resolution(n, k_max, bn);
  if ((n == 2 && 2 * k_max >= resolution) || (n == 3 && k_max >= resolution)) {
    throw std::invalid_argument("expand_sine: k_max = " + std::to_string(k_max) +
                                " exceeds what resolution " + std::to_string(resolution) +
                                " supports");
  }
  HarmonicExpansion e;
  e.n = n;
  e.k_max = k_max;
  e.resolution = resolution;
  e.b = b;
  e.coeffs.resize(k_max + 1);
  for (int k = 0; k <= k_max; ++k) e.coeffs[k].assign(harmonic_dimension(n, k), 0.0);
  if (n == 2) {
    const int Q = resolution;
    const double w = 2.0 * kPi / Q;
    std::vector<double> f(Q);
    for (int q = 0; q < Q; ++q) f[q] = sine_at(b, 2, 0.0, 0.0, 2.0 * kPi * q / Q);
    for (int k = 0; k <= k_max; ++k) {
      double sc = 0.0, ss = 0.0;
      for (int q = 0; q < Q; ++q) {
        const double a = 2.0 * kPi * q / Q;
        sc += f[q] * std::cos(k * a);
        ss += f[q] * std::sin(k * a);
      }
      if (k == 0) {
        e.coeffs[0][0] = w * sc / std::sqrt(2.0 * kPi);
      } else {
        e.coeffs[k][0] = w * sc / std::sqrt(kPi);
        e.coeffs[k][1] = w * ss / std::sqrt(kPi);
      }
    }
    return e;
  }
  const Rule3 rule = sphere_rule(resolution);
  const int P = rule.azimuthal;
  const double wphi = 2.0 * kPi / P;
  const std::size_t rows = rule.polar.nodes.size();
  // Per polar node: azimuthal cosine/sine moments of f, then the Legendre table.
  std::vector<std::vector<double>> fc(rows), fs(rows), leg(rows);
  parallel_for(rows, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double c = rule.polar.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      fc[i].assign(k_max + 1, 0.0);
      fs[i].assign(k_max + 1, 0.0);
      for (int p = 0; p < P; ++p) {
        const double ph = 2.0 * kPi * p / P;
        const double f = sine_at(b, 3, s, ph, 0.0);
        for (int m = 0; m <= k_max; ++m) {
          fc[i][m] += wphi * f * std::cos(m * ph);
          fs[i][m] += wphi * f * std::sin(m * ph);
        }
      }
      leg[i] = normalized_legendre_table(k_max, c);
    }
  });
  for (int l = 0; l <= k_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      double acc = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        const double p = leg[i][lm_index(l, std::abs(m))];
        const double moment = m >= 0 ? fc[i][m] : fs[i][-m];
        acc += rule.polar.weights[i] * p * moment;
      }
      e.coeffs[l][l + m] = m == 0 ? acc : std::sqrt(2.0) * acc;
    }
  }
  return e;
}

double sine_energy(const std::vector<double>& b, int n, int resolution) {
  require_n(n);
  if (n == 2) {
    double s = 0.0;
    for (int q = 0; q < resolution; ++q) {
      const double f = sine_at(b, 2, 0.0, 0.0, 2.0 * kPi * q / resolution);
      s += f * f;
    }
    return s * 2.0 * kPi / resolution;
  }
  const Rule3 rule = sphere_rule(resolution);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.polar.nodes.size(); ++i) {
    const double c = rule.polar.nodes[i];
    const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    double row = 0.0;
    for (int p = 0; p < rule.azimuthal; ++p) {
      const double f = sine_at(b, 3, sn, 2.0 * kPi * p / rule.azimuthal, 0.0);
      row += f * f;
    }
    s += rule.polar.weights[i] * row * 2.0 * kPi / rule.azimuthal;
  }
  return s;
}

double gram_error(int n, int k_max, int resolution) {
  require_n(n);
  if (n == 2) {
    const int Q = resolution;
    const int count = 2 * k_max + 1;
    std::vector<std::vector<double>> vals(count, std::vector<double>(Q));
    for (int q = 0; q < Q; ++q) {
      const double a = 2.0 * kPi * q / Q;
      const SpaceTimePoint w({std::cos(a)}, std::sin(a));
      int idx = 0;
      for (int k = 0; k <= k_max; ++k) {
        for (int j = 0; j < harmonic_dimension(2, k); ++j) vals[idx++][q] = harmonic_value(2, k, j, w);
      }
    }
    double err = 0.0;
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        double g = 0.0;
        for (int q = 0; q < Q; ++q) g += vals[i][q] * vals[j][q];
        g *= 2.0 * kPi / Q;
        err = std::max(err, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
    }
    return err;
  }
  // The tensor rule factorizes: G[(l,m),(l',m')] = Phi[m,m'] C[(l,|m|),(l',|m'|)].
  const Rule3 rule = sphere_rule(resolution);
  const int P = rule.azimuthal;
  const int mcount = 2 * k_max + 1;
  std::vector<std::vector<double>> g(mcount, std::vector<double>(P));
  for (int p = 0; p < P; ++p) {
    const double ph = 2.0 * kPi * p / P;
    for (int m = -k_max; m <= k_max; ++m) {
      g[m + k_max][p] = m == 0 ? 1.0
                               : std::sqrt(2.0) * (m > 0 ? std::cos(m * ph) : std::sin(-m * ph));
    }
  }
  std::vector<double> phi(static_cast<std::size_t>(mcount) * mcount);
  for (int a = 0; a < mcount; ++a) {
    for (int b = 0; b < mcount; ++b) {
      double s = 0.0;
      for (int p = 0; p < P; ++p) s += g[a][p] * g[b][p];
      phi[a * mcount + b] = s * 2.0 * kPi / P;
    }
  }
  const std::size_t L = lm_index(k_max, k_max) + 1;
  std::vector<double> C(L * L, 0.0);
  for (std::size_t i = 0; i < rule.polar.nodes.size(); ++i) {
    const auto t = normalized_legendre_table(k_max, rule.polar.nodes[i]);
    const double w = rule.polar.weights[i];
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = 0; b < L; ++b) C[a * L + b] += w * t[a] * t[b];
    }
  }
  double err = 0.0;
  for (int l = 0; l <= k_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      for (int l2 = 0; l2 <= k_max; ++l2) {
        for (int m2 = -l2; m2 <= l2; ++m2) {
          const double v = phi[(m + k_max) * mcount + (m2 + k_max)] *
                           C[lm_index(l, std::abs(m)) * L + lm_index(l2, std::abs(m2))];
          const double target = (l == l2 && m == m2) ? 1.0 : 0.0;
          err = std::max(err, std::abs(v - target));
        }
      }
    }
  }
  return err;
}

std::vector<std::vector<double>> b_sweep(int n, double M, int radial, int angular) {
  require_n(n);
  std::vector<std::vector<double>> out;
  for (int i = 1; i <= radial; ++i) {
    const double r = M * i / radial;
    if (n == 2) {
      out.push_back({r});
    } else {
      for (int a = 0; a < angular; ++a) {
        const double ang = 0.5 * kPi * a / std::max(1, angular - 1);
        out.push_back({r * std::cos(ang), r * std::sin(ang)});
      }
    }
  }
  return out;
}

CoeffDecayReport coeff_decay_report(const std::vector<HarmonicExpansion>& sweep,
                                    const std::vector<int>& m_list, double M, int k_lo, int k_hi) {
  CoeffDecayReport r;
  r.M = M;
  if (sweep.empty()) throw std::invalid_argument("coeff_decay_report: empty sweep");
  r.n = sweep[0].n;
  for (const auto& e : sweep) {
    if (e.k_max < k_hi) throw std::invalid_argument("coeff_decay_report: expansion degree too low");
  }
  r.pass = true;
  for (int m : m_list) {
    CoeffDecayEntry entry;
    entry.m = m;
    for (int k = std::max(k_lo, 1); k <= k_hi; ++k) {
      if (k % 2 == 0) continue;  // f is odd in space and even in time: only odd degrees
      double amax = 0.0;
      for (const auto& e : sweep) {
        for (double a : e.coeffs[k]) amax = std::max(amax, std::abs(a));
      }
      const double scale = M > 0.0 ? std::pow(k, m) * std::pow(M, -m) : 0.0;
      entry.k.push_back(k);
      entry.profile.push_back(amax * scale);
    }
    entry.monotone = true;
    for (std::size_t i = 0; i < entry.profile.size(); ++i) {
      entry.sup = std::max(entry.sup, entry.profile[i]);
      if (i == 0) continue;
      const double floor =
          M > 0.0 ? r.noise_floor * std::pow(entry.k[i], m) * std::pow(M, -m) : 0.0;
      if (entry.profile[i] > entry.profile[i - 1] * (1.0 + 1e-9) + floor) entry.monotone = false;
    }
    r.pass = r.pass && entry.monotone && std::isfinite(entry.sup);
    r.entries.push_back(entry);
  }
  return r;
}

YBoundsReport y_bounds_check(int n, int k_max, int grid) {
  require_n(n);
  YBoundsReport r;
  r.n = n;
  r.k_max = k_max;
  r.dimension.assign(k_max + 1, 0);
  r.expected.assign(k_max + 1, 0);
  r.sup_Y.assign(k_max + 1, 0.0);
  r.sup_grad.assign(k_max + 1, 0.0);
  if (n == 2) {
    const int G = grid > 0 ? grid : 4096;
    for (int k = 0; k <= k_max; ++k) {
      r.expected[k] = harmonic_dimension(2, k);
      r.dimension[k] = k == 0 ? 1 : 2;
      for (int q = 0; q < G; ++q) {
        const double a = 2.0 * kPi * q / G;
        const SpaceTimePoint w({std::cos(a)}, std::sin(a));
        for (int j = 0; j < r.dimension[k]; ++j) {
          r.sup_Y[k] = std::max(r.sup_Y[k], std::abs(harmonic_value(2, k, j, w)));
          const double d = k == 0 ? 0.0
                                  : k * (j == 0 ? -std::sin(k * a) : std::cos(k * a)) / std::sqrt(kPi);
          r.sup_grad[k] = std::max(r.sup_grad[k], std::abs(d));
        }
      }
    }
  } else {
    const int G = grid > 0 ? grid : 192;
    const int P = 2 * G;
    const double step = 1e-6;
    std::vector<std::vector<double>> supY(G, std::vector<double>(k_max + 1, 0.0));
    std::vector<std::vector<double>> supD(G, std::vector<double>(k_max + 1, 0.0));
    std::vector<std::vector<int>> dims(G, std::vector<int>(k_max + 1, 0));
    parallel_for(G, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const double th = kPi * (i + 0.5) / G;
        const auto t0 = normalized_legendre_table(k_max, std::cos(th));
        const auto tp = normalized_legendre_table(k_max, std::cos(th + step));
        const auto tm = normalized_legendre_table(k_max, std::cos(th - step));
        const double s = std::sin(th);
        for (int k = 0; k <= k_max; ++k) {
          for (int m = -k; m <= k; ++m) {
            ++dims[i][k];
            const std::size_t id = lm_index(k, std::abs(m));
            const double f = m == 0 ? 1.0 : std::sqrt(2.0);
            const double p = f * t0[id];
            const double dp = f * (tp[id] - tm[id]) / (2.0 * step);
            for (int q = 0; q < P; ++q) {
              const double ph = 2.0 * kPi * q / P;
              double g, dg;
              if (m > 0) {
                g = std::cos(m * ph);
                dg = -m * std::sin(m * ph);
              } else if (m < 0) {
                g = std::sin(-m * ph);
                dg = -m * std::cos(-m * ph);
              } else {
                g = 1.0;
                dg = 0.0;
              }
              supY[i][k] = std::max(supY[i][k], std::abs(p * g));
              const double gt = dp * g;
              const double gp = p * dg / s;
              supD[i][k] = std::max(supD[i][k], std::sqrt(gt * gt + gp * gp));
            }
          }
        }
      }
    });
    // The midpoint rule in theta misses the poles, where zonal harmonics peak.
    const auto pole = normalized_legendre_table(k_max, 1.0);
    for (int k = 0; k <= k_max; ++k) {
      r.expected[k] = harmonic_dimension(3, k);
      r.dimension[k] = dims[0][k];
      r.sup_Y[k] = std::abs(pole[lm_index(k, 0)]);
      for (int i = 0; i < G; ++i) {
        r.sup_Y[k] = std::max(r.sup_Y[k], supY[i][k]);
        r.sup_grad[k] = std::max(r.sup_grad[k], supD[i][k]);
      }
    }
  }
  r.dimensions_ok = r.dimension == r.expected;
  r.normalized.assign(k_max + 1, 0.0);
  r.combined.assign(k_max + 1, 0.0);
  for (int k = 0; k <= k_max; ++k) {
    const double norm = k == 0 ? 1.0 : std::pow(k, -(n - 2) / 2.0);
    r.normalized[k] = r.sup_Y[k] * norm;
    r.combined[k] = k == 0 ? r.sup_Y[0] : (r.sup_Y[k] + r.sup_grad[k] / k) * norm;
    if (k >= 1) {
      r.max_all = std::max(r.max_all, r.normalized[k]);
      if (k <= 4) r.max_small = std::max(r.max_small, r.normalized[k]);
    }
  }
  r.pass = r.dimensions_ok && k_max >= 1 && r.max_all <= 2.0 * r.max_small;
  return r;
}

void write_expansions_csv(const std::vector<HarmonicExpansion>& exps, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (exps.empty()) return;
  const int n = exps[0].n;
  out << "sample";
  for (int a = 0; a < n - 1; ++a) out << ",b" << a + 1;
  out << ",k,j,odd,a\n";
  char buf[64];
  for (std::size_t s = 0; s < exps.size(); ++s) {
    for (int k = 0; k <= exps[s].k_max; ++k) {
      for (std::size_t j = 0; j < exps[s].coeffs[k].size(); ++j) {
        out << s;
        for (double b : exps[s].b) {
          std::snprintf(buf, sizeof buf, ",%.12g", b);
          out << buf;
        }
        std::snprintf(buf, sizeof buf, ",%d,%zu,%d,%.12g\n", k, j,
                      harmonic_is_odd(n, k, static_cast<int>(j)) ? 1 : 0, exps[s].coeffs[k][j]);
        out << buf;
      }
    }
  }
}

}  // namespace parsio

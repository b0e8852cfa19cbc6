#include "parsio/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "parsio/random.hpp"

namespace parsio {

const char* to_string(Parity p) {
  switch (p) {
    case Parity::odd_in_space:
      return "odd";
    case Parity::even_in_space:
      return "even";
    case Parity::none:
      return "none";
  }
  return "none";
}

Kernel::Kernel(std::string name, int n, bool ambient, Parity parity, int regularity,
               Evaluator evaluator)
    : name_(std::move(name)),
      n_(n),
      ambient_(ambient),
      parity_(parity),
      regularity_(regularity),
      evaluator_(std::move(evaluator)) {
  if (n < 2 || n > kMaxSpatialDims) throw std::invalid_argument("Kernel: n must be 2 or 3");
  if (!evaluator_) throw std::invalid_argument("Kernel: empty evaluator");
}

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Kernel make_kernel(std::string name, int n, bool ambient, Parity parity, int regularity,
                   std::function<double(const SpaceTimePoint&)> angular,
                   std::function<double(double)> modulation) {
  const int d = homogeneous_dimension(n);
  auto eval = [angular, modulation, d](const SpaceTimePoint& p) {
    const double rho = pnorm(p);
    if (rho == 0.0) return std::numeric_limits<double>::infinity();
    const SpaceTimePoint omega = dilate(p, 1.0 / rho);
    return angular(omega) * modulation(std::log(rho)) / ipow(rho, d);
  };
  Kernel k(std::move(name), n, ambient, parity, regularity, eval);
  k.set_separable(SeparableForm{std::move(angular), std::move(modulation)});
  return k;
}

Kernel zero_kernel(int n, bool ambient) {
  Kernel k(ambient ? "zero_ambient" : "zero", n, ambient, Parity::odd_in_space, 4,
           [](const SpaceTimePoint&) { return 0.0; });
  k.set_separable(SeparableForm{[](const SpaceTimePoint&) { return 0.0; },
                                [](double) { return 0.0; }});
  CZConstants zeros;
  for (int j = 0; j <= 4; ++j) {
    for (int t = 0; j + t <= 4; ++t) zeros[{j, t}] = 0.0;
  }
  k.set_constants(zeros);
  k.mark_zero();
  return k;
}

Kernel multiply(const Kernel& k, std::function<double(const SpaceTimePoint&)> g,
                std::string name) {
  auto base = k.evaluator();
  Kernel out(std::move(name), k.n(), k.ambient(), k.parity(), k.regularity(),
             [base, g](const SpaceTimePoint& p) { return base(p) * g(p); });
  out.set_constants(k.constants());
  return out;
}

std::vector<std::string> canonical_kernel_names() {
  return {"K1", "K2", "K3", "Krough", "H1", "H2", "H3", "H4", "zero", "zero_ambient"};
}

namespace {

Kernel build_canonical(const std::string& name, int n) {
  const auto one = [](double) { return 1.0; };
  const auto sine = [](double u) { return std::sin(u); };
  const auto cosine = [](double u) { return std::cos(u); };
  const auto lorentz = [](double u) { return 1.0 / (1.0 + u * u); };
  const auto first = [](const SpaceTimePoint& w) { return w.x[0]; };
  const auto unit = [](const SpaceTimePoint&) { return 1.0; };
  if (name == "K1") return make_kernel(name, n, true, Parity::odd_in_space, 4, first, one);
  if (name == "K2") return make_kernel(name, n, true, Parity::odd_in_space, 4, first, sine);
  if (name == "K3") {
    return make_kernel(
        name, n, true, Parity::odd_in_space, 4,
        [](const SpaceTimePoint& w) { return w.x[0] + w.x[1]; }, lorentz);
  }
  if (name == "Krough") {
    return make_kernel(
        name, n, true, Parity::odd_in_space, 1,
        [](const SpaceTimePoint& w) {
          return std::copysign(std::pow(std::abs(w.x[0]), 1.5), w.x[0]);
        },
        one);
  }
  if (name == "H1") return make_kernel(name, n, false, Parity::odd_in_space, 2, first, one);
  if (name == "H2") return make_kernel(name, n, false, Parity::even_in_space, 2, unit, cosine);
  if (name == "H3") return make_kernel(name, n, false, Parity::odd_in_space, 2, first, sine);
  if (name == "H4") return make_kernel(name, n, false, Parity::even_in_space, 2, unit, lorentz);
  if (name == "zero") return zero_kernel(n, false);
  if (name == "zero_ambient") return zero_kernel(n, true);
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

}  // namespace

Kernel canonical_kernel(const std::string& name, int n) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, int>, CZConstants> cache;
  Kernel k = build_canonical(name, n);
  if (k.is_zero()) return k;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(name, n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, calibrate_cz_constants(k, k.regularity())).first;
  k.set_constants(it->second);
  return k;
}

std::vector<SpaceTimePoint> cz_probes(int spatial_dims, std::size_t count, double r_lo,
                                      double r_hi, std::uint64_t seed) {
  if (!(r_lo > 0.0) || !(r_hi >= r_lo)) throw std::invalid_argument("cz_probes: bad radii");
  Rng rng(seed);
  std::vector<SpaceTimePoint> probes;
  probes.reserve(count);
  const double llo = std::log(r_lo);
  const double lhi = std::log(r_hi);
  for (std::size_t i = 0; i < count; ++i) {
    SpaceTimePoint w;
    w.spatial_dims = spatial_dims;
    double norm2 = 0.0;
    while (norm2 < 1e-12) {
      norm2 = 0.0;
      for (int a = 0; a < spatial_dims; ++a) {
        w.x[a] = rng.normal();
        norm2 += w.x[a] * w.x[a];
      }
      w.t = rng.normal();
      norm2 += w.t * w.t;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (int a = 0; a < spatial_dims; ++a) w.x[a] *= inv;
    w.t *= inv;
    probes.push_back(dilate(w, std::exp(rng.uniform(llo, lhi))));
  }
  return probes;
}

double fd_derivative(const Kernel& k, const SpaceTimePoint& p, const std::vector<int>& alpha,
                     int time_order, double dx, double dt) {
  const int s = p.spatial_dims;
  // Tensor-product central stencil: coefficient (-1)^m C(q, m) at offset (q/2 - m) step.
  std::vector<int> orders(alpha.begin(), alpha.end());
  orders.resize(s, 0);
  orders.push_back(time_order);
  const int axes = s + 1;
  std::vector<int> m(axes, 0);
  auto binom = [](int q, int r) {
    double c = 1.0;
    for (int i = 1; i <= r; ++i) c = c * (q - r + i) / i;
    return c;
  };
  double sum = 0.0;
  while (true) {
    double coeff = 1.0;
    SpaceTimePoint q = p;
    for (int a = 0; a < axes; ++a) {
      const int order = orders[a];
      coeff *= ((m[a] % 2) ? -1.0 : 1.0) * binom(order, m[a]);
      const double offset = 0.5 * order - m[a];
      if (a < s) {
        q.x[a] += offset * dx;
      } else {
        q.t += offset * dt;
      }
    }
    sum += coeff * k(q);
    int a = axes - 1;
    while (a >= 0) {
      if (++m[a] <= orders[a]) break;
      m[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
  int spatial_order = 0;
  for (int a = 0; a < s; ++a) spatial_order += orders[a];
  return sum / (std::pow(dx, spatial_order) * std::pow(dt, time_order));
}

namespace {

void multi_indices(int vars, int order, std::vector<int>& current,
                   std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == vars - 1) {
    current.push_back(order);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int i = 0; i <= order; ++i) {
    current.push_back(i);
    multi_indices(vars, order - i, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<int>> all_multi_indices(int vars, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  multi_indices(vars, order, current, out);
  return out;
}

}  // namespace

CZConstants measure_cz_constants(const Kernel& k, int N, const std::vector<SpaceTimePoint>& probes,
                                 std::optional<SpaceTimePoint>* offending) {
  CZConstants measured;
  const int s = k.spatial_dims();
  const int d = k.d();
  for (int j = 0; j <= N; ++j) {
    const auto alphas = all_multi_indices(s, j);
    for (int t = 0; j + t <= N; ++t) {
      double sup = 0.0;
      for (const auto& p : probes) {
        const double rho = pnorm(p);
        const double dx = 1e-3 * rho;
        const double dt = 1e-6 * rho * rho;
        double local = 0.0;
        for (const auto& alpha : alphas) {
          const double v = (j == 0 && t == 0) ? k(p) : fd_derivative(k, p, alpha, t, dx, dt);
          if (!std::isfinite(v)) {
            if (offending) *offending = p;
            local = std::numeric_limits<double>::infinity();
            break;
          }
          local = std::max(local, std::abs(v));
        }
        sup = std::max(sup, std::pow(rho, d + j + 2 * t) * local);
      }
      measured[{j, t}] = sup;
    }
  }
  return measured;
}

const CZEntry* CZReport::find(int j, int k) const {
  for (const auto& e : entries) {
    if (e.j == j && e.k == k) return &e;
  }
  return nullptr;
}

double parity_residual(const Kernel& k, const std::vector<SpaceTimePoint>& probes) {
  if (k.parity() == Parity::none) return 0.0;
  const double sign = k.parity() == Parity::odd_in_space ? 1.0 : -1.0;
  double worst = 0.0;
  for (const auto& p : probes) {
    const double r = std::abs(k(p) + sign * k(reflect_space(p)));
    worst = std::max(worst, std::pow(pnorm(p), k.d()) * r);
  }
  return worst;
}

CZReport cz_check(const Kernel& k, int N, const std::vector<SpaceTimePoint>& probes,
                  double slack) {
  CZReport report;
  report.slack = slack;
  report.note = "finite differences dx = 1e-3 ||p||, dt = 1e-6 ||p||^2; pass iff measured <= " +
                std::to_string(slack) + " x declared";
  std::optional<SpaceTimePoint> offending;
  const CZConstants measured = measure_cz_constants(k, N, probes, &offending);
  report.offending_probe = offending;
  report.pass = !offending.has_value();
  for (const auto& [key, value] : measured) {
    CZEntry e;
    e.j = key.first;
    e.k = key.second;
    e.measured = value;
    const auto it = k.constants().find(key);
    // An undeclared constant means the kernel does not claim this order.
    const bool declared = it != k.constants().end();
    e.declared = declared ? it->second : std::numeric_limits<double>::infinity();
    e.pass = declared && std::isfinite(value) && value <= slack * e.declared;
    report.pass = report.pass && e.pass;
    report.entries.push_back(e);
  }
  report.parity_residual = parity_residual(k, probes);
  double scale = 0.0;
  for (const auto& p : probes) scale = std::max(scale, std::pow(pnorm(p), k.d()) * std::abs(k(p)));
  report.parity_ok = report.parity_residual <= 1e-10 * std::max(scale, 1e-300) ||
                     report.parity_residual == 0.0;
  report.pass = report.pass && report.parity_ok;
  return report;
}

CZConstants calibrate_cz_constants(const Kernel& k, int N) {
  const auto probes = cz_probes(k.spatial_dims(), 600, std::exp(-std::numbers::pi),
                                std::exp(std::numbers::pi), 0xC2ULL);
  return measure_cz_constants(k, N, probes);
}

std::pair<Kernel, Kernel> parity_split(const Kernel& k) {
  auto base = k.evaluator();
  Kernel even(k.name() + "_even", k.n(), k.ambient(), Parity::even_in_space, k.regularity(),
              [base](const SpaceTimePoint& p) { return 0.5 * (base(p) + base(reflect_space(p))); });
  Kernel odd(k.name() + "_odd", k.n(), k.ambient(), Parity::odd_in_space, k.regularity(),
             [base](const SpaceTimePoint& p) { return 0.5 * (base(p) - base(reflect_space(p))); });
  return {std::move(even), std::move(odd)};
}

}  // namespace parsio

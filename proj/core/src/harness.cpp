#include "parsio/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "parsio/cdm.hpp"
#include "parsio/diagnostics.hpp"
#include "parsio/dorronsoro.hpp"
#include "parsio/harmonics.hpp"
#include "parsio/ibp.hpp"
#include "parsio/kernels.hpp"
#include "parsio/operators.hpp"
#include "parsio/opnorm.hpp"
#include "parsio/parallel.hpp"
#include "parsio/random.hpp"
#include "parsio/spaces.hpp"

#ifndef PARSIO_VERSION
#define PARSIO_VERSION "0.0.0"
#endif

namespace parsio {

using json = nlohmann::json;

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"kernel-check", "cdm",     "harmonics", "norm-sweep",
                                              "commutator",   "decompose", "gamma",   "t1"};
  return names;
}

namespace {

// ---------------------------------------------------------------- config

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

json to_json(const ExperimentConfig& c) {
  json g{{"L", c.grid.L}, {"h", c.grid.h}, {"counts", c.grid.counts}, {"refine", c.grid.refine}};
  if (c.grid.dt) g["dt"] = *c.grid.dt;
  return json{{"experiment", c.experiment},
              {"n", c.n},
              {"grid", g},
              {"kernels", c.kernels},
              {"surface",
               {{"kind", c.surface.kind},
                {"seed", c.surface.seed},
                {"seed_stride", c.surface.seed_stride},
                {"M", c.surface.M},
                {"slope", c.surface.slope}}},
              {"epsilon", c.epsilon},
              {"delta", c.delta},
              {"order", c.order},
              {"probes", c.probes},
              {"zeta", {{"Z", c.zeta_Z}, {"count", c.zeta_count}, {"tail_Z", c.tail_Z}}},
              {"kappa", {{"R", c.kappa_R}, {"step", c.kappa_step}}},
              {"harmonics",
               {{"k_max", c.k_max}, {"resolution", c.resolution}, {"n", c.n_list}, {"m", c.m_list}}},
              {"ball_radius", c.ball_radius},
              {"jeps",
               {{"L", c.jeps_L}, {"h", c.jeps_h}, {"epsilon", c.jeps_epsilon}, {"doubling", c.jeps_doubling}}},
              {"power", {{"iterations", c.power_iterations}, {"tol", c.power_tol}}},
              {"tolerances", c.tolerances},
              {"seed", c.seed},
              {"threads", c.threads}};
}

// ---------------------------------------------------------------- helpers

class Checks {
 public:
  explicit Checks(RunReport& r) : r_(r) {}
  void le(const std::string& name, double value, double threshold, const std::string& note = "") {
    add(name, value, threshold, "<=", std::isfinite(value) && value <= threshold, note);
  }
  void ge(const std::string& name, double value, double threshold, const std::string& note = "") {
    add(name, value, threshold, ">=", std::isfinite(value) && value >= threshold, note);
  }
  void gt(const std::string& name, double value, double threshold, const std::string& note = "") {
    add(name, value, threshold, ">", std::isfinite(value) && value > threshold, note);
  }
  void info(const std::string& name, double value, const std::string& note = "") {
    add(name, value, 0.0, "info", true, note);
  }
  void flag(const std::string& name, bool ok, double value, const std::string& note) {
    add(name, value, 0.0, "holds", ok, note);
  }

 private:
  void add(const std::string& name, double value, double threshold, const std::string& rel,
           bool pass, const std::string& note) {
    for (const auto& c : r_.checks) {
      if (c.name == name) throw std::logic_error("duplicate check '" + name + "'");
    }
    r_.checks.push_back(Check{name, value, threshold, rel, pass, note});
  }
  RunReport& r_;
};

class Stage {
 public:
  Stage(RunReport& r, std::string name)
      : r_(r), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~Stage() {
    r_.timings[name_] +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  RunReport& r_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Csv {
 public:
  Csv(const std::string& dir, const std::string& name, const std::vector<std::string>& header) {
    if (dir.empty()) return;
    out_.open(std::filesystem::path(dir) / name);
    if (!out_) throw std::runtime_error("cannot write " + name + " in " + dir);
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    if (!out_.is_open()) return;
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ParabolicGrid make_grid(const ExperimentConfig& c, double h) {
  if (!c.grid.counts.empty()) return ParabolicGrid(c.n, h, c.grid.counts);
  return ParabolicGrid::box(c.n, c.grid.L, h);
}

std::vector<double> grid_h_list(const ExperimentConfig& c) {
  std::vector<double> hs{c.grid.h};
  for (double h : c.grid.refine) hs.push_back(h);
  return hs;
}

Surface make_surface(const ExperimentConfig& c, const ParabolicGrid& grid, double M, std::size_t i) {
  const auto& s = c.surface;
  if (s.kind == "random") return gen_surface(s.seed + i * s.seed_stride, grid, M);
  if (s.kind == "linear") return linear_surface(grid, M);
  if (s.kind == "zero") return zero_surface(grid);
  if (s.kind == "affine") return affine_surface(grid, s.slope, 0.0);
  throw ConfigError("unknown surface kind '" + s.kind + "'");
}

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::vector<double> logs(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(std::log(x));
  return out;
}

std::string tag(const std::string& base, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string s = base + "[";
  for (std::size_t i = 0; i < kv.size(); ++i) s += (i ? "," : "") + kv[i].first + "=" + kv[i].second;
  return s + "]";
}

double declared_ratio(const CZReport& r) {
  double worst = 0.0;
  for (const auto& e : r.entries) {
    if (!std::isfinite(e.declared)) {
      worst = INFINITY;
    } else if (e.declared > 0.0) {
      worst = std::max(worst, e.measured / e.declared);
    } else if (e.measured > 0.0) {
      worst = INFINITY;
    }
  }
  return worst;
}

// ---------------------------------------------------------------- experiments

void kernel_check(const ExperimentConfig& c, const std::string& out, RunReport& r) {
  Checks ck(r);
  Stage st(r, "kernel-check");
  const bool defaults = c.kernels.empty();
  const std::vector<std::string> names =
      defaults ? std::vector<std::string>{"K1", "K2", "K3", "H1", "H2", "H3", "H4"} : c.kernels;
  Csv csv(out, "kernel_check.csv", {"kernel", "N", "j", "k", "measured", "declared", "pass"});
  const double slack = c.tolerance("cz_slack", 2.0);
  auto one = [&](const Kernel& K, int N) {
    const auto probes = cz_probes(K.spatial_dims(), static_cast<std::size_t>(c.probes), 1e-2,
                                  1e2, c.seed);
    const auto rep = cz_check(K, N, probes, slack);
    for (const auto& e : rep.entries) {
      csv.row({K.name(), std::to_string(N), std::to_string(e.j), std::to_string(e.k),
               num(e.measured), num(e.declared), e.pass ? "1" : "0"});
    }
    return rep;
  };
  for (const auto& name : names) {
    const Kernel K = canonical_kernel(name, c.n);
    const int N = c.order >= 0 ? c.order : K.regularity();
    const auto rep = one(K, N);
    ck.flag(tag("cz", {{"kernel", name}, {"N", std::to_string(N)}}), rep.pass, declared_ratio(rep),
            "max measured/declared; slack " + fmt(slack));
    ck.le(tag("parity", {{"kernel", name}}), rep.parity_residual, c.tolerance("parity", 1e-10));
  }
  if (defaults) {
    // The angular factor of Krough is only C^1: asking for four derivatives must fail.
    const Kernel rough = canonical_kernel("Krough", c.n);
    const auto rep = one(rough, 4);
    ck.flag(tag("rough_rejected", {{"kernel", "Krough"}, {"N", "4"}}), !rep.pass,
            declared_ratio(rep), "negative control: cz_check must fail");
  }
}

double base_scale(const SpaceTimePoint& x, int d) { return std::pow(pnorm(x), -d); }

void cdm(const ExperimentConfig& c, const std::string& out, RunReport& r) {
  Checks ck(r);
  const std::vector<std::string> names =
      c.kernels.empty() ? std::vector<std::string>{"K1", "K2"} : c.kernels;
  const ZetaGrid zeta{c.zeta_Z, c.zeta_count};
  const KappaGrid kappa{c.kappa_R, c.kappa_step};
  const auto probes = cz_probes(c.n - 1, static_cast<std::size_t>(c.probes), 0.25, 4.0, c.seed);
  const std::size_t recon_count = std::min<std::size_t>(20, probes.size());
  std::vector<double> kappa0;
  {
    Rng rng(c.seed ^ 0x5eedULL);
    for (std::size_t p = 0; p < recon_count; ++p) kappa0.push_back(rng.uniform(-4.0, 4.0));
  }
  Csv rec_csv(out, "cdm_reconstruction.csv",
              {"kernel", "probe", "kappa0", "exact", "reconstructed", "rel_error", "scaled_error",
               "imag_residual", "flagged"});
  Csv tail_csv(out, "cdm_tail.csv", {"kernel", "Z", "max_scaled_error"});
  Csv decay_csv(out, "cdm_zeta_decay.csv", {"kernel", "N", "zeta", "profile"});
  for (const auto& name : names) {
    const Kernel K = canonical_kernel(name, c.n);
    if (!K.ambient()) throw ConfigError("cdm: kernel '" + name + "' is not ambient");
    const int d = K.d();
    ZetaFamily fam;
    {
      Stage st(r, "cdm.family");
      fam = build_zeta_family(K, probes, zeta, kappa);
    }
    if (!out.empty()) write_zeta_family_csv(fam, out + "/cdm_family_" + name + ".csv");
    const auto par = parity_check(fam);
    ck.le(tag("parity", {{"kernel", name}}), par.max_residual(), c.tolerance("parity", 1e-6),
          "normalized by ||x||^d");
    ck.info(tag("conjugate_residual", {{"kernel", name}}), par.conjugate_residual);
    ck.info(tag("resynthesis_residual", {{"kernel", name}}), par.resynthesis_residual);

    // Sampling zeta with spacing s makes the trapezoid return the kappa-periodization
    // sum_m K(kappa0 + m / s) over the kappa window; compare against it as well.
    const double period = 1.0 / zeta.step();
    double worst_rel = 0.0, worst_scaled = 0.0, worst_periodized = 0.0;
    for (std::size_t p = 0; p < recon_count; ++p) {
      const double xn = pnorm(probes[p]);
      const double x0 = kappa0[p] * xn;
      const auto rec = reconstruct_K(fam, p, x0);
      const double exact = K(ambient_point(x0, probes[p]));
      double periodized = 0.0;
      for (int m = -static_cast<int>(kappa.R / period) - 1; m <= static_cast<int>(kappa.R / period) + 1; ++m) {
        const double k = kappa0[p] + m * period;
        if (k >= -kappa.R && k < kappa.R) periodized += K(ambient_point(k * xn, probes[p]));
      }
      const double err = std::abs(rec.value - exact);
      const double rel = err / std::abs(exact);
      const double scaled = err / base_scale(probes[p], d);
      worst_rel = std::max(worst_rel, rel);
      worst_scaled = std::max(worst_scaled, scaled);
      worst_periodized =
          std::max(worst_periodized, std::abs(rec.value - periodized) / base_scale(probes[p], d));
      rec_csv.row({name, std::to_string(p), num(kappa0[p]), num(exact), num(rec.value), num(rel),
                   num(scaled), num(rec.imag_residual), rec.flagged ? "1" : "0"});
    }
    ck.le(tag("reconstruction", {{"kernel", name}}), worst_rel, c.tolerance("reconstruction", 1e-3),
          "max |K_rec - K| / |K| over probes with |x0|/||x|| <= 4");
    ck.info(tag("reconstruction_scaled", {{"kernel", name}}), worst_scaled,
            "max |K_rec - K| ||x||^d");
    ck.info(tag("reconstruction_periodized", {{"kernel", name}}), worst_periodized,
            "max |K_rec - sum_m K(kappa0 + m / dzeta)| ||x||^d");

    // Truncating the zeta integral at Z: the error must fall at least like Z^{-(N-1)}.
    {
      Stage st(r, "cdm.tail");
      const std::vector<SpaceTimePoint> sub(probes.begin(), probes.begin() + recon_count);
      std::vector<double> Zs, errs;
      for (double Z : c.tail_Z) {
        const int count = static_cast<int>(std::lround(2.0 * Z / zeta.step()));
        const ZetaGrid zg{Z, count};
        const auto tf = build_zeta_family(K, sub, zg, kappa);
        double e = 0.0;
        for (std::size_t p = 0; p < sub.size(); ++p) {
          const double x0 = kappa0[p] * pnorm(sub[p]);
          const double exact = K(ambient_point(x0, sub[p]));
          e = std::max(e, std::abs(reconstruct_K(tf, p, x0).value - exact) / base_scale(sub[p], d));
        }
        Zs.push_back(Z);
        errs.push_back(e);
        tail_csv.row({name, num(Z), num(e)});
      }
      const double order = -fit_slope(logs(Zs), logs(errs));
      ck.ge(tag("tail_order", {{"kernel", name}}), order, c.tolerance("tail_order", 1.0),
            "fitted -dlog(error)/dlog(Z) against N - 1 with N = 2");
    }

    const auto decay = zeta_decay_check(fam, 2);
    for (std::size_t j = 0; j < decay.zeta.size(); j += 16) {
      decay_csv.row({name, "2", num(decay.zeta[j]), num(decay.profile[j])});
    }
    ck.le(tag("zeta_decay", {{"kernel", name}}), decay.max_tail / decay.reference,
          c.tolerance("zeta_decay", 3.0), "max over |zeta| >= 1 of the profile / profile at 1");
    ck.info(tag("zeta_decay_full", {{"kernel", name}}), decay.max_full / decay.reference,
            "same ratio over the whole grid");
  }
  if (!c.kernels.empty()) return;
  // Negative controls.
  Stage st(r, "cdm.controls");
  const std::vector<SpaceTimePoint> few(probes.begin(), probes.begin() + std::min<std::size_t>(10, probes.size()));
  {
    const auto fam = build_zeta_family(canonical_kernel("Krough", c.n), few, zeta, kappa);
    const auto dec = zeta_decay_check(fam, 4);
    ck.flag("rough_decay_detected[kernel=Krough,N=4]", !dec.pass, dec.max_tail / dec.reference,
            "negative control: (1+|zeta|)^4 profile must grow past 3x");
  }
  {
    const Kernel K1 = canonical_kernel("K1", c.n);
    const int d = K1.d();
    Kernel broken("K1+even", c.n, true, Parity::none, 4, [K1, d](const SpaceTimePoint& p) {
      const double rho = pnorm(p);
      return K1(p) + 0.1 * std::pow(rho, -d) / (1.0 + std::log(rho) * std::log(rho));
    });
    const auto par = parity_check(build_zeta_family(broken, few, zeta, kappa));
    ck.gt("parity_broken[kernel=K1+even]", par.max_residual(), 1e-2,
          "negative control: an even perturbation must break the parity");
  }
}

void harmonics(const ExperimentConfig& c, const std::string& out, RunReport& r) {
  Checks ck(r);
  Stage st(r, "harmonics");
  Csv decay_csv(out, "harmonics_decay.csv", {"n", "M", "m", "k", "profile"});
  Csv y_csv(out, "harmonics_ybounds.csv",
            {"n", "k", "dimension", "expected", "sup_Y", "sup_grad", "normalized", "combined"});
  for (int n : c.n_list) {
    if (n != 2 && n != 3) throw ConfigError("harmonics: n must be 2 or 3");
    const std::string ns = std::to_string(n);
    for (double M : c.surface.M) {
      std::vector<HarmonicExpansion> exps;
      for (const auto& b : b_sweep(n, M)) exps.push_back(expand_sine(b, n, c.k_max, c.resolution));
      if (!out.empty()) write_expansions_csv(exps, out + "/harmonics_n" + ns + "_M" + fmt(M) + ".csv");
      const auto rep = coeff_decay_report(exps, c.m_list, M, 4, std::min(32, c.k_max));
      for (const auto& e : rep.entries) {
        // Successive ratios are only meaningful above the rounding floor.
        double worst = 0.0;
        for (std::size_t i = 1; i < e.profile.size(); ++i) {
          const double floor = rep.noise_floor * std::pow(e.k[i], e.m) * std::pow(M, -e.m);
          if (e.profile[i] > floor && e.profile[i - 1] > 0.0) {
            worst = std::max(worst, e.profile[i] / e.profile[i - 1]);
          }
          decay_csv.row({ns, num(M), std::to_string(e.m), std::to_string(e.k[i]), num(e.profile[i])});
        }
        ck.flag(tag("decay", {{"n", ns}, {"M", fmt(M)}, {"m", std::to_string(e.m)}}), e.monotone,
                worst, "max successive profile ratio over odd k in [4, 32] above the noise floor");
        ck.info(tag("decay_sup", {{"n", ns}, {"M", fmt(M)}, {"m", std::to_string(e.m)}}), e.sup);
      }
      double even_max = 0.0;
      for (const auto& e : exps) {
        for (int k = 0; k <= e.k_max; ++k) {
          for (std::size_t j = 0; j < e.coeffs[k].size(); ++j) {
            if (!harmonic_is_odd(n, k, static_cast<int>(j))) {
              even_max = std::max(even_max, std::abs(e.coeffs[k][j]));
            }
          }
        }
      }
      ck.le(tag("even_coefficients", {{"n", ns}, {"M", fmt(M)}}), even_max,
            c.tolerance("even_coefficients", 1e-12));
    }
    // Resynthesis and Parseval at |b| = 2.
    Rng rng(c.seed + n);
    std::vector<double> b(n - 1);
    double bn = 0.0;
    for (double& v : b) {
      v = rng.normal();
      bn += v * v;
    }
    for (double& v : b) v *= 2.0 / std::sqrt(bn);
    const auto e = expand_sine(b, n, c.k_max, c.resolution);
    double worst = 0.0;
    for (int q = 0; q < 100; ++q) {
      SpaceTimePoint w;
      w.spatial_dims = n - 1;
      double norm = 0.0;
      for (int a = 0; a < n - 1; ++a) {
        w.x[a] = rng.normal();
        norm += w.x[a] * w.x[a];
      }
      w.t = rng.normal();
      norm = std::sqrt(norm + w.t * w.t);
      double dot = 0.0;
      for (int a = 0; a < n - 1; ++a) {
        w.x[a] /= norm;
        dot += w.x[a] * b[a];
      }
      w.t /= norm;
      worst = std::max(worst, std::abs(e.evaluate(w) - std::sin(dot)));
    }
    ck.le(tag("resynthesis", {{"n", ns}, {"b", "2"}}), worst, c.tolerance("resynthesis", 1e-8));
    const double energy = sine_energy(b, n, e.resolution);
    ck.le(tag("parseval_deficit", {{"n", ns}, {"b", "2"}}), std::abs(energy - e.coefficient_energy()),
          c.tolerance("parseval", 1e-8));
    ck.le(tag("gram", {{"n", ns}}), gram_error(n, c.k_max, e.resolution), c.tolerance("gram", 1e-10));

    const auto y = y_bounds_check(n, c.k_max);
    for (int k = 0; k <= c.k_max; ++k) {
      y_csv.row({ns, std::to_string(k), std::to_string(y.dimension[k]), std::to_string(y.expected[k]),
                 num(y.sup_Y[k]), num(y.sup_grad[k]), num(y.normalized[k]), num(y.combined[k])});
    }
    ck.flag(tag("dimensions", {{"n", ns}}), y.dimensions_ok, c.k_max, "h_k for k <= k_max");
    ck.le(tag("y_bound", {{"n", ns}}), y.max_all / y.max_small, 2.0,
          "max_k sup|Y| k^{-(n-2)/2} over k <= k_max relative to k <= 4");
    double comb = 0.0;
    for (int k = 1; k <= c.k_max; ++k) comb = std::max(comb, y.combined[k]);
    ck.info(tag("y_gradient_constant", {{"n", ns}}), comb,
            "max_k (sup|Y| + sup|grad Y| / k) k^{-(n-2)/2}");
  }
}

struct SweepRow {
  double M = 0.0, eps = 0.0, norm = 0.0, residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Shared by norm-sweep and commutator: operator norms over (M, eps).
void norm_family(const ExperimentConfig& c, const std::string& out, RunReport& r,
                 const std::string& csv_name,
                 const std::function<IntegralOperator(const Surface&, const TruncationSpec&)>& make) {
  Checks ck(r);
  const ParabolicGrid grid = make_grid(c, c.grid.h);
  Csv csv(out, csv_name, {"M", "epsilon", "norm", "iterations", "residual", "converged"});
  std::vector<double> growth_x, growth_y;
  for (std::size_t i = 0; i < c.surface.M.size(); ++i) {
    const double M = c.surface.M[i];
    const Surface s = make_surface(c, grid, M, i);
    std::vector<double> eps, norms;
    bool all_converged = true;
    for (double e : c.epsilon) {
      SweepRow row{M, e};
      {
        std::optional<DenseOperator> dense;
        {
          Stage st(r, "assemble");
          dense.emplace(make(s, TruncationSpec::sharp(e)).assemble());
        }
        Stage st(r, "power_iteration");
        const auto est = opnorm_estimate(*dense, c.power_tol, c.power_iterations, c.seed);
        row.norm = est.value;
        row.residual = est.residual;
        row.iterations = est.iterations;
        row.converged = est.converged;
      }
      all_converged = all_converged && row.converged;
      csv.row({num(M), num(e), num(row.norm), std::to_string(row.iterations), num(row.residual),
               row.converged ? "1" : "0"});
      eps.push_back(e);
      norms.push_back(row.norm);
    }
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    double slope = 0.0, ratio = 1.0;
    if (*hi > 0.0) {
      ratio = *lo > 0.0 ? *hi / *lo : INFINITY;
      slope = *lo > 0.0 ? fit_slope(logs(eps), logs(norms)) : INFINITY;
    }
    const std::string ms = fmt(M);
    ck.le(tag("slope", {{"M", ms}}), std::abs(slope), c.tolerance("slope", 0.1),
          "|dlog norm / dlog eps| over the eps sweep");
    ck.le(tag("ratio", {{"M", ms}}), ratio, c.tolerance("ratio", 2.0), "max / min norm over eps");
    ck.flag(tag("converged", {{"M", ms}}), all_converged, c.power_iterations,
            "power iteration reached tol " + fmt(c.power_tol));
    ck.info(tag("norm_max", {{"M", ms}}), *hi);
    // Diagnostic: the part of the sweep far below the torus scale (eps <= 2h).
    double fine_lo = INFINITY, fine_hi = 0.0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      if (eps[k] <= 2.0 * grid.h() * (1.0 + 1e-12)) {
        fine_lo = std::min(fine_lo, norms[k]);
        fine_hi = std::max(fine_hi, norms[k]);
      }
    }
    if (fine_hi > 0.0) {
      ck.info(tag("ratio_eps_le_2h", {{"M", ms}}), fine_hi / fine_lo, "max / min norm over eps <= 2h");
    }
    if (*hi > 0.0) {
      growth_x.push_back(std::log1p(M));
      growth_y.push_back(std::log(*hi));
    }
  }
  if (growth_x.size() >= 2) {
    const double p = fit_slope(growth_x, growth_y);
    ck.flag("growth_exponent", std::isfinite(p), p,
            "fitted exponent of max_eps norm against (1 + M); recorded only");
  }
}

void norm_sweep(const ExperimentConfig& c, const std::string& out, RunReport& r) {
  const Kernel K = canonical_kernel(c.kernels.empty() ? "K2" : c.kernels.front(), c.n);
  norm_family(c, out, r, "norm_sweep.csv",
              [&](const Surface& s, const TruncationSpec& tr) { return graph_sio(K, s, tr); });
}

void commutator_exp(const ExperimentConfig& c, const std::string& out, RunReport& r) {
  const Kernel H = canonical_kernel(c.kernels.empty() ? "H2" : c.kernels.front(), c.n);
  norm_family(c, out, r, "commutator.csv",
              [&](const Surface& s, const TruncationSpec& tr) { return commutator(H, s, tr); });
}

void decompose(const ExperimentConfig& c, const std::string& out, RunReport& r) {
  Checks ck(r);
  const Kernel H = canonical_kernel(c.kernels.empty() ? "H2" : c.kernels.front(), c.n);
  const ParabolicGrid grid = make_grid(c, c.grid.h);
  double rho_hi = 0.0;
  {
    SpaceTimePoint corner;
    corner.spatial_dims = c.n - 1;
    for (int a = 0; a < c.n - 1; ++a) corner.x[a] = 0.5 * grid.period(a);
    corner.t = 0.5 * grid.period(c.n - 1);
    rho_hi = 2.0 * pnorm(corner);
  }
  const RadialProfileKernel Ht(H, 0.5 * grid.h(), rho_hi);
  const Ball B{SpaceTimePoint(), c.ball_radius};
  Csv csv(out, "decompose.csv",
          {"surface", "M", "epsilon", "sup_residual", "sup_C", "sup_I", "sup_II", "mean_I",
           "mean_II", "C_over_M", "center_residual", "center_boundary"});
  for (std::size_t i = 0; i < c.surface.M.size(); ++i) {
    const double M = c.surface.M[i];
    const Surface s = make_surface(c, grid, M, i);
    std::vector<double> consts, far;
    const std::size_t i0 = grid.nearest_index(B.center);
    for (double e : c.epsilon) {
      Stage st(r, "decompose");
      const auto dcp = decompose_commutator(Ht, s, B, e);
      consts.push_back(M > 0.0 ? dcp.sup_residual / M : dcp.sup_residual);
      const double res0 = dcp.C[i0] - dcp.I[i0] - dcp.II[i0];
      const double bnd = s.modes.empty() ? NAN : ibp_boundary_term(Ht, s, grid.point(i0), e);
      far.push_back(res0 - bnd);
      csv.row({s.label, num(M), num(e), num(dcp.sup_residual), num(dcp.sup_C), num(dcp.sup_I),
               num(dcp.sup_II), num(dcp.mean_I), num(dcp.mean_II), num(consts.back()), num(res0),
               num(bnd)});
    }
    if (!s.modes.empty()) {
      // Residual minus the rho = eps sphere term: the eps-independent far-field part.
      const auto [flo, fhi] = std::minmax_element(far.begin(), far.end());
      double scale = 0.0;
      for (double v : far) scale = std::max(scale, std::abs(v));
      ck.info(tag("far_field_spread", {{"M", fmt(M)}}), scale > 0.0 ? (*fhi - *flo) / scale : 0.0,
              "(max - min) / max of (C - I - II)(center) - sphere term at eps");
    }
    const auto [lo, hi] = std::minmax_element(consts.begin(), consts.end());
    const double variation = *hi > 0.0 ? (*lo > 0.0 ? *hi / *lo - 1.0 : INFINITY) : 0.0;
    ck.le(tag("residual_variation", {{"M", fmt(M)}}), variation, c.tolerance("residual_variation", 0.3),
          "max / min - 1 of sup_B |C eta - I - II| / M over eps");
    ck.info(tag("residual_constant", {{"M", fmt(M)}}), *hi);
  }
  {
    Stage st(r, "decompose");
    const Surface lin = linear_surface(grid, 1.0);
    double worst = 0.0;
    for (double e : c.epsilon) {
      const auto dcp = decompose_commutator(Ht, lin, B, e);
      worst = std::max(worst, dcp.II.max_abs());
      csv.row({lin.label, "1", num(e), num(dcp.sup_residual), num(dcp.sup_C), num(dcp.sup_I),
               num(dcp.sup_II), num(dcp.mean_I), num(dcp.mean_II), num(dcp.sup_residual)});
    }
    ck.le("time_independent_II", worst, 0.0, "A independent of t: II must vanish identically");
  }
  const auto& jeps_eps = c.jeps_epsilon;
  if (jeps_eps.empty()) return;
  Stage st(r, "jeps");
  Csv jcsv(out, "jeps.csv", {"L", "h", "epsilon", "weighted_sup"});
  const ParabolicGrid jg = ParabolicGrid::box(c.n, c.jeps_L, c.jeps_h);
  SpaceTimePoint corner;
  corner.spatial_dims = c.n - 1;
  for (int a = 0; a < c.n - 1; ++a) corner.x[a] = 2.0 * c.jeps_L;
  corner.t = 4.0 * c.jeps_L * c.jeps_L;
  const RadialProfileKernel Jt(H, 0.5 * c.jeps_h, 2.0 * pnorm(corner));
  const auto rep = jeps_fourier_check(Jt, jeps_eps, jg, c.tolerance("jeps_ratio", 4.0));
  for (std::size_t k = 0; k < rep.epsilon.size(); ++k) {
    jcsv.row({num(c.jeps_L), num(c.jeps_h), num(rep.epsilon[k]), num(rep.sup[k])});
  }
  ck.le("jeps_ratio", rep.ratio, rep.threshold, "max / min over eps of sup pnorm |J_eps^|");
  ck.info("jeps_sup_max", *std::max_element(rep.sup.begin(), rep.sup.end()));
  if (c.jeps_doubling) {
    const ParabolicGrid big = ParabolicGrid::box(c.n, 2.0 * c.jeps_L, c.jeps_h);
    double worst = 0.0;
    for (std::size_t k = 0; k < jeps_eps.size(); ++k) {
      const double v = jeps_weighted_sup(jeps_symbol(Jt, big, jeps_eps[k]), big);
      jcsv.row({num(2.0 * c.jeps_L), num(c.jeps_h), num(jeps_eps[k]), num(v)});
      worst = std::max(worst, std::abs(v - rep.sup[k]) / rep.sup[k]);
    }
    ck.le("jeps_doubling", worst, c.tolerance("jeps_doubling", 0.1),
          "relative change of the sup when the box is doubled");
  }
}

void gamma_exp(const ExperimentConfig& c, const std::string& out, RunReport& r) {
  Checks ck(r);
  const auto hs = grid_h_list(c);
  const std::vector<double> deltas = c.delta.empty() ? dyadic_deltas(4.0 * hs.front()) : c.delta;
  const double dlog = deltas.size() >= 2 ? std::abs(std::log(deltas[1] / deltas[0])) : std::log(2.0) / 4.0;
  const Ball B{SpaceTimePoint(), c.ball_radius};
  Csv csv(out, "gamma_carleson.csv", {"h", "M", "seed", "carleson", "C"});
  std::vector<std::vector<double>> C(hs.size());
  for (std::size_t g = 0; g < hs.size(); ++g) {
    const ParabolicGrid grid = make_grid(c, hs[g]);
    for (std::size_t i = 0; i < c.surface.M.size(); ++i) {
      const double M = c.surface.M[i];
      const Surface s = make_surface(c, grid, M, i);
      Stage st(r, "gamma");
      const auto nodes = ball_points(grid, B.center, B.radius);
      const auto field = gamma_field(s, nodes, deltas);
      if (!out.empty() && g == 0 && i == 0) write_gamma_csv(field, out + "/gamma_field.csv");
      const double v = carleson_integral(field, dlog);
      C[g].push_back(M > 0.0 ? v / (M * M) : 0.0);
      csv.row({num(hs[g]), num(M), std::to_string(c.surface.seed + i * c.surface.seed_stride), num(v),
               num(C[g].back())});
    }
    double mean = 0.0;
    for (double v : C[g]) mean += v;
    mean /= static_cast<double>(C[g].size());
    double spread = 0.0;
    for (double v : C[g]) spread = std::max(spread, std::abs(v / mean - 1.0));
    ck.le(tag("constant_spread", {{"h", fmt(hs[g])}}), spread, c.tolerance("spread", 0.25),
          "max |C(M) / mean - 1| with C = carleson / M^2");
    std::vector<double> lm, lc;
    for (std::size_t i = 0; i < c.surface.M.size(); ++i) {
      if (c.surface.M[i] > 0.0 && C[g][i] > 0.0) {
        lm.push_back(std::log(c.surface.M[i]));
        lc.push_back(std::log(C[g][i] * c.surface.M[i] * c.surface.M[i]));
      }
    }
    ck.info(tag("fitted_exponent", {{"h", fmt(hs[g])}}), fit_slope(lm, lc),
            "slope of log carleson against log M");
  }
  for (std::size_t g = 1; g < hs.size(); ++g) {
    for (std::size_t i = 0; i < c.surface.M.size(); ++i) {
      const double rel = std::abs(C[g - 1][i] - C[g][i]) / C[g][i];
      ck.le(tag("refinement", {{"M", fmt(c.surface.M[i])}, {"h", fmt(hs[g])}}), rel,
            c.tolerance("refinement", 0.25), "relative change of C under h -> h/2");
    }
  }
  {
    Stage st(r, "gamma");
    const ParabolicGrid grid = make_grid(c, hs.front());
    std::vector<double> b(c.n - 1, 0.0);
    for (std::size_t a = 0; a < b.size() && a < c.surface.slope.size(); ++a) b[a] = c.surface.slope[a];
    const Surface aff = affine_surface(grid, b, 0.3);
    const double v = carleson_integral(aff, B, deltas, dlog);
    ck.le("affine_zero", v, c.tolerance("affine_zero", 1e-20),
          "A = b.x + c: zero up to rounding of the affine samples");
  }
}

void t1_exp(const ExperimentConfig& c, const std::string& out, RunReport& r) {
  Checks ck(r);
  const auto hs = grid_h_list(c);
  const Ball B{SpaceTimePoint(), c.ball_radius};
  const std::vector<std::string> names =
      c.kernels.empty() ? std::vector<std::string>{"K2", "H1"} : c.kernels;
  const double eps = c.epsilon.empty() ? 0.5 : c.epsilon.front();
  Csv csv(out, "t1.csv", {"operator", "h", "M", "average"});
  for (const auto& name : names) {
    const Kernel K = canonical_kernel(name, c.n);
    // Ambient kernels act as graph SIOs; kernels on R^n as the cos Calderon-type operator.
    const std::string op = K.ambient() ? "graph_sio[" + name + "]" : "calderon_cos[" + name + "]";
    std::vector<std::vector<double>> table(hs.size());
    for (std::size_t g = 0; g < hs.size(); ++g) {
      const ParabolicGrid grid = make_grid(c, hs[g]);
      const GridField eta = t1_bump_field(grid, B);
      for (std::size_t i = 0; i < c.surface.M.size(); ++i) {
        const double M = c.surface.M[i];
        const Surface s = make_surface(c, grid, M, i);
        Stage st(r, "t1");
        const auto tr = TruncationSpec::sharp(eps);
        const double v = K.ambient() ? t1_average(graph_sio(K, s, tr), B, eta)
                                     : t1_average(calderon(K, s, CalderonFunction::cos, 1.0, tr), B, eta);
        table[g].push_back(v);
        csv.row({op, num(hs[g]), num(M), num(v)});
      }
    }
    const auto& fine = table.back();
    bool finite = true;
    for (const auto& row : table) {
      for (double v : row) finite = finite && std::isfinite(v);
    }
    ck.flag(tag("finite", {{"op", op}}), finite, fine.empty() ? 0.0 : fine.back(), "all table entries finite");
    for (std::size_t g = 1; g < hs.size(); ++g) {
      double worst = 0.0;
      for (std::size_t i = 0; i < fine.size(); ++i) {
        worst = std::max(worst, std::abs(table[g - 1][i] - table[g][i]) / std::abs(table[g][i]));
      }
      ck.le(tag("refinement", {{"op", op}, {"h", fmt(hs[g])}}), worst, c.tolerance("refinement", 0.05),
            "max relative change under h -> h/2");
    }
    // Monotone-bounded: on the finest grid the average must not drop by more than the
    // refinement tolerance as M increases.
    double worst_drop = 0.0;
    for (std::size_t i = 1; i < fine.size(); ++i) {
      if (fine[i - 1] > 0.0) worst_drop = std::max(worst_drop, 1.0 - fine[i] / fine[i - 1]);
    }
    ck.le(tag("monotone", {{"op", op}}), worst_drop, c.tolerance("monotone", 0.05),
          "largest relative decrease between consecutive M");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      if (fine[i] > 0.0) {
        lx.push_back(std::log1p(c.surface.M[i]));
        ly.push_back(std::log(fine[i]));
      }
    }
    ck.info(tag("growth_exponent", {{"op", op}}), fit_slope(lx, ly),
            "slope of log average against log(1 + M)");
  }
}

// Experiment-specific defaults, applied before the user's keys.
void apply_defaults(ExperimentConfig& c) {
  const auto& e = c.experiment;
  if (e == "kernel-check") {
    c.probes = 200;
  } else if (e == "cdm") {
    c.probes = 50;
  } else if (e == "harmonics") {
    c.surface.M = {0.5, 1.0, 2.0};
  } else if (e == "norm-sweep" || e == "commutator") {
    c.kernels = {e == "norm-sweep" ? "K2" : "H2"};
    c.grid.counts = {64, 64};
    c.grid.h = 1.0 / 16.0;
    c.surface.M = e == "norm-sweep" ? std::vector<double>{0.5, 1.0, 2.0, 4.0}
                                    : std::vector<double>{0.5, 1.0, 2.0};
    for (int k = 1; k <= 6; ++k) c.epsilon.push_back(std::ldexp(2.0, -k));
  } else if (e == "decompose") {
    c.kernels = {"H2"};
    c.grid.L = 6.0;
    c.grid.h = 1.0 / 8.0;
    c.epsilon = {0.25, 0.5, 1.0, 2.0, 2.5};
    for (int k = 2; k <= 6; ++k) c.jeps_epsilon.push_back(std::ldexp(1.0, -k));
  } else if (e == "gamma") {
    c.grid.L = 2.25;
    c.grid.h = 1.0 / 8.0;
    c.grid.refine = {1.0 / 16.0};
    c.surface.M = {0.5, 1.0, 2.0, 4.0};
    c.surface.seed_stride = 1;
    for (int i = 0; i <= 4; ++i) c.delta.push_back(std::exp2(-i / 4.0));
  } else if (e == "t1") {
    c.kernels = {"K2", "H1"};
    c.grid.L = 5.5;
    c.grid.h = 0.25;
    c.grid.refine = {0.125};
    c.surface.M = {0.5, 1.0, 2.0, 4.0};
    c.epsilon = {0.5};
  }
}

}  // namespace

// ---------------------------------------------------------------- public

ExperimentConfig parse_config(const std::string& text, const std::string& experiment) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    reject_unknown(j,
                   {"experiment", "n", "grid", "kernels", "kernel", "surface", "epsilon", "delta",
                    "order", "probes", "zeta", "kappa", "harmonics", "ball_radius", "power",
                    "tolerances", "seed", "threads", "jeps"},
                   "config");
    ExperimentConfig c;
    read(j, "experiment", c.experiment);
    if (!experiment.empty()) {
      if (!c.experiment.empty() && c.experiment != experiment) {
        throw ConfigError("config is for experiment '" + c.experiment + "', not '" + experiment + "'");
      }
      c.experiment = experiment;
    }
    apply_defaults(c);
    read(j, "n", c.n);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      reject_unknown(g, {"L", "h", "counts", "dt", "refine"}, "grid");
      read(g, "L", c.grid.L);
      read(g, "h", c.grid.h);
      if (g.contains("L") && !g.contains("counts")) c.grid.counts.clear();
      read(g, "counts", c.grid.counts);
      if (g.contains("dt")) c.grid.dt = g.at("dt").get<double>();
      read(g, "refine", c.grid.refine);
    }
    if (j.contains("kernel")) c.kernels = {j.at("kernel").get<std::string>()};
    read(j, "kernels", c.kernels);
    if (j.contains("surface")) {
      const auto& s = j.at("surface");
      reject_unknown(s, {"kind", "seed", "seed_stride", "M", "slope"}, "surface");
      read(s, "kind", c.surface.kind);
      read(s, "seed", c.surface.seed);
      read(s, "seed_stride", c.surface.seed_stride);
      if (s.contains("M")) {
        c.surface.M = s.at("M").is_array() ? s.at("M").get<std::vector<double>>()
                                           : std::vector<double>{s.at("M").get<double>()};
      }
      read(s, "slope", c.surface.slope);
    }
    read(j, "epsilon", c.epsilon);
    read(j, "delta", c.delta);
    read(j, "order", c.order);
    read(j, "probes", c.probes);
    if (j.contains("zeta")) {
      const auto& z = j.at("zeta");
      reject_unknown(z, {"Z", "count", "tail_Z"}, "zeta");
      read(z, "Z", c.zeta_Z);
      read(z, "count", c.zeta_count);
      read(z, "tail_Z", c.tail_Z);
    }
    if (j.contains("kappa")) {
      const auto& k = j.at("kappa");
      reject_unknown(k, {"R", "step"}, "kappa");
      read(k, "R", c.kappa_R);
      read(k, "step", c.kappa_step);
    }
    if (j.contains("harmonics")) {
      const auto& hm = j.at("harmonics");
      reject_unknown(hm, {"k_max", "resolution", "n", "m"}, "harmonics");
      read(hm, "k_max", c.k_max);
      read(hm, "resolution", c.resolution);
      read(hm, "n", c.n_list);
      read(hm, "m", c.m_list);
    }
    read(j, "ball_radius", c.ball_radius);
    if (j.contains("power")) {
      const auto& p = j.at("power");
      reject_unknown(p, {"iterations", "tol"}, "power");
      read(p, "iterations", c.power_iterations);
      read(p, "tol", c.power_tol);
    }
    read(j, "tolerances", c.tolerances);
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    if (j.contains("jeps")) {
      const auto& js = j.at("jeps");
      reject_unknown(js, {"L", "h", "epsilon", "doubling"}, "jeps");
      read(js, "L", c.jeps_L);
      read(js, "h", c.jeps_h);
      read(js, "epsilon", c.jeps_epsilon);
      read(js, "doubling", c.jeps_doubling);
    }
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), experiment);
}

void validate(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end()) {
    throw ConfigError("unknown experiment '" + c.experiment + "'");
  }
  if (c.n < 2 || c.n > kMaxSpatialDims + 1) throw ConfigError("n must be in 2..4");
  if (!(c.grid.h > 0.0)) throw ConfigError("grid.h must be positive");
  if (c.grid.dt && std::abs(*c.grid.dt - c.grid.h * c.grid.h) > 1e-15 * c.grid.h * c.grid.h) {
    throw ConfigError("grid.dt = " + fmt(*c.grid.dt) + " violates dt = h^2 (h = " + fmt(c.grid.h) + ")");
  }
  if (!c.grid.counts.empty() && static_cast<int>(c.grid.counts.size()) != c.n) {
    throw ConfigError("grid.counts must have n entries");
  }
  try {
    for (double h : grid_h_list(c)) (void)make_grid(c, h);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  const auto known = canonical_kernel_names();
  for (const auto& k : c.kernels) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError("unknown kernel '" + k + "'");
    }
  }
  const std::set<std::string> kinds{"random", "linear", "zero", "affine"};
  if (!kinds.count(c.surface.kind)) throw ConfigError("unknown surface kind '" + c.surface.kind + "'");
  for (double M : c.surface.M) {
    if (!(M >= 0.0)) throw ConfigError("surface.M values must be >= 0");
  }
  for (double e : c.epsilon) {
    if (!(e > 0.0)) throw ConfigError("epsilon values must be positive");
  }
  for (double d : c.delta) {
    if (d < 4.0 * c.grid.h * (1.0 - 1e-12)) {
      throw ConfigError("delta = " + fmt(d) + " is below 4 grid cells");
    }
  }
  if (c.probes < 1) throw ConfigError("probes must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.experiment == "cdm") {
    try {
      ZetaGrid{c.zeta_Z, c.zeta_count}.validate();
      const double ratio = (2.0 * c.zeta_Z / c.zeta_count) * 2.0 * c.kappa_R;
      if (std::abs(ratio - std::round(ratio)) > 1e-9) {
        throw std::invalid_argument("zeta spacing times 2R must be an integer");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("cdm: ") + e.what());
    }
  }
  if (c.experiment == "harmonics") {
    for (int n : c.n_list) {
      if (n != 2 && n != 3) throw ConfigError("harmonics: n must be 2 or 3");
    }
    if (c.k_max < 32) throw ConfigError("harmonics: k_max must be >= 32 for the decay window");
  }
  if ((c.experiment == "norm-sweep" || c.experiment == "commutator" || c.experiment == "decompose") &&
      c.epsilon.empty()) {
    throw ConfigError(c.experiment + ": epsilon list is empty");
  }
}

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* RunReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

RunReport run(const ExperimentConfig& config, const std::string& out_dir) {
  validate(config);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  set_thread_count(config.threads);
  RunReport r;
  r.experiment = config.experiment;
  r.version = PARSIO_VERSION;
  {
    r.config_json = to_json(config).dump();
  }
  WarningCapture capture;
  const auto& e = config.experiment;
  try {
    if (e == "kernel-check") {
      kernel_check(config, out_dir, r);
    } else if (e == "cdm") {
      cdm(config, out_dir, r);
    } else if (e == "harmonics") {
      harmonics(config, out_dir, r);
    } else if (e == "norm-sweep") {
      norm_sweep(config, out_dir, r);
    } else if (e == "commutator") {
      commutator_exp(config, out_dir, r);
    } else if (e == "decompose") {
      decompose(config, out_dir, r);
    } else if (e == "gamma") {
      gamma_exp(config, out_dir, r);
    } else if (e == "t1") {
      t1_exp(config, out_dir, r);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(e + ": " + ex.what());
  }
  r.warnings = capture.messages();
  return r;
}

std::string config_json(const ExperimentConfig& c) { return to_json(c).dump(); }

std::string report_json(const RunReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json v = std::isfinite(c.value) ? json(c.value) : json(c.value > 0 ? "inf" : (c.value < 0 ? "-inf" : "nan"));
    checks.push_back({{"name", c.name},
                      {"value", v},
                      {"threshold", c.threshold},
                      {"relation", c.relation},
                      {"pass", c.pass},
                      {"note", c.note}});
  }
  const json j{{"experiment", r.experiment},
               {"config", json::parse(r.config_json)},
               {"checks", checks},
               {"warnings", r.warnings},
               {"version", r.version},
               {"pass", r.passed()}};
  return j.dump(2) + "\n";
}

void write_report(const RunReport& r, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(std::filesystem::path(out_dir) / "report.json");
    if (!out) throw std::runtime_error("cannot write report.json in " + out_dir);
    out << report_json(r);
  }
  std::ofstream out(std::filesystem::path(out_dir) / "timing.json");
  if (!out) throw std::runtime_error("cannot write timing.json in " + out_dir);
  out << json(r.timings).dump(2) << "\n";
}

}  // namespace parsio

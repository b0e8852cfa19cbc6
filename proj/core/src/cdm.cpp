#include "parsio/cdm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "parsio/diagnostics.hpp"
#include "parsio/parallel.hpp"

namespace parsio {

void ZetaGrid::validate() const {
  if (!(Z > 0.0)) throw std::invalid_argument("zeta grid: Z must be positive");
  if (count < 2 || count % 2 != 0) throw std::invalid_argument("zeta grid: count must be even");
}

std::size_t KappaGrid::size() const {
  const double n = 2.0 * R / step;
  const auto k = static_cast<std::size_t>(std::llround(n));
  if (!(R > 0.0) || !(step > 0.0) || std::abs(n - static_cast<double>(k)) > 1e-6) {
    throw std::invalid_argument("kappa grid: 2R / step must be a positive integer");
  }
  return k;
}

std::vector<Complex> hzeta_compute(const Kernel& K, const SpaceTimePoint& x, const ZetaGrid& zeta,
                                   const KappaGrid& kappa) {
  if (!K.ambient()) throw std::invalid_argument("hzeta_compute: kernel must be ambient");
  if (x.spatial_dims != K.n() - 1) {
    throw std::invalid_argument("hzeta_compute: point dimension does not match the kernel");
  }
  if (x.is_zero()) throw std::invalid_argument("hzeta_compute: x = 0 is not allowed");
  zeta.validate();
  if (kappa.R < 1000.0) {
    warn("hzeta_compute: kappa range R = " + std::to_string(kappa.R) +
         " is below 1e3; the (1+|kappa|)^{-d} tail is not negligible");
  }
  const std::size_t N = kappa.size();
  const double ratio = zeta.step() * 2.0 * kappa.R;
  const auto r = static_cast<long>(std::llround(ratio));
  if (r < 1 || std::abs(ratio - r) > 1e-9 * ratio) {
    throw std::invalid_argument("hzeta_compute: zeta spacing must be a multiple of 1/(2R)");
  }
  const long max_bin = r * (zeta.count / 2);
  if (2 * max_bin >= static_cast<long>(N)) {
    throw std::invalid_argument("hzeta_compute: zeta range exceeds the kappa sampling band");
  }
  const double rho = pnorm(x);
  std::vector<Complex> samples(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double k = -kappa.R + static_cast<double>(j) * kappa.step;
    samples[j] = K(ambient_point(rho * k, x));
  }
  samples[0] = 0.5 * (K(ambient_point(-rho * kappa.R, x)) + K(ambient_point(rho * kappa.R, x)));
  dft_inplace(samples, {static_cast<int>(N)}, -1);
  std::vector<Complex> out(zeta.size());
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    const long m = (static_cast<long>(j) - zeta.count / 2) * r;
    const std::size_t bin = static_cast<std::size_t>(m < 0 ? m + static_cast<long>(N) : m);
    // exp(-2 pi i zeta_m (-R)) = (-1)^m for zeta_m = m / (2R).
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    out[j] = kappa.step * sign * samples[bin];
  }
  return out;
}

ZetaFamily build_zeta_family(const Kernel& K, const std::vector<SpaceTimePoint>& probes,
                             const ZetaGrid& zeta, const KappaGrid& kappa) {
  ZetaFamily fam;
  fam.kernel = K.name();
  fam.zeta = zeta;
  fam.kappa = kappa;
  fam.probes = probes;
  fam.values.resize(probes.size());
  fam.reflected.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      fam.values[p] = hzeta_compute(K, probes[p], zeta, kappa);
      fam.reflected[p] = hzeta_compute(K, reflect_space(probes[p]), zeta, kappa);
    }
  });
  return fam;
}

namespace {

double scale_of(const ZetaFamily& fam, std::size_t p) {
  return std::pow(pnorm(fam.probes[p]), homogeneous_dimension(fam.probes[p].dimension()));
}

}  // namespace

ParityReport parity_check(const ZetaFamily& fam) {
  ParityReport r;
  const std::size_t m = fam.zeta.size();
  for (std::size_t p = 0; p < fam.probes.size(); ++p) {
    const double s = scale_of(fam, p);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = m - 1 - j;  // zeta_k = -zeta_j
      r.even_residual = std::max(r.even_residual, s * std::abs(fam.even(p, j) + fam.even(p, k)));
      r.odd_residual = std::max(r.odd_residual, s * std::abs(fam.odd(p, j) - fam.odd(p, k)));
      r.conjugate_residual =
          std::max(r.conjugate_residual, s * std::abs(fam.values[p][k] - std::conj(fam.values[p][j])));
      r.resynthesis_residual = std::max(
          r.resynthesis_residual, s * std::abs(fam.values[p][j] - fam.even(p, j) - fam.odd(p, j)));
    }
  }
  return r;
}

Reconstruction reconstruct_K(const ZetaFamily& fam, std::size_t p, double x0, double tol,
                             int decay_order) {
  if (p >= fam.probes.size()) throw std::out_of_range("reconstruct_K: probe index");
  const double kappa0 = x0 / pnorm(fam.probes[p]);
  const std::size_t m = fam.zeta.size();
  const double dz = fam.zeta.step();
  std::vector<double> re(m), im(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double w = (j == 0 || j == m - 1) ? 0.5 * dz : dz;
    const double arg = 2.0 * std::numbers::pi * kappa0 * fam.zeta.value(j);
    const Complex he = fam.even(p, j);
    const Complex ho = fam.odd(p, j);
    re[j] = w * (std::cos(arg) * ho.real() - std::sin(arg) * he.imag());
    im[j] = w * (std::cos(arg) * ho.imag() + std::sin(arg) * he.real());
  }
  Reconstruction r;
  r.value = pairwise_sum(re.data(), re.size());
  r.imag_residual = std::abs(pairwise_sum(im.data(), im.size()));
  const double edge = std::max(std::abs(fam.values[p][0]), std::abs(fam.values[p][m - 1]));
  const double Z = fam.zeta.Z;
  r.tail_estimate = decay_order > 1 ? 2.0 * edge * (1.0 + Z) / (decay_order - 1)
                                    : std::numeric_limits<double>::infinity();
  r.flagged = r.tail_estimate > tol * std::max(std::abs(r.value), 1e-300);
  return r;
}

ZetaDecayReport zeta_decay_check(const ZetaFamily& fam, int N) {
  ZetaDecayReport r;
  r.N = N;
  const std::size_t m = fam.zeta.size();
  r.zeta.resize(m);
  r.profile.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    r.zeta[j] = fam.zeta.value(j);
    const double w = std::pow(1.0 + std::abs(r.zeta[j]), N);
    for (std::size_t p = 0; p < fam.probes.size(); ++p) {
      r.profile[j] = std::max(r.profile[j], w * scale_of(fam, p) * std::abs(fam.values[p][j]));
    }
  }
  // Reference: the node closest to |zeta| = 1 (both signs).
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const double d = std::abs(std::abs(r.zeta[j]) - 1.0);
    if (d < best - 1e-12) {
      best = d;
      r.reference = r.profile[j];
    } else if (std::abs(d - best) <= 1e-12) {
      r.reference = std::max(r.reference, r.profile[j]);
    }
  }
  r.threshold = 3.0 * r.reference;
  for (std::size_t j = 0; j < m; ++j) {
    r.max_full = std::max(r.max_full, r.profile[j]);
    if (std::abs(r.zeta[j]) >= 1.0 - 1e-12) r.max_tail = std::max(r.max_tail, r.profile[j]);
  }
  r.pass = r.max_tail <= r.threshold;
  return r;
}

void write_zeta_family_csv(const ZetaFamily& fam, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (fam.probes.empty()) return;
  const int s = fam.probes[0].spatial_dims;
  out << "probe";
  for (int a = 0; a < s; ++a) out << ",x" << a + 1;
  out << ",t,zeta,re_H,im_H,re_H_even,im_H_even,re_H_odd,im_H_odd\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.12g", v);
    out << buf;
  };
  for (std::size_t p = 0; p < fam.probes.size(); ++p) {
    for (std::size_t j = 0; j < fam.zeta.size(); ++j) {
      out << p;
      for (int a = 0; a < s; ++a) put(fam.probes[p].x[a]);
      put(fam.probes[p].t);
      put(fam.zeta.value(j));
      put(fam.values[p][j].real());
      put(fam.values[p][j].imag());
      put(fam.even(p, j).real());
      put(fam.even(p, j).imag());
      put(fam.odd(p, j).real());
      put(fam.odd(p, j).imag());
      out << '\n';
    }
  }
}

}  // namespace parsio

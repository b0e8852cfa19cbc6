#include <cmath>
#include <numbers>

#include "doctest.h"
#include "parsio/cdm.hpp"
#include "parsio/kernels.hpp"
#include "parsio/quadrature.hpp"

using namespace parsio;

namespace {

const ZetaGrid kZeta{64.0, 4096};
const KappaGrid kKappa{};

std::vector<SpaceTimePoint> probes(std::size_t count, std::uint64_t seed) {
  return cz_probes(1, count, 0.25, 4.0, seed);
}

}  // namespace

TEST_CASE("H_0 against adaptive quadrature") {
  // Even in x0 so that the zeta = 0 integral does not vanish.
  const Kernel G("even x0", 2, true, Parity::none, 2, [](const SpaceTimePoint& p) {
    const double r = pnorm(p);
    return std::pow(r, -3.0) / (1.0 + std::log(r) * std::log(r)) * (1.0 + p.x[1]);
  });
  for (const auto& x : {SpaceTimePoint({0.7}, 0.3), SpaceTimePoint({-1.2}, -2.0)}) {
    const auto h = hzeta_compute(G, x, kZeta, kKappa);
    const double xn = pnorm(x);
    auto f = [&](double k) { return G(ambient_point(xn * k, x)); };
    double ref = 0.0;
    for (int i = -1024; i < 1024; ++i) ref += integrate_adaptive(f, i, i + 1, 1e-13);
    const std::size_t j0 = kZeta.size() / 2;
    CHECK(kZeta.value(j0) == 0.0);
    CHECK(h[j0].real() == doctest::Approx(ref).epsilon(1e-6));
    CHECK(std::abs(h[j0].imag()) <= 1e-12 * std::abs(ref));
  }
  CHECK_THROWS_AS(hzeta_compute(G, SpaceTimePoint({0.0}, 0.0), kZeta, kKappa), std::invalid_argument);
}

TEST_CASE("odd in x0, even in x: purely imaginary") {
  const auto K1 = canonical_kernel("K1", 2);
  const auto fam = build_zeta_family(K1, probes(4, 3), kZeta, kKappa);
  for (std::size_t p = 0; p < fam.probes.size(); ++p) {
    for (std::size_t j = 0; j < kZeta.size(); ++j) CHECK(std::abs(fam.values[p][j].real()) <= 1e-8);
  }
  const auto Z = build_zeta_family(zero_kernel(2, true), probes(2, 3), kZeta, kKappa);
  for (const auto& row : Z.values)
    for (const auto& v : row) CHECK(v == Complex(0.0));
}

TEST_CASE("parity law, conjugate symmetry and resynthesis") {
  for (const char* name : {"K1", "K2", "K3"}) {
    CAPTURE(name);
    const auto fam = build_zeta_family(canonical_kernel(name, 2), probes(6, 11), kZeta, kKappa);
    const auto rep = parity_check(fam);
    CHECK(rep.max_residual() <= 1e-6);
    CHECK(rep.conjugate_residual <= 1e-10);
    CHECK(rep.resynthesis_residual <= 1e-15);
  }
  const auto K1 = canonical_kernel("K1", 2);
  const Kernel broken("K1 + even", 2, true, Parity::none, 2, [K1](const SpaceTimePoint& p) {
    const double r = pnorm(p);
    return K1(p) + 0.1 * std::pow(r, -3.0) / (1.0 + std::log(r) * std::log(r));
  });
  CHECK(parity_check(build_zeta_family(broken, probes(4, 11), kZeta, kKappa)).max_residual() > 1e-2);
}

TEST_CASE("reconstruction") {
  const auto K1 = canonical_kernel("K1", 2);
  const std::vector<SpaceTimePoint> unit{SpaceTimePoint({1.0}, 0.0), SpaceTimePoint({0.6}, 0.8)};
  const auto fam = build_zeta_family(K1, unit, kZeta, kKappa);
  for (std::size_t p = 0; p < unit.size(); ++p) {
    const double x0 = 0.5;
    const double exact = K1(ambient_point(x0, unit[p]));
    const auto rec = reconstruct_K(fam, p, x0);
    CHECK(std::abs(rec.value - exact) <= 1e-3 * std::abs(exact));
    CHECK(rec.imag_residual <= 1e-10);
    // x0 = 0: the sine term drops out and K1(0, x) = 0.
    CHECK(std::abs(reconstruct_K(fam, p, 0.0).value) <= 1e-10);
  }

  const auto K2 = canonical_kernel("K2", 2);
  const auto pr = probes(3, 29);
  const auto f2 = build_zeta_family(K2, pr, kZeta, kKappa);
  const double kap[] = {0.8, -1.7, 2.9};
  for (std::size_t p = 0; p < pr.size(); ++p) {
    const double x0 = kap[p] * pnorm(pr[p]);
    const double exact = K2(ambient_point(x0, pr[p]));
    CHECK(std::abs(reconstruct_K(f2, p, x0).value - exact) <= 1e-3 * std::abs(exact));
  }
}

TEST_CASE("tail halving") {
  const auto K1 = canonical_kernel("K1", 2);
  const auto pr = probes(5, 2);
  std::vector<double> err;
  // Small Z so that the truncation, not the kappa aliasing of the zeta
  // spacing 1/32, dominates the error.
  for (double Z : {0.25, 0.5, 1.0}) {
    const ZetaGrid zg{Z, static_cast<int>(std::lround(Z * 64))};
    const auto fam = build_zeta_family(K1, pr, zg, kKappa);
    double e = 0.0;
    for (std::size_t p = 0; p < pr.size(); ++p) {
      const double x0 = 0.9 * pnorm(pr[p]);
      e = std::max(e, std::abs(reconstruct_K(fam, p, x0).value - K1(ambient_point(x0, pr[p]))) *
                          std::pow(pnorm(pr[p]), 3.0));
    }
    err.push_back(e);
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.0);
  CHECK(std::log2(err[1] / err[2]) >= 1.0);
}

TEST_CASE("zeta decay") {
  const auto fam = build_zeta_family(canonical_kernel("K1", 2), probes(6, 5), kZeta, kKappa);
  const auto rep = zeta_decay_check(fam, 2);
  CHECK(rep.pass);
  CHECK(rep.reference > 0.0);

  const auto z = zeta_decay_check(build_zeta_family(zero_kernel(2, true), probes(2, 5), kZeta, kKappa), 2);
  for (double v : z.profile) CHECK(v == 0.0);

  const auto rough = build_zeta_family(canonical_kernel("Krough", 2), probes(6, 5), kZeta, kKappa);
  CHECK_FALSE(zeta_decay_check(rough, 4).pass);
}

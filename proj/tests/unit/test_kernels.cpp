#include <cmath>

#include "doctest.h"
#include "parsio/kernels.hpp"
#include "parsio/random.hpp"

using namespace parsio;

namespace {

SpaceTimePoint random_point(Rng& rng, int dims) {
  SpaceTimePoint p;
  p.spatial_dims = dims;
  for (int a = 0; a < dims; ++a) p.x[a] = rng.uniform(-2, 2);
  p.t = rng.uniform(-3, 3);
  return p;
}

}  // namespace

TEST_CASE("make_kernel evaluation and homogeneity") {
  const auto K = make_kernel("x0", 2, true, Parity::odd_in_space, 2,
                             [](const SpaceTimePoint& w) { return w.x[0]; }, [](double) { return 1.0; });
  CHECK(K(ambient_point(1.0, SpaceTimePoint({0.0}, 0.0))) == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng(2);
  const int d = K.d();
  for (int i = 0; i < 100; ++i) {
    const auto p = random_point(rng, 2);
    CHECK(std::abs(K(reflect_space(p)) + K(p)) <= 1e-12 * std::abs(K(p)));
    const double r = std::exp(rng.uniform(-3, 3));
    const double ref = std::pow(r, -d) * K(p);
    CHECK(std::abs(K(dilate(p, r)) - ref) <= 1e-12 * std::abs(ref));
  }

  const auto S = make_kernel("x0 sin", 2, true, Parity::odd_in_space, 2,
                             [](const SpaceTimePoint& w) { return w.x[0]; },
                             [](double u) { return std::sin(u); });
  const SpaceTimePoint p = ambient_point(0.7, SpaceTimePoint({0.3}, 0.4));
  CHECK(std::abs(S(dilate(p, 2.0)) - std::pow(2.0, -d) * S(p)) > 1e-3 * std::abs(S(p)));
}

TEST_CASE("cz_check on the homogeneous K1") {
  const auto K1 = canonical_kernel("K1", 2);
  const auto probes = cz_probes(K1.spatial_dims(), 200, 1e-2, 1e2, 9);
  const auto rep = cz_check(K1, 1, probes);
  CHECK(rep.pass);
  CHECK(rep.parity_ok);

  // Normalized sups agree across three probe decades.
  const auto lo = measure_cz_constants(K1, 1, cz_probes(K1.spatial_dims(), 200, 1e-3, 1e-2, 21));
  const auto mid = measure_cz_constants(K1, 1, cz_probes(K1.spatial_dims(), 200, 1.0, 10.0, 21));
  const auto hi = measure_cz_constants(K1, 1, cz_probes(K1.spatial_dims(), 200, 1e2, 1e3, 21));
  for (const auto& [key, v] : mid) {
    CHECK(lo.at(key) == doctest::Approx(v).epsilon(0.2));
    CHECK(hi.at(key) == doctest::Approx(v).epsilon(0.2));
  }
}

TEST_CASE("cz_check rejects wrong decay and undeclared orders") {
  const auto K1 = canonical_kernel("K1", 2);
  const auto grown = multiply(K1, [](const SpaceTimePoint& p) { return std::sqrt(pnorm(p)); }, "K1 r^1/2");
  const auto rep = cz_check(grown, 1, cz_probes(K1.spatial_dims(), 100, 1.0, 1e3, 4));
  CHECK_FALSE(rep.pass);

  const auto rough = canonical_kernel("Krough", 2);
  CHECK_FALSE(cz_check(rough, 4, cz_probes(rough.spatial_dims(), 100, 0.1, 10.0, 4)).pass);
}

TEST_CASE("zero kernel passes with zero constants") {
  for (bool amb : {false, true}) {
    const auto Z = zero_kernel(2, amb);
    const auto rep = cz_check(Z, 2, cz_probes(Z.spatial_dims(), 50, 1e-2, 1e2, 1));
    CHECK(rep.pass);
    for (const auto& e : rep.entries) CHECK(e.measured == 0.0);
  }
}

TEST_CASE("every shipped kernel passes cz_check at its regularity over [1e-2, 1e2]") {
  for (const auto& name : canonical_kernel_names()) {
    if (name == "Krough") continue;
    for (int n : {2, 3}) {
      const auto K = canonical_kernel(name, n);
      const int N = std::min(2, K.regularity());
      const auto rep = cz_check(K, N, cz_probes(K.spatial_dims(), 150, 1e-2, 1e2, 17));
      CAPTURE(name);
      CAPTURE(n);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("parity_split") {
  Rng rng(8);
  const auto K1 = canonical_kernel("K1", 2);
  const auto [e1, o1] = parity_split(K1);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_point(rng, 2);
    CHECK(e1(p) == doctest::Approx(0.0).epsilon(1e-15).scale(std::abs(K1(p))));
    CHECK(o1(p) == doctest::Approx(K1(p)).epsilon(1e-15));
  }

  const Kernel k("x e^-r", 2, false, Parity::odd_in_space, 2,
                 [](const SpaceTimePoint& p) { return p.x[0] * std::exp(-pnorm(p)); });
  const auto [ek, ok] = parity_split(k);
  const Kernel mixed("mixed", 2, false, Parity::none, 2, [](const SpaceTimePoint& p) {
    return std::cos(p.x[0] + 0.3) * std::exp(-p.t * p.t) + p.x[0] * p.x[0] * p.x[0];
  });
  const auto [em, om] = parity_split(mixed);
  const auto [eme, emo] = parity_split(em);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_point(rng, 1);
    CHECK(ek(p) == 0.0);
    CHECK(ok(p) == doctest::Approx(k(p)).epsilon(1e-15));
    CHECK(std::abs(em(p) + om(p) - mixed(p)) <= 1e-15 * (std::abs(mixed(p)) + 1.0));
    CHECK(eme(p) == em(p));
    CHECK(std::abs(emo(p)) <= 1e-16);
  }
  CHECK(parity_residual(canonical_kernel("H2", 2), cz_probes(1, 100, 0.1, 10, 3)) == 0.0);
}

TEST_CASE("fd_derivative matches analytic derivatives") {
  const Kernel g("gauss", 2, false, Parity::even_in_space, 3,
                 [](const SpaceTimePoint& p) { return std::exp(-p.x[0] * p.x[0] - p.t); });
  const SpaceTimePoint p({0.4}, 0.2);
  const double v = g(p);
  CHECK(fd_derivative(g, p, {1}, 0, 1e-4, 1e-4) == doctest::Approx(-0.8 * v).epsilon(1e-6));
  CHECK(fd_derivative(g, p, {0}, 1, 1e-4, 1e-4) == doctest::Approx(-v).epsilon(1e-6));
}

#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "parsio/random.hpp"
#include "parsio/spaces.hpp"
#include "parsio/spectral.hpp"
#include "parsio/surface_io.hpp"

using namespace parsio;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridField mode(const ParabolicGrid& g, int kx, int kt, double phase = 0.0) {
  return sample(g, [&](const SpaceTimePoint& p) {
    return std::cos(kTwoPi * (kx * p.x[0] / g.period(0) + kt * p.t / g.period(1)) + phase);
  });
}

GridField random_field(const ParabolicGrid& g, std::uint64_t seed) {
  Rng rng(seed);
  GridField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.normal();
  return f;
}

// Coefficients by a naive O(N^2) DFT, then ||I_p f||_2 by Parseval.
double ip_norm_oracle(const GridField& f) {
  const auto& g = f.grid();
  const int nx = g.count(0), nt = g.count(1);
  double sum = 0.0;
  for (int a = 0; a < nx; ++a) {
    for (int b = 0; b < nt; ++b) {
      if (a == 0 && b == 0) continue;
      std::complex<double> c = 0.0;
      for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nt; ++j) {
          const double arg = -kTwoPi * (double(a) * i / nx + double(b) * j / nt);
          c += f[static_cast<std::size_t>(i) * nt + j] * std::polar(1.0, arg);
        }
      }
      const double xi = signed_mode(a, nx) / g.period(0);
      const double tau = signed_mode(b, nt) / g.period(1);
      sum += std::norm(c) / (pnorm(xi * xi, tau) * pnorm(xi * xi, tau));
    }
  }
  return std::sqrt(sum * g.cell_volume() / g.size());
}

}  // namespace

TEST_CASE("I_p on single modes and constants") {
  const auto g = ParabolicGrid::box(2, 1.0, 1.0 / 8);
  const auto f = mode(g, 2, 3, 0.4);
  const auto out = ip_apply(f);
  const double xi = 2 / g.period(0), tau = 3 / g.period(1);
  const double r = pnorm(xi * xi, tau);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(out[i] == doctest::Approx(f[i] / r).epsilon(1e-12).scale(1.0 / r));
  GridField c(g);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 2.5;
  CHECK(ip_apply(c).max_abs() < 1e-14);
}

TEST_CASE("I_p norm against a mode-by-mode oracle") {
  const auto g = ParabolicGrid::box(2, 0.5, 1.0 / 8);
  const auto f = random_field(g, 4);
  CHECK(ip_apply(f).l2_norm() == doctest::Approx(ip_norm_oracle(f)).epsilon(1e-10));
}

TEST_CASE("D_n") {
  const auto g = ParabolicGrid::box(2, 1.0, 1.0 / 8);
  const auto f = mode(g, 1, 2);
  const auto dn = dn_apply_checked(f);
  CHECK(dn.imag_residual <= 1e-12);
  const double xi = 1 / g.period(0), tau = 2 / g.period(1);
  const double c = -kTwoPi * tau / pnorm(xi * xi, tau);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto p = g.point(i);
    const double s = std::sin(kTwoPi * (xi * p.x[0] + tau * p.t));
    CHECK(dn.field[i] == doctest::Approx(c * s).epsilon(1e-12).scale(std::abs(c)));
  }
  CHECK(dn_apply(mode(g, 3, 0)).max_abs() < 1e-13);

  const auto r = random_field(g, 6);
  const auto a = dn_apply_checked(r);
  CHECK(a.imag_residual <= 1e-12);
  const auto comp = ip_apply(spectral_derivative(r, 1));
  double err = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) err = std::max(err, std::abs(comp[i] - a.field[i]));
  CHECK(err <= 1e-12 * a.field.max_abs());
}

TEST_CASE("Plancherel and the I_p ring bound") {
  const auto g = ParabolicGrid::box(2, 1.0, 1.0 / 16);
  const auto f = random_field(g, 12);
  CHECK(fourier_l2_norm(f) == doctest::Approx(f.l2_norm()).epsilon(1e-10));

  // Keep only modes in the ring R <= pnorm < 2R.
  const double R = 4.0;
  const auto ring = apply_multiplier(f, [&](const std::array<double, kMaxSpatialDims + 1>& q) {
    const double r = pnorm(q[0] * q[0], q[1]);
    return std::complex<double>(r >= R && r < 2 * R ? 1.0 : 0.0);
  }, true).field;
  const double nf = ring.l2_norm(), ni = ip_apply(ring).l2_norm();
  REQUIRE(nf > 0.0);
  CHECK(ni >= nf / (2 * R));
  CHECK(ni <= 2 * nf / R);
}

TEST_CASE("bmo_norm") {
  const auto g = ParabolicGrid::box(2, 1.0, 1.0 / 8);  // 16 x 64
  GridField c(g);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -3.0;
  CHECK(bmo_norm(c) == 0.0);

  const auto f = random_field(g, 1);
  const double b = bmo_norm(f);
  CHECK(bmo_norm(-2.5 * f) == doctest::Approx(2.5 * b).epsilon(1e-14));
  CHECK(b <= 2 * f.max_abs());

  GridField chk(g);
  for (std::size_t i = 0; i < chk.size(); ++i) {
    const auto ix = g.unravel(i);
    chk[i] = ((ix[0] + ix[1]) % 2) ? 1.0 : -1.0;
  }
  CHECK(bmo_norm(chk) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bmo_norm equals an exhaustive scan on 16 x 16") {
  const ParabolicGrid g(2, 0.25, {16, 16});
  const auto f = random_field(g, 77);
  double best = 0.0;
  for (int s = 2; s <= 16 && s * s <= 16; s *= 2) {
    for (int i0 = 0; i0 + s <= 16; ++i0) {
      for (int j0 = 0; j0 + s * s <= 16; ++j0) {
        double mean = 0.0;
        for (int i = i0; i < i0 + s; ++i)
          for (int j = j0; j < j0 + s * s; ++j) mean += f[i * 16 + j];
        mean /= s * s * s;
        double osc = 0.0;
        for (int i = i0; i < i0 + s; ++i)
          for (int j = j0; j < j0 + s * s; ++j) osc += std::abs(f[i * 16 + j] - mean);
        best = std::max(best, osc / (s * s * s));
      }
    }
  }
  CHECK(bmo_norm(f) == doctest::Approx(best).epsilon(1e-13));
}

TEST_CASE("comm_norm and generated surfaces") {
  const ParabolicGrid g(2, 1.0 / 8, {16, 64});  // its own design grid
  CHECK(comm_norm(zero_surface(g)) == 0.0);
  CHECK(gen_surface(3, g, 0.0).A.max_abs() == 0.0);

  const auto lin = linear_surface(g, 1.7);
  CHECK(comm_norm(lin) == doctest::Approx(1.7).epsilon(1e-2));
  CHECK(lin.dn.max_abs() < 1e-12);

  const auto s = gen_surface(5, g, 1.0);
  CHECK(comm_norm(s) == doctest::Approx(1.0).epsilon(1e-2));
  const auto s2 = gen_surface(5, g, 1.0);
  CHECK(s.A.values() == s2.A.values());
  CHECK(s.dn.values() == s2.dn.values());
  CHECK(comm_norm(scaled(s, 3.0)) == doctest::Approx(3.0 * comm_norm(s)).epsilon(1e-12));
  CHECK(comm_norm(scaled(s, -0.5)) == doctest::Approx(0.5 * comm_norm(s)).epsilon(1e-12));

  const auto d3 = gen_surface(9, ParabolicGrid(3, 1.0 / 8, {8, 8, 64}), 2.0);
  CHECK(comm_norm(d3) == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("surface derivative fields agree with spectral differentiation") {
  const auto g = ParabolicGrid::box(2, 1.0, 1.0 / 16);
  const auto s = gen_surface(21, g, 1.0);
  const auto dx = spectral_derivative(s.A, 0);
  const auto dt = spectral_derivative(s.A, 1);
  const auto dn = dn_apply(s.A);
  for (std::size_t i = 0; i < s.A.size(); ++i) {
    CHECK(std::abs(dx[i] - s.grad[0][i]) <= 1e-8);
    CHECK(std::abs(dt[i] - s.dt[i]) <= 1e-8 * std::max(1.0, s.dt.max_abs()));
    CHECK(std::abs(dn[i] - s.dn[i]) <= 1e-8);
  }
  CHECK(surface_value(s, g.point(123)) == doctest::Approx(s.A[123]).epsilon(1e-13));
}

TEST_CASE("Lip(1,1/2) sanity bound") {
  const auto g = ParabolicGrid::box(2, 1.0, 1.0 / 16);
  const auto s = gen_surface(2, g, 1.0);
  const double proxy = s.grad[0].max_abs() + std::sqrt(s.dt.max_abs());
  Rng rng(1);
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const auto i = static_cast<std::size_t>(rng.next() % g.size());
    const auto j = static_cast<std::size_t>(rng.next() % g.size());
    if (i == j) continue;
    const auto p = g.point(i), q = g.point(j);
    const double den = std::abs(p.x[0] - q.x[0]) + std::sqrt(std::abs(p.t - q.t));
    worst = std::max(worst, std::abs(s.A[i] - s.A[j]) / den);
  }
  CHECK(worst <= 10 * proxy);
}

TEST_CASE("surface CSV round trip is exact") {
  const auto g = ParabolicGrid::box(2, 0.5, 1.0 / 8);
  const auto s = gen_surface(4, g, 0.8);
  std::stringstream ss;
  write_surface_csv(s, ss);
  const auto r = read_surface_csv(ss);
  CHECK(r.grid() == g);
  CHECK(r.A.values() == s.A.values());
  CHECK(r.grad[0].values() == s.grad[0].values());
  CHECK(r.dt.values() == s.dt.values());
  CHECK(r.dn.values() == s.dn.values());
  CHECK(r.M == s.M);
}

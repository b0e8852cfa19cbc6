#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "parsio/harmonics.hpp"
#include "parsio/random.hpp"

using namespace parsio;

namespace {

constexpr double kPi = std::numbers::pi;

SpaceTimePoint sphere_point(Rng& rng, int n) {
  SpaceTimePoint p;
  p.spatial_dims = n - 1;
  double s = 0.0;
  for (int a = 0; a < n - 1; ++a) {
    p.x[a] = rng.normal();
    s += p.x[a] * p.x[a];
  }
  p.t = rng.normal();
  s = std::sqrt(s + p.t * p.t);
  for (int a = 0; a < n - 1; ++a) p.x[a] /= s;
  p.t /= s;
  return p;
}

double sine(const std::vector<double>& b, const SpaceTimePoint& w) {
  double v = 0.0;
  for (std::size_t a = 0; a < b.size(); ++a) v += w.x[a] * b[a];
  return std::sin(v);
}

}  // namespace

TEST_CASE("dimensions and explicit values") {
  CHECK(harmonic_dimension(2, 0) == 1);
  for (int k = 1; k <= 32; ++k) {
    CHECK(harmonic_dimension(2, k) == 2);
    CHECK(harmonic_dimension(3, k) == 2 * k + 1);
    CHECK(harmonic_dimension(3, k) <= 3 * k);
  }
  const SpaceTimePoint w({0.6, 0.0}, 0.8);
  CHECK(harmonic_value(3, 0, 0, w) == doctest::Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-15));
  const SpaceTimePoint c({std::cos(0.3)}, std::sin(0.3));
  CHECK(harmonic_value(2, 0, 0, c) == doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-15));
  CHECK(harmonic_value(2, 5, 0, c) == doctest::Approx(std::cos(1.5) / std::sqrt(kPi)).epsilon(1e-14));
  CHECK(harmonic_value(2, 5, 1, c) == doctest::Approx(std::sin(1.5) / std::sqrt(kPi)).epsilon(1e-14));
}

TEST_CASE("n = 3 basis against std::sph_legendre") {
  Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    const auto w = sphere_point(rng, 3);
    const double th = std::acos(w.t), ph = std::atan2(w.x[1], w.x[0]);
    for (int k = 0; k <= 12; ++k) {
      for (int j = 0; j < 2 * k + 1; ++j) {
        const int m = j - k, am = std::abs(m);
        // sph_legendre carries the Condon-Shortley phase (-1)^m.
        const double p = (am % 2 ? -1.0 : 1.0) * std::sph_legendre(k, am, th);
        const double ref = m == 0 ? p : std::sqrt(2.0) * p * (m > 0 ? std::cos(am * ph) : std::sin(am * ph));
        CHECK(harmonic_value(3, k, j, w) == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
      }
    }
  }
}

TEST_CASE("orthonormality") {
  CHECK(gram_error(2, 32, default_harmonic_resolution(2, 32, 0.0)) <= 1e-10);
  CHECK(gram_error(3, 32, default_harmonic_resolution(3, 32, 0.0)) <= 1e-10);
}

TEST_CASE("expansion of sin(w'.b)") {
  for (int zero_n : {2, 3}) {
    const auto e = expand_sine(std::vector<double>(zero_n - 1, 0.0), zero_n, 32);
    CHECK(e.coefficient_energy() == 0.0);
  }
  Rng rng(7);
  const std::vector<std::vector<double>> bs{{2.0}, {1.2, -1.6}};
  for (const auto& b : bs) {
    const int n = static_cast<int>(b.size()) + 1;
    const auto e = expand_sine(b, n, 32);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto w = sphere_point(rng, n);
      worst = std::max(worst, std::abs(e.evaluate(w) - sine(b, w)));
    }
    CHECK(worst <= 1e-8);
    for (int k = 0; k <= 32; ++k) {
      for (int j = 0; j < harmonic_dimension(n, k); ++j) {
        if (!harmonic_is_odd(n, k, j)) CHECK(std::abs(e.coeffs[k][j]) <= 1e-12);
      }
    }
    const double energy = sine_energy(b, n, e.resolution);
    CHECK(e.coefficient_energy() <= energy + 1e-12);
    CHECK(energy - e.coefficient_energy() <= 1e-8);
  }
  CHECK_THROWS_AS(expand_sine({1.0}, 2, 32, 64), std::invalid_argument);
  CHECK_THROWS_AS(expand_sine({1.0, 0.0}, 3, 32, 32), std::invalid_argument);
}

TEST_CASE("circle coefficients are Bessel values") {
  // sin(b cos a) = 2 sum_{k odd} (-1)^{(k-1)/2} J_k(b) cos(k a).
  for (double b : {0.5, 1.0, 3.0, 8.0}) {
    const auto e = expand_sine({b}, 2, 40);
    for (int k = 1; k <= 40; k += 2) {
      const double ref = std::sqrt(kPi) * 2.0 * ((k / 2) % 2 ? -1.0 : 1.0) * std::cyl_bessel_j(k, b);
      CHECK(e.coeffs[k][0] == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
      CHECK(std::abs(e.coeffs[k][1]) <= 1e-13);
    }
  }
}

TEST_CASE("coefficient decay") {
  const double M = 1.0;
  std::vector<HarmonicExpansion> sweep;
  for (const auto& b : b_sweep(2, M)) sweep.push_back(expand_sine(b, 2, 32));
  const auto rep = coeff_decay_report(sweep, {2, 3}, M, 2, 32);
  for (const auto& e : rep.entries) {
    CHECK(std::isfinite(e.sup));
    CHECK(e.monotone);
  }
  CHECK(rep.pass);

  std::vector<HarmonicExpansion> z{expand_sine({0.0}, 2, 32)};
  for (const auto& e : coeff_decay_report(z, {2}, 1.0).entries)
    for (double v : e.profile) CHECK(v == 0.0);

  // Doubling M at fixed k: growth within the M^m envelope for m = 3.
  for (int n : {2, 3}) {
    auto sup_at = [&](double Mv, int k) {
      double s = 0.0;
      for (const auto& b : b_sweep(n, Mv)) {
        const auto e = expand_sine(b, n, 32);
        for (double a : e.coeffs[k]) s = std::max(s, std::abs(a));
      }
      return s;
    };
    for (int k : {5, 9}) CHECK(sup_at(2.0, k) <= std::pow(2.0, k) * sup_at(1.0, k));
    CHECK(sup_at(2.0, 3) <= 8.0 * sup_at(1.0, 3));
  }

  // Super-polynomial: the fitted slope of log|a_k| at |b| = 1 is below -m.
  const auto e = expand_sine({1.0}, 2, 32);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int k = 5; k <= 11; k += 2) {
    const double x = std::log(k), y = std::log(std::abs(e.coeffs[k][0]));
    sx += x; sy += y; sxx += x * x; sxy += x * y; ++cnt;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  CHECK(slope <= -3.0);
}

TEST_CASE("sup norms of the basis") {
  const auto r2 = y_bounds_check(2, 32);
  CHECK(r2.dimensions_ok);
  for (int k = 1; k <= 32; ++k) CHECK(r2.sup_Y[k] == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-6));
  CHECK(r2.pass);
  const auto r3 = y_bounds_check(3, 32);
  CHECK(r3.dimensions_ok);
  CHECK(r3.sup_Y[0] == doctest::Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-12));
  CHECK(r3.pass);
  // Zonal harmonic: sup |Y_{k,0}| = sqrt((2k + 1) / 4 pi), attained at the pole.
  for (int k = 1; k <= 32; ++k) CHECK(r3.sup_Y[k] == doctest::Approx(std::sqrt((2 * k + 1) / (4 * kPi))).epsilon(1e-9));
}

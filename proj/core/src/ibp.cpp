#include "parsio/ibp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "parsio/parallel.hpp"
#include "parsio/quadrature.hpp"
#include "parsio/spectral.hpp"

namespace parsio {

double htilde_compute(const Kernel& H, const SpaceTimePoint& p) {
  if (p.is_zero()) throw std::invalid_argument("htilde_compute: p = 0");
  if (H.is_zero()) return 0.0;
  const int d = H.d();
  // In s = log r: int_0^inf e^{(d-1)s} H(dilate(p, e^s)) ds; |integrand| <~ C rho^{-d} e^{-s}.
  auto g = [&](double s) { return std::exp((d - 1) * s) * H(dilate(p, std::exp(s))); };
  double acc = 0.0, envelope = 0.0;
  for (int k = 0; k < 80; ++k) {
    acc += integrate_adaptive(g, k, k + 1.0, 1e-13, 12);
    for (double s : {k + 0.5, k + 1.0}) envelope = std::max(envelope, std::abs(g(s)) * std::exp(s));
    const double tail = 2.0 * envelope * std::exp(-(k + 1.0));
    if (tail < 1e-10 * std::abs(acc) || (envelope == 0.0 && k >= 2)) break;
  }
  return acc;
}

struct RadialProfileKernel::Table {
  double u_lo = 0.0, u_hi = 0.0;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

RadialProfileKernel::RadialProfileKernel(Kernel H, double rho_lo, double rho_hi) : H_(std::move(H)) {
  if (!(rho_lo > 0.0) || !(rho_hi > rho_lo)) {
    throw std::invalid_argument("RadialProfileKernel: need 0 < rho_lo < rho_hi");
  }
  if (!H_.separable() || H_.is_zero()) return;
  const auto m = H_.separable()->modulation;
  const double step = 1.0 / 128.0;
  const double u_lo = std::log(rho_lo) - 1.0;
  const int count = static_cast<int>(std::ceil((std::log(rho_hi) + 1.0 - u_lo) / step)) + 1;
  std::vector<double> v(count);
  parallel_for(v.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double u = u_lo + i * step;
      auto f = [&](double s) { return std::exp(-s) * m(u + s); };
      double acc = 0.0;
      for (int k = 0; k < 48; k += 4) acc += integrate_adaptive(f, k, k + 4.0, 1e-14, 12);
      v[i] = acc;
    }
  });
  auto t = std::make_shared<Table>(Table{
      u_lo, u_lo + (count - 1) * step,
      boost::math::interpolators::cardinal_cubic_b_spline<double>(v.begin(), v.end(), u_lo, step)});
  table_ = std::move(t);
}

double RadialProfileKernel::modulation(double u) const {
  if (!table_) throw std::logic_error("RadialProfileKernel: no tabulated modulation");
  return table_->spline(u);
}

double RadialProfileKernel::htilde(const SpaceTimePoint& p) const {
  if (H_.is_zero()) return 0.0;
  const double rho = pnorm(p);
  if (rho == 0.0) throw std::invalid_argument("RadialProfileKernel: p = 0");
  const double u = std::log(rho);
  if (table_ && u >= table_->u_lo + 1.0 && u <= table_->u_hi - 1.0) {
    const SpaceTimePoint omega = dilate(p, 1.0 / rho);
    return H_.separable()->angular(omega) * table_->spline(u) * std::pow(rho, -H_.d());
  }
  return htilde_compute(H_, p);
}

double RadialProfileKernel::h0(const SpaceTimePoint& p, int axis) const {
  return p.x[axis] / pnorm(p) * htilde(p);
}

double RadialProfileKernel::j_kernel(const SpaceTimePoint& p) const {
  return 2.0 * p.t / pnorm(p) * htilde(p);
}

Kernel RadialProfileKernel::as_kernel() const {
  auto self = std::make_shared<RadialProfileKernel>(*this);
  Kernel k(H_.name() + "~", H_.n(), false, H_.parity(), 1, [self](const SpaceTimePoint& p) {
    return pnorm(p) == 0.0 ? std::numeric_limits<double>::infinity() : self->htilde(p);
  });
  if (H_.is_zero()) k.mark_zero();
  return k;
}

namespace {

double sup_over(const GridField& f, const std::vector<std::size_t>& nodes) {
  double m = 0.0;
  for (auto i : nodes) m = std::max(m, std::abs(f[i]));
  return m;
}

double mean_abs_over(const GridField& f, const std::vector<std::size_t>& nodes) {
  std::vector<double> v;
  v.reserve(nodes.size());
  for (auto i : nodes) v.push_back(std::abs(f[i]));
  return pairwise_sum(v.data(), v.size()) / static_cast<double>(nodes.size());
}

}  // namespace

Decomposition decompose_commutator(const RadialProfileKernel& Ht, const Surface& s, const Ball& B,
                                   double eps) {
  const Kernel& H = Ht.base();
  if (H.parity() != Parity::even_in_space) {
    throw std::invalid_argument("decompose_commutator: kernel '" + H.name() + "' must be even in space");
  }
  if (H.ambient() || H.n() != s.grid().n()) {
    throw std::invalid_argument("decompose_commutator: kernel does not match the surface grid");
  }
  if (!s.periodic) throw std::invalid_argument("decompose_commutator: surface must be periodic");
  if (s.dt.size() != s.A.size()) throw std::invalid_argument("decompose_commutator: missing d_t A");
  const auto& grid = s.grid();
  const auto tr = TruncationSpec::sharp(eps);
  const GridField eta = t1_bump_field(grid, B);
  const auto nodes = ball_points(grid, B.center, B.radius);
  if (nodes.empty()) throw std::invalid_argument("decompose_commutator: the ball contains no node");

  const auto eval = H.evaluator();
  ConvolutionOperator S(grid, [&](const SpaceTimePoint& p, double rho) { return eval(p) / rho; }, tr);
  GridField Aeta = s.A;
  for (std::size_t i = 0; i < Aeta.size(); ++i) Aeta[i] *= eta[i];
  GridField C = S.apply(eta);
  const GridField SAeta = S.apply(Aeta);
  for (std::size_t i = 0; i < C.size(); ++i) C[i] = s.A[i] * C[i] - SAeta[i];

  GridField I(grid);
  for (int a = 0; a < grid.n() - 1; ++a) {
    ConvolutionOperator S0(grid, [&](const SpaceTimePoint& p, double) { return Ht.h0(p, a); }, tr);
    I += S0.apply(s.grad[a]);
  }
  ConvolutionOperator J(grid, [&](const SpaceTimePoint& p, double) { return Ht.j_kernel(p); }, tr);
  GridField II = J.apply(s.dt);

  Decomposition out{eps, C, I, II};
  GridField res = C - I - II;
  out.sup_residual = sup_over(res, nodes);
  out.sup_C = sup_over(C, nodes);
  out.sup_I = sup_over(I, nodes);
  out.sup_II = sup_over(II, nodes);
  out.mean_I = mean_abs_over(I, nodes);
  out.mean_II = mean_abs_over(II, nodes);
  out.nodes = nodes.size();
  return out;
}

double ibp_boundary_term(const RadialProfileKernel& Ht, const Surface& s, const SpaceTimePoint& x,
                         double eps, int angular_count) {
  const int d = s.grid().n() + 1;
  const auto pq = polar_quadrature(s.grid().n(), eps, 2.0 * eps, 2, angular_count);
  const double ax = surface_value(s, x);
  std::vector<double> v(pq.directions.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto& w = pq.directions[j];
    const auto y = dilate(w, eps);
    v[j] = (ax - surface_value(s, x - y)) * std::pow(eps, d - 1) * Ht.htilde(y) * (1.0 + w.t * w.t) *
           pq.angular_weights[j];
  }
  return pairwise_sum(v.data(), v.size());
}

std::vector<Complex> jeps_symbol(const RadialProfileKernel& Ht, const ParabolicGrid& grid,
                                 double eps) {
  ConvolutionOperator J(grid, [&](const SpaceTimePoint& p, double) { return Ht.j_kernel(p); },
                        TruncationSpec::sharp(eps));
  return J.symbol();
}

double jeps_weighted_sup(const std::vector<Complex>& symbol, const ParabolicGrid& grid) {
  const int n = grid.n();
  double m = 0.0;
  for (std::size_t b = 1; b < symbol.size(); ++b) {
    if (is_nyquist(grid, b)) continue;
    const auto f = frequency(grid, b);
    double sq = 0.0;
    for (int a = 0; a < n - 1; ++a) sq += f[a] * f[a];
    m = std::max(m, pnorm(sq, f[n - 1]) * std::abs(symbol[b]));
  }
  return m;
}

JFourierReport jeps_fourier_check(const RadialProfileKernel& Ht, const std::vector<double>& eps,
                                  const ParabolicGrid& grid, double threshold) {
  if (eps.empty()) throw std::invalid_argument("jeps_fourier_check: empty epsilon list");
  JFourierReport r;
  r.epsilon = eps;
  r.threshold = threshold;
  for (double e : eps) r.sup.push_back(jeps_weighted_sup(jeps_symbol(Ht, grid, e), grid));
  const auto [lo, hi] = std::minmax_element(r.sup.begin(), r.sup.end());
  r.ratio = *lo > 0.0 ? *hi / *lo : (*hi == 0.0 ? 1.0 : INFINITY);
  r.pass = std::isfinite(r.ratio) && r.ratio <= threshold;
  return r;
}

}  // namespace parsio

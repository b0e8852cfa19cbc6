#pragma once

#include <memory>
#include <string>
#include <vector>

#include "parsio/kernels.hpp"
#include "parsio/operators.hpp"
#include "parsio/spaces.hpp"

namespace parsio {

/// H~(p) = int_1^inf r^d H(dilate(p, r)) dr / r^2 by adaptive quadrature in
/// log r, stopped once the C-Z tail bound falls below 1e-10 of the sum.
double htilde_compute(const Kernel& H, const SpaceTimePoint& p);

/// H~ together with the kernels built from it:
///   H0(x) = x / ||x|| H~(x)            (vector, odd in x)
///   J(x)  = 2 t / ||x|| H~(x)          (scalar; the factor 2 of dt (rho^2 omega_n))
/// For separable H = Omega m(log rho) rho^{-d}, H~ = Omega m~(log rho) rho^{-d}
/// with m~(u) = int_0^inf e^{-s} m(u + s) ds tabulated on [log rho_lo - 1,
/// log rho_hi + 1] and interpolated by a cubic B-spline; other kernels (or
/// radii outside the table) fall back to htilde_compute.
class RadialProfileKernel {
 public:
  RadialProfileKernel(Kernel H, double rho_lo, double rho_hi);

  const Kernel& base() const { return H_; }
  double htilde(const SpaceTimePoint& p) const;
  double h0(const SpaceTimePoint& p, int axis) const;
  double j_kernel(const SpaceTimePoint& p) const;
  /// m~ at u (tabulated range only for separable kernels).
  double modulation(double u) const;
  bool tabulated() const { return table_ != nullptr; }

  /// H~ as a Kernel of regularity 1 with the base parity; constants not set.
  Kernel as_kernel() const;

 private:
  struct Table;
  Kernel H_;
  std::shared_ptr<const Table> table_;
};

struct Decomposition {
  double epsilon = 0.0;
  GridField C;         ///< C_eps eta_B
  GridField I;         ///< S_eps(grad A) with kernel H0
  GridField II;        ///< J_eps * d_t A
  double sup_residual = 0.0;  ///< sup over B of |C - I - II|
  double sup_C = 0.0;
  double sup_I = 0.0;
  double sup_II = 0.0;
  double mean_I = 0.0;   ///< mean over B of |I|
  double mean_II = 0.0;
  std::size_t nodes = 0;
};

/// All three fields by periodic FFT convolution on the surface's torus with
/// a sharp truncation at eps. C_eps eta = A (S * eta) - S * (A eta), where S
/// has kernel H / ||.||. Requires H even in space and a periodic surface.
Decomposition decompose_commutator(const RadialProfileKernel& Ht, const Surface& s, const Ball& B,
                                   double eps);

/// The sphere term of the integration by parts at rho = eps,
///   int_S (A(x) - A(x - eps w)) eps^{d-1} H~(eps w) (1 + w_n^2) dsigma(w),
/// from the surface's analytic modes. C - I - II minus this is independent of
/// eps below the localization radius.
double ibp_boundary_term(const RadialProfileKernel& Ht, const Surface& s, const SpaceTimePoint& x,
                         double eps, int angular_count = 2048);

struct JFourierReport {
  std::vector<double> epsilon;
  std::vector<double> sup;  ///< sup over nonzero modes of pnorm(xi, tau) |J_eps^(xi, tau)|
  double ratio = 0.0;       ///< max / min of `sup`
  double threshold = 4.0;
  bool pass = false;
};

/// Discrete symbol dV * DFT of the truncated J table on `grid`.
std::vector<Complex> jeps_symbol(const RadialProfileKernel& Ht, const ParabolicGrid& grid,
                                 double eps);
/// sup over non-Nyquist nonzero modes of pnorm(xi, tau) |symbol|.
double jeps_weighted_sup(const std::vector<Complex>& symbol, const ParabolicGrid& grid);
JFourierReport jeps_fourier_check(const RadialProfileKernel& Ht, const std::vector<double>& eps,
                                  const ParabolicGrid& grid, double threshold = 4.0);

}  // namespace parsio

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parsio/geometry.hpp"

namespace parsio {

enum class Parity { odd_in_space, even_in_space, none };

const char* to_string(Parity p);

/// Reference constants C_{j,k} of the C-Z(N) estimates, keyed by (j, k).
using CZConstants = std::map<std::pair<int, int>, double>;

/// K(p) = Omega(p / ||p||) * m(log ||p||) * ||p||^{-d}, where p / ||p|| is
/// the parabolic projection onto the unit sphere.
struct SeparableForm {
  std::function<double(const SpaceTimePoint&)> angular;
  std::function<double(double)> modulation;
};

/// A singular kernel on R^n (n-dimensional space-time) or, when `ambient`,
/// on R^{n+1} with the distinguished coordinate x0 stored first.
class Kernel {
 public:
  using Evaluator = std::function<double(const SpaceTimePoint&)>;

  Kernel(std::string name, int n, bool ambient, Parity parity, int regularity,
         Evaluator evaluator);

  double operator()(const SpaceTimePoint& p) const { return evaluator_(p); }

  const std::string& name() const { return name_; }
  /// Space-time dimension n of the base space (the graph parameter space).
  int n() const { return n_; }
  int d() const { return homogeneous_dimension(n_); }
  bool ambient() const { return ambient_; }
  /// Number of spatial coordinates of the kernel's own domain.
  int spatial_dims() const { return ambient_ ? n_ : n_ - 1; }
  Parity parity() const { return parity_; }
  int regularity() const { return regularity_; }
  bool is_zero() const { return zero_; }

  const CZConstants& constants() const { return constants_; }
  void set_constants(CZConstants c) { constants_ = std::move(c); }

  const std::optional<SeparableForm>& separable() const { return separable_; }
  void set_separable(SeparableForm form) { separable_ = std::move(form); }
  void mark_zero() { zero_ = true; }

  const Evaluator& evaluator() const { return evaluator_; }

 private:
  std::string name_;
  int n_;
  bool ambient_;
  Parity parity_;
  int regularity_;
  Evaluator evaluator_;
  CZConstants constants_;
  std::optional<SeparableForm> separable_;
  bool zero_ = false;
};

/// Builds Omega(p/||p||) m(log||p||) ||p||^{-d}. With m == 1 the kernel is
/// parabolically homogeneous of degree -d.
Kernel make_kernel(std::string name, int n, bool ambient, Parity parity, int regularity,
                   std::function<double(const SpaceTimePoint&)> angular,
                   std::function<double(double)> modulation);

Kernel zero_kernel(int n, bool ambient);

/// Pointwise product k(p) * g(p); drops parity/constant metadata only if asked.
Kernel multiply(const Kernel& k, std::function<double(const SpaceTimePoint&)> g,
                std::string name);

/// Canonical kernels, calibrated so that cz_check passes at their regularity:
///   K1 = x0 ||X,t||^{-d-1}                (ambient, homogeneous, odd)
///   K2 = K1 sin(log||X,t||)                (ambient, nonhomogeneous, odd)
///   K3 = (x0 + x1) ||.||^{-d-1}/(1+log^2) (ambient, odd, mixed parity in x0)
///   Krough = sign(w0)|w0|^{3/2} ||.||^{-d} (ambient, odd, only C^1 angularly)
///   H1 = x1 ||x,t||^{-d-1}                 (odd)
///   H2 = ||x,t||^{-d} cos(log||x,t||)      (even)
///   H3 = H1 sin(log||x,t||)                (odd, nonhomogeneous)
///   H4 = ||x,t||^{-d} / (1 + log^2||x,t||) (even, nonhomogeneous)
///   zero, zero_ambient
Kernel canonical_kernel(const std::string& name, int n);
std::vector<std::string> canonical_kernel_names();

/// Random probes p = dilate(omega, r) with omega uniform on the Euclidean
/// unit sphere of the kernel's domain and r log-uniform in [r_lo, r_hi].
std::vector<SpaceTimePoint> cz_probes(int spatial_dims, std::size_t count, double r_lo,
                                      double r_hi, std::uint64_t seed);

/// Central finite-difference estimate of d^alpha_X d^k_t K at p with
/// spatial step dx and time step dt.
double fd_derivative(const Kernel& k, const SpaceTimePoint& p, const std::vector<int>& alpha,
                     int time_order, double dx, double dt);

struct CZEntry {
  int j = 0;
  int k = 0;
  double measured = 0.0;  ///< sup over probes of ||p||^{d+j+2k} |grad^j d_t^k K|
  double declared = 0.0;
  bool pass = false;
};

struct CZReport {
  std::vector<CZEntry> entries;
  double parity_residual = 0.0;  ///< sup ||p||^d |K(p) -/+ K(reflect p)|
  bool parity_ok = true;
  double slack = 2.0;
  bool pass = false;
  std::optional<SpaceTimePoint> offending_probe;
  std::string note;

  const CZEntry* find(int j, int k) const;
};

/// Measured normalized derivative sups for all 0 <= j + k <= N, without
/// comparison against declared constants.
CZConstants measure_cz_constants(const Kernel& k, int N, const std::vector<SpaceTimePoint>& probes,
                                 std::optional<SpaceTimePoint>* offending = nullptr);

/// Compares measured sups against the kernel's declared constants times `slack`.
/// Finite-difference steps scale with the probe: dx = 1e-3 ||p||, dt = 1e-6 ||p||^2.
CZReport cz_check(const Kernel& k, int N, const std::vector<SpaceTimePoint>& probes,
                  double slack = 2.0);

/// Declared constants obtained from a reference probe set covering one
/// period of log-radius modulation, r in [e^{-pi}, e^{pi}].
CZConstants calibrate_cz_constants(const Kernel& k, int N);

/// Spatial even/odd parts: even(p) = (k(p) + k(-x, t)) / 2, odd = (k(p) - k(-x, t)) / 2.
std::pair<Kernel, Kernel> parity_split(const Kernel& k);

/// sup over probes of ||p||^d |k(p) -/+ k(reflect p)| for the declared parity
/// (0 for Parity::none).
double parity_residual(const Kernel& k, const std::vector<SpaceTimePoint>& probes);

}  // namespace parsio

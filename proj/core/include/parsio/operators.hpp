#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parsio/kernels.hpp"
#include "parsio/spaces.hpp"
#include "parsio/spectral.hpp"

namespace parsio {

/// phi(rho) = c exp(-1 / ((rho - 1/4)(1 - rho))) on (1/4, 1), with c fixed by
/// int_0^inf phi(rho) d rho / rho = 1.
double phi_bump(double rho);
double phi_bump_constant();

/// |int_0^inf phi(rho) d rho / rho - 1| by composite Gauss-Legendre on (1/4, 1).
double phi_normalization_error(const std::function<double(double)>& phi);

enum class TruncationKind { sharp, smooth };

/// Radial truncation weight w(rho) multiplying a kernel.
///   sharp:  1 on eps < rho (<= cap when a cap is set)
///   smooth: sum over log-uniform layers delta in [eps, cap] of
///           phi(rho / delta) d(log delta), a discretization of
///           int_eps^cap phi(rho / delta) d delta / delta.
struct TruncationSpec {
  TruncationKind kind = TruncationKind::sharp;
  double epsilon = 1.0;
  std::optional<double> cap;
  int layers_per_decade = 32;
  std::function<double(double)> phi;  ///< smooth only; defaults to phi_bump

  static TruncationSpec sharp(double epsilon, std::optional<double> cap = std::nullopt);
  static TruncationSpec smooth(double epsilon, double cap, int layers_per_decade = 32,
                               std::function<double(double)> phi = {});

  /// Throws std::invalid_argument on eps <= 0, cap <= eps, too few layers, or a
  /// phi whose normalization is off by more than 1e-6.
  void validate() const;
  double weight(double rho) const;
  /// Largest rho with nonzero weight (infinity for an uncapped sharp cut).
  double support_radius() const;
};

enum class Boundary { periodic, open };

/// Kernel value k(x_i, x_j) for output node i and input node j, given the
/// displacement diff = x_i - x_j (minimum image when periodic) and
/// rho = pnorm(diff). The truncation weight is applied separately.
using PairKernel =
    std::function<double(std::size_t i, std::size_t j, const SpaceTimePoint& diff, double rho)>;

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual const ParabolicGrid& grid() const = 0;
  virtual GridField apply(const GridField& f) const = 0;
  /// L^2 adjoint.
  virtual GridField apply_transpose(const GridField& g) const = 0;
};

class DenseOperator;

/// (T f)(x_i) = sum_j k(x_i, x_j) w(rho_ij) in_j f(x_j) dV over nodes j != i.
/// Periodic operators use minimum-image displacements and drop the unpaired
/// Nyquist offsets so the summation window is symmetric.
class IntegralOperator : public LinearOperator {
 public:
  IntegralOperator(ParabolicGrid grid, PairKernel kernel, TruncationSpec truncation,
                   Boundary boundary, std::vector<double> input_weight = {},
                   std::string name = "integral");

  const ParabolicGrid& grid() const override { return grid_; }
  const std::string& name() const { return name_; }
  const TruncationSpec& truncation() const { return truncation_; }
  Boundary boundary() const { return boundary_; }

  /// Offset-table summation, parallel over outputs with a fixed per-output order.
  GridField apply(const GridField& f) const override;
  GridField apply_transpose(const GridField& g) const override;

  /// Serial double loop over all (i, j) pairs; the reference semantics.
  GridField apply_reference(const GridField& f) const;
  GridField apply_transpose_reference(const GridField& g) const;

  /// Values of T f at the listed output nodes, summing only over nodes where f != 0.
  std::vector<double> apply_at(const GridField& f, const std::vector<std::size_t>& outputs) const;

  /// Matrix entry including truncation, input weight and cell volume.
  double entry(std::size_t i, std::size_t j) const;
  DenseOperator assemble() const;

 private:
  struct Offset {
    std::array<int, kMaxSpatialDims + 1> delta{};
    SpaceTimePoint diff;
    double rho = 0.0;
    double weight = 0.0;
  };
  bool displacement(std::size_t i, std::size_t j, SpaceTimePoint& diff) const;
  const std::vector<Offset>& offsets() const;
  GridField apply_fast(const GridField& f, bool transpose) const;

  ParabolicGrid grid_;
  PairKernel kernel_;
  TruncationSpec truncation_;
  Boundary boundary_;
  std::vector<double> input_weight_;
  std::string name_;
  mutable std::shared_ptr<const std::vector<Offset>> offsets_;
};

/// Assembled matrix acting on nodal values (the cell volume is folded in).
class DenseOperator : public LinearOperator {
 public:
  DenseOperator(ParabolicGrid grid, std::vector<double> matrix);
  const ParabolicGrid& grid() const override { return grid_; }
  GridField apply(const GridField& f) const override;
  GridField apply_transpose(const GridField& g) const override;
  double operator()(std::size_t i, std::size_t j) const { return matrix_[i * size_ + j]; }

 private:
  ParabolicGrid grid_;
  std::size_t size_;
  std::vector<double> matrix_;
};

/// Periodic convolution by a kernel table on minimum-image offsets (Nyquist
/// offsets dropped), applied through the DFT.
class ConvolutionOperator : public LinearOperator {
 public:
  ConvolutionOperator(ParabolicGrid grid,
                      const std::function<double(const SpaceTimePoint&, double rho)>& kernel,
                      const TruncationSpec& truncation);
  const ParabolicGrid& grid() const override { return grid_; }
  GridField apply(const GridField& f) const override;
  GridField apply_transpose(const GridField& g) const override;
  /// dV * DFT of the kernel table: the discrete Fourier symbol.
  const std::vector<Complex>& symbol() const { return symbol_; }
  double symbol_max_modulus() const;

 private:
  GridField multiply(const GridField& f, bool conjugate) const;
  ParabolicGrid grid_;
  std::vector<Complex> symbol_;
};

// Operator factories. Each checks grid compatibility and warns when the
// truncation radius is below the grid resolution.

/// T_eps with kernel K(A(x) - A(y), x - y); optional surface measure sqrt(1 + |grad A(y)|^2).
IntegralOperator graph_sio(const Kernel& K, const Surface& s, const TruncationSpec& tr,
                           bool graph_measure = false);
/// S_eps with kernel H(x - y).
IntegralOperator convolution(const Kernel& H, const ParabolicGrid& grid, const TruncationSpec& tr,
                             Boundary boundary = Boundary::periodic);
/// C_eps with kernel (A(x) - A(y)) / ||x - y|| H(x - y); H must be declared even in space.
IntegralOperator commutator(const Kernel& H, const Surface& s, const TruncationSpec& tr);

enum class CalderonFunction { sin, cos };

/// Kernel E(frequency * zeta * (A(x) - A(y)) / ||x - y||) H(x - y).
IntegralOperator calderon(const Kernel& H, const Surface& s, CalderonFunction E, double zeta,
                          const TruncationSpec& tr, double frequency = 1.0);

GridField sio_graph_apply(const Kernel& K, const Surface& s, const GridField& f,
                          const TruncationSpec& tr, bool graph_measure = false);
GridField conv_apply(const Kernel& H, const GridField& f, const TruncationSpec& tr);
GridField commutator_apply(const Kernel& H, const Surface& s, const GridField& f,
                           const TruncationSpec& tr);
GridField calderon_apply(const Kernel& H, const Surface& s, const GridField& f,
                         CalderonFunction E, double zeta, const TruncationSpec& tr,
                         double frequency = 1.0);

/// The layered smooth truncation of the cos Calderon-type operator between
/// eps and cap (default cap 1).
GridField smooth_truncate_apply(const Kernel& H, const Surface& s, const GridField& f, double eps,
                                double cap = 1.0, std::function<double(double)> phi = {},
                                int layers_per_decade = 32);

/// Phi(s) = exp(-1 / (1 - s^2)) for s < 1: the unnormalized bump of P_delta as
/// a function of s = ||x|| / delta.
double bump_profile(double s);

/// P_delta f = Phi_delta * f with weights renormalized to sum 1 on the grid.
/// Warns and returns f when delta does not cover a neighbouring node.
GridField approx_identity(const GridField& f, double delta, Boundary boundary = Boundary::periodic);
/// (P_delta f)(x_index).
double approx_identity_at(const GridField& f, std::size_t index, double delta,
                          Boundary boundary = Boundary::periodic);
/// (P_delta f) at each listed node, building the stencil once.
std::vector<double> approx_identity_at(const GridField& f, const std::vector<std::size_t>& indices,
                                       double delta, Boundary boundary = Boundary::periodic);

/// eta_B: 1 on 4B, 0 outside 5B, smooth in between, as a function of ||x - c|| / r.
double t1_bump(double normalized_radius);
/// Samples eta_B on the grid; throws if 5B is not inside the grid box.
GridField t1_bump_field(const ParabolicGrid& grid, const Ball& B);

/// Mean over the nodes of B of |op eta_B|, evaluated only at those nodes.
double t1_average(const IntegralOperator& op, const Ball& B, const GridField& eta);

}  // namespace parsio

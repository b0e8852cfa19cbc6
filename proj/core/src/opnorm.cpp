#include "parsio/opnorm.hpp"

#include <cmath>

#include "parsio/random.hpp"

namespace parsio {

OperatorNormEstimate opnorm_estimate(const LinearOperator& op, double tol, int max_iter,
                                     std::uint64_t seed) {
  const auto& grid = op.grid();
  GridField v(grid);
  Rng rng(seed);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.normal();
  v *= 1.0 / v.l2_norm();
  OperatorNormEstimate est;
  double previous = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const GridField tv = op.apply(v);
    const double lambda = inner(tv, tv);  // ||T v||^2 with ||v|| = 1
    est.iterations = it;
    if (lambda == 0.0) {
      est.value = 0.0;
      est.residual = 0.0;
      est.converged = true;
      return est;
    }
    est.residual = std::abs(lambda - previous) / lambda;
    est.value = std::sqrt(lambda);
    if (it > 1 && est.residual < tol) {
      est.converged = true;
      return est;
    }
    previous = lambda;
    GridField w = op.apply_transpose(tv);
    const double norm = w.l2_norm();
    if (norm == 0.0) {
      est.converged = true;
      return est;
    }
    v = (1.0 / norm) * std::move(w);
  }
  return est;
}

}  // namespace parsio

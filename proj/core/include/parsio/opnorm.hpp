#pragma once

#include <cstdint>

#include "parsio/operators.hpp"

namespace parsio {

struct OperatorNormEstimate {
  double value = 0.0;     ///< estimate of ||T||_{L^2 -> L^2}
  int iterations = 0;
  double residual = 0.0;  ///< relative change of the eigenvalue estimate at exit
  int probes = 1;
  bool converged = false;
};

/// Power iteration on T*T from a seeded Gaussian start; returns the square
/// root of the top eigenvalue. Stops when the relative change of the
/// Rayleigh quotient drops below tol.
OperatorNormEstimate opnorm_estimate(const LinearOperator& op, double tol = 1e-8,
                                     int max_iter = 500, std::uint64_t seed = 1);

}  // namespace parsio

#pragma once

#include <functional>
#include <vector>

namespace parsio {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `count` nodes on [a, b].
QuadratureRule gauss_legendre(int count, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre: `panels` equal panels of `order` nodes each.
QuadratureRule composite_gauss_legendre(int panels, int order, double a, double b);

/// Adaptive Gauss-Kronrod (15-point) integration of f over [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, int max_depth = 20);

}  // namespace parsio

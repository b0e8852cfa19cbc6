#pragma once

#include <string>
#include <vector>

#include "parsio/geometry.hpp"
#include "parsio/spaces.hpp"

namespace parsio {

/// gamma_A(x, delta) on a (node) x (delta) lattice, row-major by node.
struct GammaField {
  ParabolicGrid grid;
  std::vector<std::size_t> nodes;
  std::vector<double> deltas;
  std::vector<double> values;

  double at(std::size_t node, std::size_t delta) const { return values[node * deltas.size() + delta]; }
};

/// delta_i = top * 2^{-i / per_octave} for i = 0, 1, ... while delta_i >= floor.
std::vector<double> dyadic_deltas(double floor, double top = 1.0, int per_octave = 4);

/// (delta^{-d-2} sum over the shell delta/4 <= ||x - y|| <= delta of
/// |A(x) - A(y) - (x - y).P_delta grad A(x)|^2 dV)^{1/2}.
/// Throws when delta < 4h or the shell does not fit in a periodic torus.
double gamma_coeff(const Surface& s, std::size_t index, double delta);

GammaField gamma_field(const Surface& s, const std::vector<std::size_t>& nodes,
                       const std::vector<double>& deltas);

/// |B|^{-1} sum_B sum_delta gamma^2 dlog dV, with |B| the discrete volume of
/// the nodes of B. dlog <= 0 takes the (uniform) spacing of log delta.
double carleson_integral(const GammaField& field, double dlog = 0.0);
double carleson_integral(const Surface& s, const Ball& B, const std::vector<double>& deltas,
                         double dlog = 0.0);

/// x..., t, delta, gamma.
void write_gamma_csv(const GammaField& field, const std::string& path);

}  // namespace parsio

#include "parsio/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "parsio/diagnostics.hpp"
#include "parsio/parallel.hpp"
#include "parsio/quadrature.hpp"

namespace parsio {

namespace {

double phi_shape(double rho) {
  if (rho <= 0.25 || rho >= 1.0) return 0.0;
  return std::exp(-1.0 / ((rho - 0.25) * (1.0 - rho)));
}

}  // namespace

double phi_bump_constant() {
  static const double c =
      1.0 / integrate_adaptive([](double r) { return phi_shape(r) / r; }, 0.25, 1.0, 1e-14);
  return c;
}

double phi_bump(double rho) { return phi_bump_constant() * phi_shape(rho); }

double phi_normalization_error(const std::function<double(double)>& phi) {
  const auto rule = composite_gauss_legendre(64, 16, 0.25, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s += rule.weights[i] * phi(rule.nodes[i]) / rule.nodes[i];
  }
  return std::abs(s - 1.0);
}

TruncationSpec TruncationSpec::sharp(double epsilon, std::optional<double> cap) {
  TruncationSpec t;
  t.kind = TruncationKind::sharp;
  t.epsilon = epsilon;
  t.cap = cap;
  t.validate();
  return t;
}

TruncationSpec TruncationSpec::smooth(double epsilon, double cap, int layers_per_decade,
                                      std::function<double(double)> phi) {
  TruncationSpec t;
  t.kind = TruncationKind::smooth;
  t.epsilon = epsilon;
  t.cap = cap;
  t.layers_per_decade = layers_per_decade;
  t.phi = phi ? std::move(phi) : std::function<double(double)>(phi_bump);
  t.validate();
  return t;
}

void TruncationSpec::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("truncation: epsilon must be positive");
  }
  if (cap && !(*cap > epsilon)) throw std::invalid_argument("truncation: cap must exceed epsilon");
  if (kind == TruncationKind::smooth) {
    if (!cap) throw std::invalid_argument("truncation: smooth truncation needs a cap");
    if (layers_per_decade < 16) {
      throw std::invalid_argument("truncation: need at least 16 layers per decade");
    }
    const auto& f = phi ? phi : std::function<double(double)>(phi_bump);
    const double err = phi_normalization_error(f);
    if (!(err <= 1e-6)) {
      throw std::invalid_argument("truncation: phi is not normalized (int phi drho/rho off by " +
                                  std::to_string(err) + ")");
    }
  }
}

double TruncationSpec::weight(double rho) const {
  if (kind == TruncationKind::sharp) {
    if (!(rho > epsilon)) return 0.0;
    if (cap && rho > *cap) return 0.0;
    return 1.0;
  }
  const double span = std::log(*cap / epsilon);
  const int layers =
      std::max(1, static_cast<int>(std::ceil(layers_per_decade * span / std::log(10.0))));
  const double du = span / layers;
  const auto& f = phi ? phi : std::function<double(double)>(phi_bump);
  // phi(rho / delta) != 0 only for rho < delta < 4 rho.
  const double lo = std::log(rho / epsilon);
  const double hi = std::log(4.0 * rho / epsilon);
  const int first = std::max(0, static_cast<int>(std::floor(lo / du - 0.5)));
  const int last = std::min(layers - 1, static_cast<int>(std::ceil(hi / du - 0.5)));
  double w = 0.0;
  for (int l = first; l <= last; ++l) {
    const double delta = epsilon * std::exp((l + 0.5) * du);
    w += f(rho / delta);
  }
  return w * du;
}

double TruncationSpec::support_radius() const {
  if (cap) return *cap;
  return std::numeric_limits<double>::infinity();
}

namespace {

void check_resolution(const TruncationSpec& tr, const ParabolicGrid& grid, const std::string& who) {
  tr.validate();
  const double floor = tr.kind == TruncationKind::smooth ? tr.epsilon / 4.0 : tr.epsilon;
  if (floor < grid.h()) {
    warn(who + ": truncation radius " + std::to_string(tr.epsilon) +
         " is below the grid resolution h = " + std::to_string(grid.h()) +
         "; the truncation is unresolved");
  }
}

std::array<std::size_t, kMaxSpatialDims + 1> strides(const ParabolicGrid& grid) {
  std::array<std::size_t, kMaxSpatialDims + 1> s{};
  std::size_t acc = 1;
  for (int a = grid.n() - 1; a >= 0; --a) {
    s[a] = acc;
    acc *= grid.count(a);
  }
  return s;
}

}  // namespace

IntegralOperator::IntegralOperator(ParabolicGrid grid, PairKernel kernel, TruncationSpec truncation,
                                   Boundary boundary, std::vector<double> input_weight,
                                   std::string name)
    : grid_(std::move(grid)),
      kernel_(std::move(kernel)),
      truncation_(std::move(truncation)),
      boundary_(boundary),
      input_weight_(std::move(input_weight)),
      name_(std::move(name)) {
  truncation_.validate();
  if (input_weight_.empty()) input_weight_.assign(grid_.size(), 1.0);
  if (input_weight_.size() != grid_.size()) {
    throw std::invalid_argument("IntegralOperator: input weight size mismatch");
  }
}

bool IntegralOperator::displacement(std::size_t i, std::size_t j, SpaceTimePoint& diff) const {
  const auto a = grid_.unravel(i);
  const auto b = grid_.unravel(j);
  const int n = grid_.n();
  diff = SpaceTimePoint();
  diff.spatial_dims = n - 1;
  for (int ax = 0; ax < n; ++ax) {
    int d = a[ax] - b[ax];
    if (boundary_ == Boundary::periodic) {
      const int c = grid_.count(ax);
      d = min_image(d, c);
      if (c % 2 == 0 && d == -c / 2) return false;
    }
    if (ax == n - 1) {
      diff.t = d * grid_.step(ax);
    } else {
      diff.x[ax] = d * grid_.step(ax);
    }
  }
  return true;
}

double IntegralOperator::entry(std::size_t i, std::size_t j) const {
  SpaceTimePoint diff;
  if (!displacement(i, j, diff)) return 0.0;
  const double rho = pnorm(diff);
  if (rho == 0.0) return 0.0;
  const double w = truncation_.weight(rho);
  if (w == 0.0) return 0.0;
  return kernel_(i, j, diff, rho) * w * input_weight_[j] * grid_.cell_volume();
}

const std::vector<IntegralOperator::Offset>& IntegralOperator::offsets() const {
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  if (offsets_) return *offsets_;
  const int n = grid_.n();
  std::array<int, kMaxSpatialDims + 1> lo{}, hi{};
  for (int a = 0; a < n; ++a) {
    const int c = grid_.count(a);
    if (boundary_ == Boundary::periodic) {
      // Symmetric window; the unpaired Nyquist offset -c/2 of an even axis is dropped.
      hi[a] = (c - 1) / 2;
      lo[a] = -hi[a];
    } else {
      lo[a] = -(c - 1);
      hi[a] = c - 1;
    }
  }
  // Spatial reach of the truncation bounds the table.
  const double reach = truncation_.support_radius();
  for (int a = 0; a < n; ++a) {
    const double r = a == n - 1 ? reach * reach : reach;
    if (std::isfinite(r)) {
      const int m = static_cast<int>(std::ceil(r / grid_.step(a)));
      lo[a] = std::max(lo[a], -m);
      hi[a] = std::min(hi[a], m);
    }
  }
  auto table = std::make_shared<std::vector<Offset>>();
  std::array<int, kMaxSpatialDims + 1> d = lo;
  while (true) {
    Offset o;
    o.delta = d;
    o.diff.spatial_dims = n - 1;
    for (int a = 0; a < n - 1; ++a) o.diff.x[a] = d[a] * grid_.step(a);
    o.diff.t = d[n - 1] * grid_.step(n - 1);
    o.rho = pnorm(o.diff);
    if (o.rho > 0.0) {
      o.weight = truncation_.weight(o.rho);
      if (o.weight != 0.0) table->push_back(o);
    }
    int a = n - 1;
    while (a >= 0) {
      if (++d[a] <= hi[a]) break;
      d[a] = lo[a];
      --a;
    }
    if (a < 0) break;
  }
  offsets_ = table;
  return *offsets_;
}

GridField IntegralOperator::apply_fast(const GridField& f, bool transpose) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument(name_ + ": grid mismatch");
  const auto& table = offsets();
  const int n = grid_.n();
  const auto stride = strides(grid_);
  const bool periodic = boundary_ == Boundary::periodic;
  const double vol = grid_.cell_volume();
  GridField out(grid_);
  parallel_for(grid_.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto idx = grid_.unravel(i);
      double acc = 0.0;
      for (const auto& o : table) {
        std::size_t j = 0;
        bool inside = true;
        for (int a = 0; a < n; ++a) {
          int k = idx[a] - o.delta[a];
          const int c = grid_.count(a);
          if (periodic) {
            if (k < 0) k += c;
            if (k >= c) k -= c;
          } else if (k < 0 || k >= c) {
            inside = false;
            break;
          }
          j += static_cast<std::size_t>(k) * stride[a];
        }
        if (!inside) continue;
        const double fj = f[j];
        if (fj == 0.0) continue;
        if (transpose) {
          SpaceTimePoint neg = o.diff;
          for (int a = 0; a < n - 1; ++a) neg.x[a] = -o.diff.x[a];
          neg.t = -o.diff.t;
          acc += kernel_(j, i, neg, o.rho) * o.weight * input_weight_[i] * fj;
        } else {
          acc += kernel_(i, j, o.diff, o.rho) * o.weight * input_weight_[j] * fj;
        }
      }
      out[i] = acc * vol;
    }
  });
  return out;
}

GridField IntegralOperator::apply(const GridField& f) const { return apply_fast(f, false); }
GridField IntegralOperator::apply_transpose(const GridField& g) const {
  return apply_fast(g, true);
}

GridField IntegralOperator::apply_reference(const GridField& f) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument(name_ + ": grid mismatch");
  GridField out(grid_);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < grid_.size(); ++j) acc += entry(i, j) * f[j];
    out[i] = acc;
  }
  return out;
}

GridField IntegralOperator::apply_transpose_reference(const GridField& g) const {
  if (!(g.grid() == grid_)) throw std::invalid_argument(name_ + ": grid mismatch");
  GridField out(grid_);
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) acc += entry(i, j) * g[i];
    out[j] = acc;
  }
  return out;
}

std::vector<double> IntegralOperator::apply_at(const GridField& f,
                                               const std::vector<std::size_t>& outputs) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument(name_ + ": grid mismatch");
  const int n = grid_.n();
  const bool periodic = boundary_ == Boundary::periodic;
  using Index = std::array<int, kMaxSpatialDims + 1>;
  std::vector<std::size_t> support;
  std::vector<Index> sidx;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f[j] != 0.0) {
      support.push_back(j);
      sidx.push_back(grid_.unravel(j));
    }
  }
  // rho and truncation weight depend only on the offset: tabulate them once.
  Index kc{};
  std::size_t keys = 1;
  for (int a = 0; a < n; ++a) {
    kc[a] = periodic ? grid_.count(a) : 2 * grid_.count(a) - 1;
    keys *= kc[a];
  }
  std::vector<double> wtab(keys, 0.0), rtab(keys, 0.0);
  parallel_for(keys, [&](std::size_t begin, std::size_t end) {
    for (std::size_t key = begin; key < end; ++key) {
      std::size_t rest = key;
      SpaceTimePoint diff;
      diff.spatial_dims = n - 1;
      bool keep = true;
      for (int a = n - 1; a >= 0; --a) {
        const int k = static_cast<int>(rest % kc[a]);
        rest /= kc[a];
        const int c = grid_.count(a);
        int d;
        if (periodic) {
          if (c % 2 == 0 && k == c / 2) keep = false;
          d = k < c - c / 2 ? k : k - c;
        } else {
          d = k - (c - 1);
        }
        if (a == n - 1) {
          diff.t = d * grid_.step(a);
        } else {
          diff.x[a] = d * grid_.step(a);
        }
      }
      if (!keep) continue;
      const double rho = pnorm(diff);
      if (rho == 0.0) continue;
      rtab[key] = rho;
      wtab[key] = truncation_.weight(rho);
    }
  });
  std::vector<double> out(outputs.size(), 0.0);
  const double vol = grid_.cell_volume();
  parallel_for(outputs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t i = outputs[k];
      const Index oi = grid_.unravel(i);
      double acc = 0.0;
      SpaceTimePoint diff;
      diff.spatial_dims = n - 1;
      for (std::size_t s = 0; s < support.size(); ++s) {
        std::size_t key = 0;
        Index d{};
        for (int a = 0; a < n; ++a) {
          const int c = grid_.count(a);
          int v = oi[a] - sidx[s][a];
          if (periodic) {
            v = min_image(v, c);
            key = key * kc[a] + static_cast<std::size_t>(v < 0 ? v + c : v);
          } else {
            key = key * kc[a] + static_cast<std::size_t>(v + c - 1);
          }
          d[a] = v;
        }
        const double w = wtab[key];
        if (w == 0.0) continue;
        for (int a = 0; a < n - 1; ++a) diff.x[a] = d[a] * grid_.step(a);
        diff.t = d[n - 1] * grid_.step(n - 1);
        const std::size_t j = support[s];
        acc += kernel_(i, j, diff, rtab[key]) * w * input_weight_[j] * f[j];
      }
      out[k] = acc * vol;
    }
  });
  return out;
}

DenseOperator IntegralOperator::assemble() const {
  const std::size_t N = grid_.size();
  std::vector<double> m(N * N, 0.0);
  const auto& table = offsets();
  const int n = grid_.n();
  const auto stride = strides(grid_);
  const bool periodic = boundary_ == Boundary::periodic;
  const double vol = grid_.cell_volume();
  parallel_for(N, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto idx = grid_.unravel(i);
      for (const auto& o : table) {
        std::size_t j = 0;
        bool inside = true;
        for (int a = 0; a < n; ++a) {
          int k = idx[a] - o.delta[a];
          const int c = grid_.count(a);
          if (periodic) {
            if (k < 0) k += c;
            if (k >= c) k -= c;
          } else if (k < 0 || k >= c) {
            inside = false;
            break;
          }
          j += static_cast<std::size_t>(k) * stride[a];
        }
        if (!inside) continue;
        m[i * N + j] = kernel_(i, j, o.diff, o.rho) * o.weight * input_weight_[j] * vol;
      }
    }
  });
  return DenseOperator(grid_, std::move(m));
}

DenseOperator::DenseOperator(ParabolicGrid grid, std::vector<double> matrix)
    : grid_(std::move(grid)), size_(grid_.size()), matrix_(std::move(matrix)) {
  if (matrix_.size() != size_ * size_) throw std::invalid_argument("DenseOperator: bad matrix size");
}

GridField DenseOperator::apply(const GridField& f) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument("DenseOperator: grid mismatch");
  GridField out(grid_);
  parallel_for(size_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double* row = matrix_.data() + i * size_;
      double acc = 0.0;
      for (std::size_t j = 0; j < size_; ++j) acc += row[j] * f[j];
      out[i] = acc;
    }
  });
  return out;
}

GridField DenseOperator::apply_transpose(const GridField& g) const {
  if (!(g.grid() == grid_)) throw std::invalid_argument("DenseOperator: grid mismatch");
  GridField out(grid_);
  parallel_for(size_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = 0; i < size_; ++i) {
      const double gi = g[i];
      const double* row = matrix_.data() + i * size_;
      for (std::size_t j = begin; j < end; ++j) out[j] += row[j] * gi;
    }
  });
  return out;
}

ConvolutionOperator::ConvolutionOperator(
    ParabolicGrid grid, const std::function<double(const SpaceTimePoint&, double rho)>& kernel,
    const TruncationSpec& truncation)
    : grid_(std::move(grid)) {
  truncation.validate();
  const int n = grid_.n();
  std::vector<double> table(grid_.size(), 0.0);
  parallel_for(grid_.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      if (is_nyquist(grid_, b)) continue;
      const auto idx = grid_.unravel(b);
      SpaceTimePoint diff;
      diff.spatial_dims = n - 1;
      for (int a = 0; a < n - 1; ++a) diff.x[a] = signed_mode(idx[a], grid_.count(a)) * grid_.h();
      diff.t = signed_mode(idx[n - 1], grid_.count(n - 1)) * grid_.dt();
      const double rho = pnorm(diff);
      if (rho == 0.0) continue;
      const double w = truncation.weight(rho);
      if (w == 0.0) continue;
      table[b] = kernel(diff, rho) * w;
    }
  });
  symbol_ = dft_forward(table, grid_.counts());
  const double vol = grid_.cell_volume();
  for (auto& s : symbol_) s *= vol;
}

GridField ConvolutionOperator::multiply(const GridField& f, bool conjugate) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument("ConvolutionOperator: grid mismatch");
  auto spec = dft_forward(f.values(), grid_.counts());
  for (std::size_t b = 0; b < spec.size(); ++b) {
    spec[b] *= conjugate ? std::conj(symbol_[b]) : symbol_[b];
  }
  const auto back = dft_inverse(std::move(spec), grid_.counts());
  GridField out(grid_);
  for (std::size_t i = 0; i < back.size(); ++i) out[i] = back[i].real();
  return out;
}

GridField ConvolutionOperator::apply(const GridField& f) const { return multiply(f, false); }
GridField ConvolutionOperator::apply_transpose(const GridField& g) const {
  return multiply(g, true);
}

double ConvolutionOperator::symbol_max_modulus() const {
  double m = 0.0;
  for (const auto& s : symbol_) m = std::max(m, std::abs(s));
  return m;
}

namespace {

void require_grid(const Kernel& k, const ParabolicGrid& grid, const std::string& who) {
  if (k.n() != grid.n()) {
    throw std::invalid_argument(who + ": kernel dimension n = " + std::to_string(k.n()) +
                                " does not match the grid (n = " + std::to_string(grid.n()) + ")");
  }
}

std::shared_ptr<const std::vector<double>> share_values(const GridField& f) {
  return std::make_shared<const std::vector<double>>(f.values());
}

Boundary surface_boundary(const Surface& s) {
  return s.periodic ? Boundary::periodic : Boundary::open;
}

}  // namespace

IntegralOperator graph_sio(const Kernel& K, const Surface& s, const TruncationSpec& tr,
                           bool graph_measure) {
  if (!K.ambient()) throw std::invalid_argument("graph_sio: kernel '" + K.name() + "' is not ambient");
  require_grid(K, s.grid(), "graph_sio");
  check_resolution(tr, s.grid(), "graph_sio");
  auto A = share_values(s.A);
  auto eval = K.evaluator();
  PairKernel pk = [A, eval](std::size_t i, std::size_t j, const SpaceTimePoint& diff, double) {
    return eval(ambient_point((*A)[i] - (*A)[j], diff));
  };
  std::vector<double> w;
  if (graph_measure) {
    w.resize(s.grid().size());
    for (std::size_t j = 0; j < w.size(); ++j) {
      double sq = 0.0;
      for (const auto& g : s.grad) sq += g[j] * g[j];
      w[j] = std::sqrt(1.0 + sq);
    }
  }
  return IntegralOperator(s.grid(), pk, tr, surface_boundary(s), w, "graph_sio[" + K.name() + "]");
}

IntegralOperator convolution(const Kernel& H, const ParabolicGrid& grid, const TruncationSpec& tr,
                             Boundary boundary) {
  if (H.ambient()) throw std::invalid_argument("convolution: kernel must live on R^n");
  require_grid(H, grid, "convolution");
  check_resolution(tr, grid, "convolution");
  auto eval = H.evaluator();
  PairKernel pk = [eval](std::size_t, std::size_t, const SpaceTimePoint& diff, double) {
    return eval(diff);
  };
  return IntegralOperator(grid, pk, tr, boundary, {}, "convolution[" + H.name() + "]");
}

IntegralOperator commutator(const Kernel& H, const Surface& s, const TruncationSpec& tr) {
  if (H.parity() != Parity::even_in_space) {
    throw std::invalid_argument("commutator: kernel '" + H.name() +
                                "' must be declared even in space");
  }
  if (H.ambient()) throw std::invalid_argument("commutator: kernel must live on R^n");
  require_grid(H, s.grid(), "commutator");
  check_resolution(tr, s.grid(), "commutator");
  auto A = share_values(s.A);
  auto eval = H.evaluator();
  PairKernel pk = [A, eval](std::size_t i, std::size_t j, const SpaceTimePoint& diff, double rho) {
    return ((*A)[i] - (*A)[j]) / rho * eval(diff);
  };
  return IntegralOperator(s.grid(), pk, tr, surface_boundary(s), {}, "commutator[" + H.name() + "]");
}

IntegralOperator calderon(const Kernel& H, const Surface& s, CalderonFunction E, double zeta,
                          const TruncationSpec& tr, double frequency) {
  if (H.ambient()) throw std::invalid_argument("calderon: kernel must live on R^n");
  require_grid(H, s.grid(), "calderon");
  check_resolution(tr, s.grid(), "calderon");
  auto A = share_values(s.A);
  auto eval = H.evaluator();
  const double c = frequency * zeta;
  PairKernel pk;
  if (E == CalderonFunction::sin) {
    pk = [A, eval, c](std::size_t i, std::size_t j, const SpaceTimePoint& diff, double rho) {
      return std::sin(c * ((*A)[i] - (*A)[j]) / rho) * eval(diff);
    };
  } else {
    pk = [A, eval, c](std::size_t i, std::size_t j, const SpaceTimePoint& diff, double rho) {
      return std::cos(c * ((*A)[i] - (*A)[j]) / rho) * eval(diff);
    };
  }
  const std::string tag = E == CalderonFunction::sin ? "sin" : "cos";
  return IntegralOperator(s.grid(), pk, tr, surface_boundary(s), {},
                          "calderon_" + tag + "[" + H.name() + "]");
}

GridField sio_graph_apply(const Kernel& K, const Surface& s, const GridField& f,
                          const TruncationSpec& tr, bool graph_measure) {
  return graph_sio(K, s, tr, graph_measure).apply(f);
}

GridField conv_apply(const Kernel& H, const GridField& f, const TruncationSpec& tr) {
  return convolution(H, f.grid(), tr).apply(f);
}

GridField commutator_apply(const Kernel& H, const Surface& s, const GridField& f,
                           const TruncationSpec& tr) {
  return commutator(H, s, tr).apply(f);
}

GridField calderon_apply(const Kernel& H, const Surface& s, const GridField& f, CalderonFunction E,
                         double zeta, const TruncationSpec& tr, double frequency) {
  return calderon(H, s, E, zeta, tr, frequency).apply(f);
}

GridField smooth_truncate_apply(const Kernel& H, const Surface& s, const GridField& f, double eps,
                                double cap, std::function<double(double)> phi,
                                int layers_per_decade) {
  const auto tr = TruncationSpec::smooth(eps, cap, layers_per_decade, std::move(phi));
  return calderon(H, s, CalderonFunction::cos, 1.0, tr).apply(f);
}

double bump_profile(double s) {
  if (!(s < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

namespace {

struct Stencil {
  std::vector<std::array<int, kMaxSpatialDims + 1>> delta;
  std::vector<double> weight;  // unnormalized
};

Stencil bump_stencil(const ParabolicGrid& grid, double delta) {
  const int n = grid.n();
  std::array<int, kMaxSpatialDims + 1> m{};
  for (int a = 0; a < n; ++a) {
    const double reach = a == n - 1 ? delta * delta : delta;
    m[a] = static_cast<int>(std::floor(reach / grid.step(a)));
    if (2 * m[a] + 1 > grid.count(a) && grid.count(a) > 1) {
      throw std::invalid_argument("approx_identity: delta exceeds half the grid");
    }
  }
  Stencil st;
  std::array<int, kMaxSpatialDims + 1> d{};
  for (int a = 0; a < n; ++a) d[a] = -m[a];
  while (true) {
    SpaceTimePoint p;
    p.spatial_dims = n - 1;
    for (int a = 0; a < n - 1; ++a) p.x[a] = d[a] * grid.step(a);
    p.t = d[n - 1] * grid.step(n - 1);
    const double w = bump_profile(pnorm(p) / delta);
    if (w > 0.0) {
      st.delta.push_back(d);
      st.weight.push_back(w);
    }
    int a = n - 1;
    while (a >= 0) {
      if (++d[a] <= m[a]) break;
      d[a] = -m[a];
      --a;
    }
    if (a < 0) break;
  }
  return st;
}

double stencil_at(const GridField& f, const Stencil& st, std::size_t index, Boundary boundary) {
  const auto& grid = f.grid();
  const int n = grid.n();
  const auto idx = grid.unravel(index);
  double acc = 0.0, mass = 0.0;
  for (std::size_t s = 0; s < st.delta.size(); ++s) {
    std::array<int, kMaxSpatialDims + 1> k{};
    bool inside = true;
    for (int a = 0; a < n; ++a) {
      int v = idx[a] - st.delta[s][a];
      const int c = grid.count(a);
      if (boundary == Boundary::periodic) {
        v = ((v % c) + c) % c;
      } else if (v < 0 || v >= c) {
        inside = false;
        break;
      }
      k[a] = v;
    }
    if (!inside) continue;
    acc += st.weight[s] * f[grid.ravel(k)];
    mass += st.weight[s];
  }
  return acc / mass;
}

}  // namespace

GridField approx_identity(const GridField& f, double delta, Boundary boundary) {
  if (!(delta > 0.0)) throw std::invalid_argument("approx_identity: delta must be positive");
  const Stencil st = bump_stencil(f.grid(), delta);
  if (st.delta.size() <= 1) {
    warn("approx_identity: delta = " + std::to_string(delta) +
         " is below the grid resolution; returning f unchanged");
    return f;
  }
  GridField out(f.grid());
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = stencil_at(f, st, i, boundary);
  });
  return out;
}

double approx_identity_at(const GridField& f, std::size_t index, double delta, Boundary boundary) {
  if (!(delta > 0.0)) throw std::invalid_argument("approx_identity: delta must be positive");
  const Stencil st = bump_stencil(f.grid(), delta);
  if (st.delta.size() <= 1) {
    warn("approx_identity: delta = " + std::to_string(delta) +
         " is below the grid resolution; returning f unchanged");
    return f[index];
  }
  return stencil_at(f, st, index, boundary);
}

std::vector<double> approx_identity_at(const GridField& f, const std::vector<std::size_t>& indices,
                                       double delta, Boundary boundary) {
  if (!(delta > 0.0)) throw std::invalid_argument("approx_identity: delta must be positive");
  const Stencil st = bump_stencil(f.grid(), delta);
  std::vector<double> out(indices.size());
  if (st.delta.size() <= 1) {
    warn("approx_identity: delta = " + std::to_string(delta) +
         " is below the grid resolution; returning f unchanged");
    for (std::size_t i = 0; i < indices.size(); ++i) out[i] = f[indices[i]];
    return out;
  }
  parallel_for(indices.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = stencil_at(f, st, indices[i], boundary);
  });
  return out;
}

double t1_bump(double u) {
  if (u <= 4.0) return 1.0;
  if (u >= 5.0) return 0.0;
  const double v = 5.0 - u;  // in (0, 1)
  const double a = std::exp(-1.0 / v);
  const double b = std::exp(-1.0 / (1.0 - v));
  return a / (a + b);
}

GridField t1_bump_field(const ParabolicGrid& grid, const Ball& B) {
  if (!grid.contains_ball(B.center, 5.0 * B.radius)) {
    throw std::invalid_argument("t1_bump_field: 5B is not contained in the grid box");
  }
  return sample(grid, [&](const SpaceTimePoint& p) {
    return t1_bump(pnorm(p - B.center) / B.radius);
  });
}

double t1_average(const IntegralOperator& op, const Ball& B, const GridField& eta) {
  if (!op.grid().contains_ball(B.center, 5.0 * B.radius)) {
    throw std::invalid_argument("t1_average: 5B is not contained in the grid box");
  }
  const auto nodes = ball_points(op.grid(), B.center, B.radius);
  if (nodes.empty()) throw std::invalid_argument("t1_average: the ball contains no grid node");
  auto values = op.apply_at(eta, nodes);
  for (double& v : values) v = std::abs(v);
  return pairwise_sum(values.data(), values.size()) / values.size();
}

}  // namespace parsio

#pragma once

#include <string>
#include <vector>

#include "parsio/kernels.hpp"
#include "parsio/spectral.hpp"

namespace parsio {

/// zeta_j = j * 2Z / count for j = -count/2 .. count/2 (count + 1 points).
struct ZetaGrid {
  double Z = 64.0;
  int count = 4096;

  double step() const { return 2.0 * Z / count; }
  std::size_t size() const { return static_cast<std::size_t>(count) + 1; }
  double value(std::size_t j) const { return (static_cast<double>(j) - count / 2) * step(); }
  void validate() const;
};

/// Uniform kappa samples on [-R, R) with spacing `step`; 1/(2R) must divide
/// the zeta spacing so that every zeta node is a DFT bin.
struct KappaGrid {
  double R = 1024.0;
  double step = 1.0 / 256.0;

  std::size_t size() const;
};

/// H_zeta(x) = int exp(-2 pi i zeta kappa) K(||x|| kappa, x) d kappa on the
/// zeta grid, by one DFT of the trapezoid samples. The sample at -R is
/// replaced by (K(-R) + K(R)) / 2, which makes the rule symmetric in kappa.
std::vector<Complex> hzeta_compute(const Kernel& K, const SpaceTimePoint& x, const ZetaGrid& zeta,
                                   const KappaGrid& kappa);

struct ZetaFamily {
  std::string kernel;
  ZetaGrid zeta;
  KappaGrid kappa;
  std::vector<SpaceTimePoint> probes;
  std::vector<std::vector<Complex>> values;     ///< H_zeta(x, t)
  std::vector<std::vector<Complex>> reflected;  ///< H_zeta(-x, t), computed independently

  Complex even(std::size_t p, std::size_t j) const { return 0.5 * (values[p][j] + reflected[p][j]); }
  Complex odd(std::size_t p, std::size_t j) const { return 0.5 * (values[p][j] - reflected[p][j]); }
};

ZetaFamily build_zeta_family(const Kernel& K, const std::vector<SpaceTimePoint>& probes,
                             const ZetaGrid& zeta, const KappaGrid& kappa = {});

/// Residuals normalized by ||x||^d, maximized over probes and zeta:
///   even: |H^even_zeta + H^even_{-zeta}|, odd: |H^odd_zeta - H^odd_{-zeta}|,
///   conjugate: |H_{-zeta} - conj(H_zeta)|, resynthesis: |H - H^even - H^odd|.
struct ParityReport {
  double even_residual = 0.0;
  double odd_residual = 0.0;
  double conjugate_residual = 0.0;
  double resynthesis_residual = 0.0;
  double max_residual() const { return std::max(even_residual, odd_residual); }
};

ParityReport parity_check(const ZetaFamily& fam);

struct Reconstruction {
  double value = 0.0;          ///< trapezoid of cos Re H^odd - sin Im H^even
  double imag_residual = 0.0;  ///< imaginary part of the same inverse transform
  double tail_estimate = 0.0;  ///< |H| at |zeta| = Z extrapolated with (1+|zeta|)^{-N}
  bool flagged = false;        ///< tail_estimate above the requested tolerance
};

/// K(x0, x) from the family at probe p. The sine term carries the factor i
/// needed for a real result: K = int cos(2 pi k zeta) Re H^odd - sin(2 pi k zeta) Im H^even,
/// with k = x0 / ||x||.
Reconstruction reconstruct_K(const ZetaFamily& fam, std::size_t p, double x0, double tol = 1e-3,
                             int decay_order = 2);

struct ZetaDecayReport {
  int N = 2;
  std::vector<double> zeta;
  std::vector<double> profile;  ///< sup_probes (1+|zeta|)^N ||x||^d |H_zeta(x)|
  double reference = 0.0;       ///< profile at |zeta| = 1
  double threshold = 0.0;       ///< 3 x reference
  double max_tail = 0.0;        ///< max of the profile over |zeta| >= 1
  double max_full = 0.0;        ///< max over the whole grid
  bool pass = false;            ///< max_tail <= threshold
};

ZetaDecayReport zeta_decay_check(const ZetaFamily& fam, int N);

/// probe, x..., t, zeta, Re H, Im H, Re H^even, Im H^even, Re H^odd, Im H^odd.
void write_zeta_family_csv(const ZetaFamily& fam, const std::string& path);

}  // namespace parsio

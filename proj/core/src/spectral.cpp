#include "parsio/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace parsio {

namespace {
// Planning is not thread-safe in FFTW; execution of distinct plans is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void dft_inplace(std::vector<Complex>& data, const std::vector<int>& counts, int sign) {
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  if (total != data.size()) throw std::invalid_argument("dft_inplace: size mismatch");
  if (total == 0) return;
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft(static_cast<int>(counts.size()), counts.data(), ptr, ptr,
                         sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("dft_inplace: FFTW planning failed");
  fftw_execute(plan);
  std::lock_guard lock(plan_mutex());
  fftw_destroy_plan(plan);
}

std::vector<Complex> dft_forward(const std::vector<double>& values,
                                 const std::vector<int>& counts) {
  std::vector<Complex> data(values.begin(), values.end());
  dft_inplace(data, counts, -1);
  return data;
}

std::vector<Complex> dft_inverse(std::vector<Complex> spectrum, const std::vector<int>& counts) {
  dft_inplace(spectrum, counts, +1);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  for (auto& v : spectrum) v *= scale;
  return spectrum;
}

std::array<double, kMaxSpatialDims + 1> frequency(const ParabolicGrid& grid, std::size_t bin) {
  const auto idx = grid.unravel(bin);
  std::array<double, kMaxSpatialDims + 1> f{};
  for (int a = 0; a < grid.n(); ++a) f[a] = signed_mode(idx[a], grid.count(a)) / grid.period(a);
  return f;
}

bool is_nyquist(const ParabolicGrid& grid, std::size_t bin) {
  const auto idx = grid.unravel(bin);
  for (int a = 0; a < grid.n(); ++a) {
    const int c = grid.count(a);
    if (c % 2 == 0 && c > 1 && idx[a] == c / 2) return true;
  }
  return false;
}

}  // namespace parsio

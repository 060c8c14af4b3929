#include "wayref/savgol.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

#include "wayref/kernels.hpp"

namespace wayref {

std::vector<std::vector<double>> savgol_projection(std::size_t window, std::size_t order) {
  if (window % 2 == 0 || order >= window)
    throw std::invalid_argument("savgol: window must be odd and larger than the order");
  const auto w = static_cast<Eigen::Index>(window);
  const auto p = static_cast<Eigen::Index>(order + 1);
  const double half = static_cast<double>(window / 2);
  Eigen::MatrixXd a(w, p);
  for (Eigen::Index k = 0; k < w; ++k) {
    const double x = static_cast<double>(k) - half;
    double v = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      a(k, j) = v;
      v *= x;
    }
  }
  const Eigen::MatrixXd hat = a * (a.transpose() * a).ldlt().solve(a.transpose());
  std::vector<std::vector<double>> rows(window, std::vector<double>(window));
  for (Eigen::Index j = 0; j < w; ++j)
    for (Eigen::Index k = 0; k < w; ++k) rows[j][k] = hat(j, k);
  return rows;
}

std::vector<double> savgol_filter(std::span<const double> series, const SavgolParams& params) {
  const std::size_t n = series.size();
  if (n < 3) return {series.begin(), series.end()};
  std::size_t window = params.window;
  if (window > n) window = (n % 2 == 1) ? n : n - 1;
  const std::size_t order = std::min(params.order, window - 1);
  const auto rows = savgol_projection(window, order);
  const std::size_t half = window / 2;

  std::vector<double> out(n);
  kernels::correlate(series, rows[half], std::span<double>(out).subspan(half, n - window + 1));
  for (std::size_t j = 0; j < half; ++j) {
    double head = 0.0, tail = 0.0;
    const std::size_t tj = window - half + j;  // positions after the centre in the last window
    for (std::size_t k = 0; k < window; ++k) {
      head += rows[j][k] * series[k];
      tail += rows[tj][k] * series[n - window + k];
    }
    out[j] = head;
    out[n - window + tj] = tail;
  }
  return out;
}

}  // namespace wayref

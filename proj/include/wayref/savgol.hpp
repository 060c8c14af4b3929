#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wayref {

struct SavgolParams {
  std::size_t window = 21;  // odd
  std::size_t order = 3;
};

// Least-squares smoothing weights: row j gives the fitted value at window
// position j as a weighted sum of the window samples.
std::vector<std::vector<double>> savgol_projection(std::size_t window, std::size_t order);

// Savitzky-Golay smoothing of a uniformly spaced series. The first and last
// window/2 outputs come from the polynomial fitted to the first/last full
// window, so polynomials up to `order` are reproduced at every position.
// Series shorter than the window use the longest odd window that fits (and
// an order below it).
std::vector<double> savgol_filter(std::span<const double> series, const SavgolParams& params = {});

}  // namespace wayref

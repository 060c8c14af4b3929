#include "wayref/splines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wayref {

namespace {

std::size_t locate(const std::vector<double>& x, double v) {
  // index k with x[k] <= v < x[k+1], clamped to [0, n-2]
  const auto it = std::upper_bound(x.begin(), x.end(), v);
  const auto k = static_cast<std::ptrdiff_t>(it - x.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(x.size()) - 2));
}

void check_abscissae(std::span<const double> x, std::span<const double> y, std::size_t min_n) {
  if (x.size() != y.size()) throw std::invalid_argument("spline: x/y size mismatch");
  if (x.size() < min_n) throw std::invalid_argument("spline: too few samples");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("spline: abscissae not strictly increasing");
}

}  // namespace

QuadraticSpline::QuadraticSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  check_abscissae(x, y, 3);
  const std::size_t n = x_.size();
  b_.resize(n - 1);
  c_.resize(n - 1);
  const double h0 = x_[1] - x_[0];
  const double f01 = (y_[1] - y_[0]) / h0;
  const double f12 = (y_[2] - y_[1]) / (x_[2] - x_[1]);
  const double f012 = (f12 - f01) / (x_[2] - x_[0]);
  double b = f01 - f012 * h0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double h = x_[j + 1] - x_[j];
    const double slope = (y_[j + 1] - y_[j]) / h;
    b_[j] = b;
    c_[j] = (slope - b) / h;
    b = 2.0 * slope - b;
  }
}

std::size_t QuadraticSpline::piece(double x) const { return locate(x_, x); }

double QuadraticSpline::operator()(double x) const {
  const std::size_t j = piece(x);
  const double t = x - x_[j];
  if (t == 0.0) return y_[j];
  if (x == x_[j + 1]) return y_[j + 1];
  return y_[j] + t * (b_[j] + t * c_[j]);
}

double QuadraticSpline::derivative(double x) const {
  const std::size_t j = piece(x);
  return b_[j] + 2.0 * c_[j] * (x - x_[j]);
}

// ---------------------------------------------------------------------------

namespace {

double end_slope(double h0, double h1, double m0, double m1) {
  double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
  if (std::signbit(d) != std::signbit(m0) || m0 == 0.0) {
    d = 0.0;
  } else if (std::signbit(m0) != std::signbit(m1) && std::abs(d) > 3.0 * std::abs(m0)) {
    d = 3.0 * m0;
  }
  return d;
}

}  // namespace

Pchip::Pchip(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  check_abscissae(x, y, 2);
  const std::size_t n = x_.size();
  d_.assign(n, 0.0);
  std::vector<double> h(n - 1), m(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    m[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  if (n == 2) {
    d_[0] = d_[1] = m[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (m[k - 1] * m[k] <= 0.0) {
      d_[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
    }
  }
  d_[0] = end_slope(h[0], h[1], m[0], m[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
}

std::size_t Pchip::piece(double x) const { return locate(x_, x); }

double Pchip::operator()(double x) const {
  const std::size_t k = piece(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y_[k] + (t3 - 2.0 * t2 + t) * h * d_[k] +
         (-2.0 * t3 + 3.0 * t2) * y_[k + 1] + (t3 - t2) * h * d_[k + 1];
}

double Pchip::derivative(double x) const {
  const std::size_t k = piece(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  return ((6.0 * t2 - 6.0 * t) * y_[k] + (-6.0 * t2 + 6.0 * t) * y_[k + 1]) / h +
         (3.0 * t2 - 4.0 * t + 1.0) * d_[k] + (3.0 * t2 - 2.0 * t) * d_[k + 1];
}

// ---------------------------------------------------------------------------

const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule = [] {
    GaussLegendre16 r{};
    constexpr int n = 16;
    for (int i = 0; i < n / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - z * z) * dp * dp);
      // map [-1, 1] -> [0, 1]
      r.x[i] = 0.5 * (1.0 - z);
      r.x[n - 1 - i] = 0.5 * (1.0 + z);
      r.w[i] = r.w[n - 1 - i] = 0.5 * w;
    }
    return r;
  }();
  return rule;
}

Vec2 HermiteSegment::point(double u) const {
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
}

Vec2 HermiteSegment::d1(double u) const {
  const double u2 = u * u;
  return (6.0 * u2 - 6.0 * u) * p0 + (3.0 * u2 - 4.0 * u + 1.0) * m0 + (-6.0 * u2 + 6.0 * u) * p1 +
         (3.0 * u2 - 2.0 * u) * m1;
}

Vec2 HermiteSegment::d2(double u) const {
  return (12.0 * u - 6.0) * p0 + (6.0 * u - 4.0) * m0 + (-12.0 * u + 6.0) * p1 + (6.0 * u - 2.0) * m1;
}

double HermiteSegment::length(double u) const {
  if (u == 0.0) return 0.0;
  const auto& gl = gauss_legendre16();
  double sum = 0.0;
  for (int i = 0; i < 16; ++i) sum += gl.w[i] * norm(d1(u * gl.x[i]));
  return sum * u;
}

double HermiteSegment::param_at_length(double s) const {
  const double total = length(1.0);
  if (s <= 0.0) return 0.0;
  if (s >= total) return 1.0;
  double lo = 0.0, hi = 1.0;
  double u = s / total;
  for (int iter = 0; iter < 60; ++iter) {
    const double f = length(u) - s;
    if (f > 0.0) hi = u; else lo = u;
    const double speed = norm(d1(u));
    double next = speed > 0.0 ? u - f / speed : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) < 1e-15) return next;
    u = next;
  }
  return u;
}

}  // namespace wayref

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wayref/geometry.hpp"

namespace wayref {

// C1 quadratic interpolating spline with knots at the data abscissae. The
// first two polynomial pieces are identical (the parabola through the first
// three samples), which fixes the one free slope.
class QuadraticSpline {
 public:
  QuadraticSpline() = default;
  // Requires >= 3 strictly increasing abscissae.
  QuadraticSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::size_t piece(double x) const;
  std::vector<double> x_, y_, b_, c_;
};

// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Butland
// weighted harmonic mean slopes, three-point shape-preserving end slopes).
// Two knots degrade to linear interpolation.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::span<const double> x, std::span<const double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::size_t piece(double x) const;
  std::vector<double> x_, y_, d_;
};

// Cubic Hermite curve on u in [0, 1].
struct HermiteSegment {
  Vec2 p0, p1, m0, m1;  // end points and parametric derivatives

  Vec2 point(double u) const;
  Vec2 d1(double u) const;
  Vec2 d2(double u) const;
  // Arc length from 0 to u (16-point Gauss-Legendre).
  double length(double u = 1.0) const;
  // Parameter at arc length s in [0, length()], by safeguarded Newton.
  double param_at_length(double s) const;
};

// 16-point Gauss-Legendre rule on [0, 1]: integral ~= sum w_i f(x_i).
struct GaussLegendre16 {
  double x[16];
  double w[16];
};
const GaussLegendre16& gauss_legendre16();

}  // namespace wayref

#pragma once

// Reference computations for the tests. Nothing here calls into the library
// beyond plain data types, so a bug in the library cannot hide in its oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

/// Central difference of f at x along coordinate i.
inline double central_diff(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> x, std::size_t i, double h = 1e-6) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double fp = f(x);
  x[i] = x0 - h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

inline std::vector<double> gradient(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x, double h = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = central_diff(f, x, i, h);
  return g;
}

/// Derivatives of a scalar function of one variable by 5-point stencils.
inline double d1(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}
inline double d2(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}
inline double d3_stencil(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 3 * h) + 8 * f(x + 2 * h) - 13 * f(x + h) + 13 * f(x - h) - 8 * f(x - 2 * h) +
          f(x - 3 * h)) /
         (8 * h * h * h);
}
/// Richardson extrapolation of the 4th-order stencil at h and h/2.
inline double d3(const std::function<double(double)>& f, double x, double h = 1e-2) {
  return (16.0 * d3_stencil(f, x, h / 2) - d3_stencil(f, x, h)) / 15.0;
}

/// Exhaustive k nearest neighbours of point q (q itself excluded), ordered by
/// (distance, index).
inline std::vector<std::pair<std::size_t, double>> brute_knn(const std::vector<double>& coords,
                                                             int d, std::size_t q, int k) {
  const std::size_t n = coords.size() / d;
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == q) continue;
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double t = coords[j * d + a] - coords[q * d + a];
      s += t * t;
    }
    all.emplace_back(s, j);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::pair<std::size_t, double>> out;
  for (int i = 0; i < k; ++i) out.emplace_back(all[i].second, std::sqrt(all[i].first));
  return out;
}

/// Classic fourth-order Runge-Kutta for y' = f(x, y) from (x0, y0) to x1.
inline double rk4(const std::function<double(double, double)>& f, double x0, double y0, double x1,
                  int steps) {
  const double h = (x1 - x0) / steps;
  double x = x0;
  double y = y0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(x, y);
    const double k2 = f(x + h / 2, y + h / 2 * k1);
    const double k3 = f(x + h / 2, y + h / 2 * k2);
    const double k4 = f(x + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    x += h;
  }
  return y;
}

/// Mean of squares, accumulated in two passes (sum of squares, then divide).
inline double mean_of_squares(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> sq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sq[i] = (a[i] - b[i]) * (a[i] - b[i]);
  long double total = 0.0L;
  for (double v : sq) total += v;
  return static_cast<double>(total / static_cast<long double>(sq.size()));
}

/// Dense forward pass of a tanh/identity MLP from explicit weight matrices.
struct DenseLayer {
  std::vector<std::vector<double>> w;  // out x in
  std::vector<double> b;
  bool tanh_act;
};

inline std::vector<double> dense_forward(const std::vector<DenseLayer>& layers,
                                         std::vector<double> x) {
  for (const auto& L : layers) {
    std::vector<double> y(L.b);
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) y[i] += L.w[i][j] * x[j];
      if (L.tanh_act) y[i] = std::tanh(y[i]);
    }
    x = std::move(y);
  }
  return x;
}

}  // namespace oracle

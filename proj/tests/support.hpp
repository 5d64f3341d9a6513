#pragma once

// Shared test helpers: an independently written clause interpreter, a
// projected-gradient maximizer for the SVM dual (oracle for the SMO solver),
// and small random problem generators.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "shapfoil/logic.hpp"
#include "shapfoil/svm.hpp"

namespace testsupport {

// Literal-by-literal interpreter kept deliberately separate from covers().
inline int naive_predict(const shapfoil::Hypothesis& h, const shapfoil::Schema& schema,
                         const shapfoil::Sample& s) {
  for (const shapfoil::Clause& c : h.clauses) {
    bool ok = true;
    for (const shapfoil::Literal& lit : c.body) {
      if (const auto* ce = std::get_if<shapfoil::CatEq>(&lit)) {
        int f = schema.feature_index(ce->feature);
        ok = std::get<std::string>(s.values[f]) == ce->value;
      } else if (const auto* ne = std::get_if<shapfoil::NegCatEq>(&lit)) {
        int f = schema.feature_index(ne->feature);
        ok = std::get<std::string>(s.values[f]) != ne->value;
      } else {
        const auto& nr = std::get<shapfoil::NumRange>(lit);
        int f = schema.feature_index(nr.feature);
        double v = std::get<double>(s.values[f]);
        ok = !(v < nr.lo) && !(v > nr.hi);
      }
      if (!ok) break;
    }
    if (ok) return +1;
  }
  return -1;
}

// Exact Euclidean projection onto {0 <= a <= C} intersected with {y.a = 0},
// via bisection on the hyperplane multiplier.
inline std::vector<double> project_dual(const std::vector<double>& v, const std::vector<int>& y,
                                        double C) {
  auto clipped = [&](double lam) {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      a[i] = std::clamp(v[i] - lam * y[i], 0.0, C);
    return a;
  };
  auto residual = [&](double lam) {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += y[i] * std::clamp(v[i] - lam * y[i], 0.0, C);
    return s;  // monotone nonincreasing in lam
  };
  double bound = C + 1.0;
  for (double x : v) bound = std::max(bound, std::abs(x) + C + 1.0);
  double lo = -bound, hi = bound;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (residual(mid) > 0 ? lo : hi) = mid;
  }
  return clipped(0.5 * (lo + hi));
}

// Projected gradient ascent on W(a) = sum(a) - 1/2 a'Qa with Q_ij =
// y_i y_j K(x_i, x_j). Brute-force reference maximizer for small problems.
inline double pgd_dual_max(const shapfoil::KernelSpec& k,
                           const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                           double C, int iters = 20000) {
  const std::size_t m = X.size();
  std::vector<std::vector<double>> Q(m, std::vector<double>(m));
  double row_max = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < m; ++j) {
      Q[i][j] = y[i] * y[j] * shapfoil::kernel_eval(k, X[i], X[j]);
      row += std::abs(Q[i][j]);
    }
    row_max = std::max(row_max, row);
  }
  const double step = 1.0 / row_max;

  std::vector<double> a(m, 0.0), grad(m);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      grad[i] = 1.0;
      for (std::size_t j = 0; j < m; ++j) grad[i] -= Q[i][j] * a[j];
    }
    std::vector<double> moved(m);
    for (std::size_t i = 0; i < m; ++i) moved[i] = a[i] + step * grad[i];
    a = project_dual(moved, y, C);
  }
  double w = 0;
  for (std::size_t i = 0; i < m; ++i) {
    w += a[i];
    for (std::size_t j = 0; j < m; ++j) w -= 0.5 * a[i] * Q[i][j] * a[j];
  }
  return w;
}

// Random small two-class problem; both labels guaranteed present.
inline void random_problem(std::mt19937_64& rng, std::vector<std::vector<double>>& X,
                           std::vector<int>& y, int max_points = 12) {
  std::uniform_int_distribution<int> m_dist(4, max_points), d_dist(2, 4), coin(0, 1);
  std::normal_distribution<double> g(0.0, 1.5);
  const int m = m_dist(rng), d = d_dist(rng);
  X.assign(m, {});
  y.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    X[i].resize(d);
    for (int j = 0; j < d; ++j) X[i][j] = g(rng);
    y[i] = coin(rng) ? 1 : -1;
  }
  y[0] = 1;
  y[1] = -1;
}

}  // namespace testsupport

#include "spr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spr::opt {

ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tol, int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarMinimum best{c, fc};
  if (fd < best.value) best = {d, fd};
  // The endpoints can win on monotone brackets.
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx < best.value) best = {x, fx};
  }
  return best;
}

namespace {

struct Simplex {
  std::vector<std::vector<double>> points;
  std::vector<double> values;
};

}  // namespace

VectorMinimum nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  VectorMinimum result{start, f(start), 1};
  if (n == 0) return result;

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  for (int round = 0; round <= options.restarts; ++round) {
    Simplex s;
    s.points.push_back(result.x);
    s.values.push_back(result.value);
    for (std::size_t i = 0; i < n; ++i) {
      auto p = result.x;
      const double h = options.initial_step * (round == 0 ? 1.0 : 0.25) *
                       std::max(1.0, std::abs(p[i]));
      p[i] += h;
      s.values.push_back(f(p));
      s.points.push_back(std::move(p));
      ++result.evaluations;
    }

    std::vector<std::size_t> order(n + 1);
    while (result.evaluations < options.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
      const auto& best = s.points[order.front()];
      const std::size_t worst = order.back();
      const std::size_t second = order[n - 1];

      double spread = 0.0;
      for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          spread = std::max(spread, std::abs(s.points[order[k]][i] - best[i]));
      if (spread < options.x_tolerance ||
          std::abs(s.values[worst] - s.values[order.front()]) < options.f_tolerance)
        break;

      std::vector<double> centroid(n, 0.0);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += s.points[order[k]][i] / double(n);

      auto along = [&](double t) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i)
          p[i] = centroid[i] + t * (s.points[worst][i] - centroid[i]);
        return p;
      };

      auto reflected = along(-alpha);
      const double fr = f(reflected);
      ++result.evaluations;
      if (fr < s.values[order.front()]) {
        auto expanded = along(-alpha * gamma);
        const double fe = f(expanded);
        ++result.evaluations;
        if (fe < fr) {
          s.points[worst] = std::move(expanded);
          s.values[worst] = fe;
        } else {
          s.points[worst] = std::move(reflected);
          s.values[worst] = fr;
        }
        continue;
      }
      if (fr < s.values[second]) {
        s.points[worst] = std::move(reflected);
        s.values[worst] = fr;
        continue;
      }
      const bool outside = fr < s.values[worst];
      auto contracted = along(outside ? -alpha * rho : rho);
      const double fc = f(contracted);
      ++result.evaluations;
      if (fc < std::min(fr, s.values[worst])) {
        s.points[worst] = std::move(contracted);
        s.values[worst] = fc;
        continue;
      }
      // shrink toward the best vertex
      const auto anchor = s.points[order.front()];
      for (std::size_t k = 1; k <= n; ++k) {
        auto& p = s.points[order[k]];
        for (std::size_t i = 0; i < n; ++i) p[i] = anchor[i] + sigma * (p[i] - anchor[i]);
        s.values[order[k]] = f(p);
        ++result.evaluations;
      }
    }

    const auto it = std::min_element(s.values.begin(), s.values.end());
    const std::size_t k = static_cast<std::size_t>(it - s.values.begin());
    if (*it <= result.value) {
      result.value = *it;
      result.x = s.points[k];
    }
  }
  return result;
}

}  // namespace spr::opt

#include "spr/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spr/parallel.hpp"

namespace spr::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

/// Euclidean-orthonormal frame (e1, e2) of a 2D subspace.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> orthonormal_frame(const Subspace& e) {
  require(e.dimension() == 2, ErrorKind::dimension, "grid oracle requires a 2-dimensional subspace");
  const std::size_t m = e.ambient().atom_count();
  Eigen::MatrixXcd a(m, 2);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < m; ++i) a(i, j) = e.basis()[j][i];
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, 2);
  return {q.col(0), q.col(1)};
}

/// Unit grid points on S_E together with the Lipschitz data of the
/// parametrization.
struct UnitGrid {
  std::size_t m = 0;
  std::size_t count = 0;
  std::vector<Scalar> values;    // count x m, row-major, unit vectors
  std::vector<double> modulus;   // count x m
  double lipschitz = 0.0;        // L = 2 Nmax / Nmin
  double displacement = 0.0;     // coefficient-space covering radius d
};

UnitGrid build_grid(const Subspace& e, double step, bool complex_field) {
  require(std::isfinite(step) && step > 0.0, ErrorKind::domain, "grid step must be positive");
  const auto [e1, e2] = orthonormal_frame(e);
  const AtomSpace& space = e.ambient();
  UnitGrid grid;
  grid.m = space.atom_count();

  std::vector<std::pair<Scalar, Scalar>> coeffs;
  if (!complex_field) {
    const std::size_t k = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(kPi / step)));
    const double s = kPi / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) coeffs.emplace_back(std::cos(i * s), std::sin(i * s));
    grid.displacement = s / 2.0;
  } else {
    const std::size_t ka = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(kPi / 2 / step)));
    const std::size_t kb = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(2 * kPi / step)));
    const double sa = kPi / 2 / static_cast<double>(ka);
    const double sb = 2 * kPi / static_cast<double>(kb);
    coeffs.emplace_back(1.0, 0.0);
    for (std::size_t i = 1; i <= ka; ++i)
      for (std::size_t j = 0; j < kb; ++j)
        coeffs.emplace_back(std::cos(i * sa), std::polar(std::sin(i * sa), j * sb));
    grid.displacement = (sa + sb) / 2.0;
  }

  grid.count = coeffs.size();
  grid.values.resize(grid.count * grid.m);
  grid.modulus.resize(grid.count * grid.m);
  std::vector<double> norms(grid.count);
  std::vector<double> buffer(grid.m);
  for (std::size_t k = 0; k < grid.count; ++k) {
    const auto [c1, c2] = coeffs[k];
    for (std::size_t i = 0; i < grid.m; ++i) {
      const Scalar z = c1 * e1(static_cast<Eigen::Index>(i)) + c2 * e2(static_cast<Eigen::Index>(i));
      grid.values[k * grid.m + i] = complex_field ? z : Scalar(z.real(), 0.0);
      buffer[i] = std::abs(grid.values[k * grid.m + i]);
    }
    norms[k] = space.modulus_norm(buffer);
  }
  const double grid_max = *std::max_element(norms.begin(), norms.end());
  const double grid_min = *std::min_element(norms.begin(), norms.end());
  const double d = grid.displacement;
  require(d < 1.0, ErrorKind::domain, "grid step too coarse");
  const double n_max = grid_max / (1.0 - d);
  const double n_min = grid_min - n_max * d;
  require(n_min > 0.0, ErrorKind::numerical,
          "grid step too coarse for the conditioning of the frame");
  grid.lipschitz = 2.0 * n_max / n_min;

  for (std::size_t k = 0; k < grid.count; ++k) {
    for (std::size_t i = 0; i < grid.m; ++i) {
      grid.values[k * grid.m + i] /= norms[k];
      grid.modulus[k * grid.m + i] = std::abs(grid.values[k * grid.m + i]);
    }
  }
  return grid;
}

LatticeVector grid_vector(const Subspace& e, const UnitGrid& grid, std::size_t k) {
  std::vector<Scalar> z(grid.values.begin() + static_cast<std::ptrdiff_t>(k * grid.m),
                        grid.values.begin() + static_cast<std::ptrdiff_t>((k + 1) * grid.m));
  return LatticeVector(e.ambient_ptr(), std::move(z));
}

}  // namespace

GridDisjointness grid_disjointness_min(const Subspace& e, double step) {
  const bool complex_field = e.field() == Field::complex;
  const UnitGrid grid = build_grid(e, step, complex_field);
  const AtomSpace& space = e.ambient();
  const std::size_t m = grid.m;

  struct RowBest {
    double value = std::numeric_limits<double>::infinity();
    std::size_t partner = 0;
  };
  std::vector<RowBest> rows(grid.count);
  parallel_for(grid.count, [&](std::size_t k) {
    std::vector<double> meet(m);
    const double* a = &grid.modulus[k * m];
    RowBest best;
    for (std::size_t l = k; l < grid.count; ++l) {
      const double* b = &grid.modulus[l * m];
      for (std::size_t i = 0; i < m; ++i) meet[i] = std::min(a[i], b[i]);
      const double v = space.modulus_norm(meet);
      if (v < best.value) best = {v, l};
    }
    rows[k] = best;
  });

  std::size_t arg = 0;
  for (std::size_t k = 1; k < grid.count; ++k)
    if (rows[k].value < rows[arg].value) arg = k;

  GridDisjointness out;
  out.grid_min = rows[arg].value;
  out.lipschitz = grid.lipschitz;
  out.step = step;
  out.error_bound = 2.0 * grid.lipschitz * grid.displacement;
  out.certified_lower = out.grid_min - out.error_bound;
  out.method = complex_field ? "certified-coarse" : "grid-certified";
  out.f = grid_vector(e, grid, arg);
  out.g = grid_vector(e, grid, rows[arg].partner);
  return out;
}

GridSpr grid_spr_sup(const Subspace& e, double step) {
  const bool complex_field = e.field() == Field::complex;
  const UnitGrid grid = build_grid(e, step, complex_field);
  const AtomSpace& space = e.ambient();
  const std::size_t m = grid.m;
  const double zero_gap = 10.0 * std::numeric_limits<double>::epsilon();

  struct RowBest {
    double value = 0.0;
    bool pr_failure = false;
    std::size_t partner = 0;
    bool sum_difference = false;
  };
  std::vector<RowBest> rows(grid.count);

  auto score = [&](double numerator, double gap, RowBest& best, std::size_t l, bool sd) {
    if (gap < zero_gap) {
      if (numerator > 1e-12 && !best.pr_failure) best = {std::numeric_limits<double>::infinity(), true, l, sd};
      return;
    }
    const double ratio = numerator / gap;
    if (!best.pr_failure && ratio > best.value) best = {ratio, false, l, sd};
  };

  if (!complex_field) {
    parallel_for(grid.count, [&](std::size_t k) {
      std::vector<double> plus(m), minus(m), gap(m);
      RowBest best;
      for (std::size_t l = k; l < grid.count; ++l) {
        const Scalar* a = &grid.values[k * m];
        const Scalar* b = &grid.values[l * m];
        // the grid pair itself
        for (std::size_t i = 0; i < m; ++i) {
          const double x = a[i].real(), y = b[i].real();
          plus[i] = std::abs(x + y);
          minus[i] = std::abs(x - y);
          gap[i] = std::abs(std::abs(x) - std::abs(y));
        }
        score(std::min(space.modulus_norm(plus), space.modulus_norm(minus)), space.modulus_norm(gap),
              best, l, false);
        // the pair (a + b, a - b): |2a| and |2b| give phase distance 2, the gap is 2 |a| meet |b|
        const double* ma = &grid.modulus[k * m];
        const double* mb = &grid.modulus[l * m];
        for (std::size_t i = 0; i < m; ++i) gap[i] = 2.0 * std::min(ma[i], mb[i]);
        score(2.0, space.modulus_norm(gap), best, l, true);
      }
      rows[k] = best;
    });
  } else {
    parallel_for(grid.count, [&](std::size_t k) {
      RowBest best;
      const LatticeVector a = grid_vector(e, grid, k);
      for (std::size_t l = k; l < grid.count; ++l) {
        const LatticeVector b = grid_vector(e, grid, l);
        score(phase_distance(a, b).distance, modulus_gap(a, b), best, l, false);
        const LatticeVector x = a + b, y = a - b;
        score(phase_distance(x, y).distance, modulus_gap(x, y), best, l, true);
      }
      rows[k] = best;
    });
  }

  std::size_t arg = 0;
  for (std::size_t k = 1; k < grid.count; ++k) {
    const auto& r = rows[k];
    const auto& b = rows[arg];
    if ((r.pr_failure && !b.pr_failure) || (r.pr_failure == b.pr_failure && r.value > b.value)) arg = k;
  }
  GridSpr out;
  out.value = rows[arg].value;
  out.pr_failure = rows[arg].pr_failure;
  out.step = step;
  LatticeVector a = grid_vector(e, grid, arg);
  LatticeVector b = grid_vector(e, grid, rows[arg].partner);
  if (rows[arg].sum_difference) {
    out.f = a + b;
    out.g = a - b;
  } else {
    out.f = a;
    out.g = b;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double density(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi); }

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = density(lm), frm = density(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace

double normal_cdf(double x) {
  if (x == 0.0) return 0.5;
  const double lo = std::min(0.0, x), hi = std::max(0.0, x);
  const double fa = density(lo), fb = density(hi), fm = density(0.5 * (lo + hi));
  const double integral = adaptive_simpson(lo, hi, fa, fm, fb, simpson(lo, hi, fa, fm, fb), 1e-14, 50);
  return x > 0 ? 0.5 + integral : 0.5 - integral;
}

double quantile(Distribution dist, double prob) {
  require(dist == Distribution::normal, ErrorKind::domain, "unsupported distribution");
  require(prob > 0.0 && prob < 1.0, ErrorKind::domain, "quantile requires prob in (0, 1)");
  if (prob == 0.5) return 0.0;
  double lo = -40.0, hi = 40.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < prob) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace spr::oracle

#pragma once

// Brute-force ground truth for two-dimensional subspaces, plus the normal
// quantile used to calibrate the random-span constructions. Nothing in here
// calls the sampling searches; the searches are checked against this.

#include <optional>
#include <string>

#include "spr/space.hpp"

namespace spr::oracle {

struct GridDisjointness {
  double certified_lower = 0.0;  ///< grid_min - error_bound; a lower bound for eps*
  double grid_min = 0.0;         ///< smallest meet found; an upper bound for eps*
  double error_bound = 0.0;      ///< Lipschitz constant times step
  double lipschitz = 0.0;
  double step = 0.0;
  std::string method;            ///< "grid-certified" or "certified-coarse"
  std::optional<LatticeVector> f, g;  ///< unit argmin pair
};

/// Exhaustive minimum of || |f| meet |g| || over unit pairs of a 2D subspace.
/// Real field: one angle per vector, `step` in radians. Complex field: two
/// angles per vector (magnitude split and relative phase).
GridDisjointness grid_disjointness_min(const Subspace& e, double step);

struct GridSpr {
  double value = 0.0;       ///< sup of phase_distance / modulus_gap on the grid (+inf on PR failure)
  bool pr_failure = false;  ///< a pair with |f| = |g| but f != lambda g was hit
  double step = 0.0;
  std::optional<LatticeVector> f, g;
};

/// Grid supremum of the stability ratio over pairs of a 2D subspace. Both the
/// grid pairs themselves and their sum/difference pairs (f+g, f-g) are scored,
/// which covers the pairs of equal norm where the supremum lives.
GridSpr grid_spr_sup(const Subspace& e, double step);

/// Default grid steps.
inline constexpr double kRealGridStep = 1e-3;
inline constexpr double kComplexGridStep = 0.05;
inline constexpr double kComplexSprGridStep = 0.2;

enum class Distribution { normal };

/// Standard normal CDF by adaptive Simpson integration of the density.
double normal_cdf(double x);

/// Inverse CDF by bisection on normal_cdf.
double quantile(Distribution dist, double prob);

}  // namespace spr::oracle

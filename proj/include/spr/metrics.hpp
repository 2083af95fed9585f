#pragma once

// Quantities that measure how well a subspace does stable phase retrieval:
// the almost-disjointness constant eps*, lower bounds for the optimal
// stability constant, and the auxiliary geometric quantities (norm
// equivalence, joint level sets, non-squareness).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spr/oracle.hpp"
#include "spr/space.hpp"

namespace spr {

/// Sampling parameters shared by the stochastic searches.
struct SearchBudget {
  std::size_t pairs = 20000;       ///< random unit pairs drawn
  std::size_t refine_starts = 10;  ///< best candidates handed to Nelder-Mead
  int refine_evaluations = 600;    ///< per refinement start
  /// Grid step for 2D certification (radians); <= 0 disables the grid path.
  /// Complex subspaces fall back to oracle::kComplexGridStep when this is finer.
  double grid_step = oracle::kRealGridStep;
};

struct WitnessRecord {
  std::string role;  ///< "epsilon", "spr", "grid-epsilon", ...
  LatticeVector f;
  LatticeVector g;
  double value = 0.0;
};

struct SPRCertificate {
  double epsilon_upper = 1.0;                 ///< smallest meet of a found unit pair
  std::optional<double> epsilon_lower;        ///< grid-certified lower bound (2D only)
  double spr_lower = 1.0;                     ///< largest stability ratio of a found pair
  std::optional<std::pair<double, double>> spr_interval;  ///< [1/eps_upper, 2/eps_lower]
  std::vector<WitnessRecord> witnesses;
  std::string method = "sampled";             ///< "sampled", "grid-certified", "certified-coarse"
  double tolerance = 0.0;                     ///< grid error bound when certified
  std::uint64_t seed = 0;
  SearchBudget budget;
  bool pr_failure = false;                    ///< a pair with |f| = |g|, f != lambda g was found
};

struct HolderParams {
  double gamma = 1.0;
  double c_holder = 1.0;
};

/// Upper bound eps_upper from sampled + refined unit pairs; in dimension 2 the
/// grid oracle also fills eps_lower. spr_lower is seeded with the ratio of
/// the sum/difference pair of the best witness.
SPRCertificate disjointness_constant(const Subspace& e, const SearchBudget& budget, std::uint64_t seed);

struct SprLowerBound {
  double value = 0.0;  ///< +inf when PR fails on a found pair
  bool pr_failure = false;
  std::optional<LatticeVector> f, g;
};

/// sup over searched pairs of phase_distance(f, g) / || |f| - |g| ||.
SprLowerBound spr_constant_lower(const Subspace& e, const SearchBudget& budget, std::uint64_t seed);

/// disjointness_constant + spr_constant_lower (+ grid sup in 2D), merged.
SPRCertificate certify(const Subspace& e, const SearchBudget& budget, std::uint64_t seed);

struct SandwichReport {
  bool pass = false;
  double lower_bound = 0.0;  ///< 1/eps_upper - tol
  double upper_bound = 0.0;  ///< 2/eps_lower + tol
  double lower_slack = 0.0;  ///< c_lower - lower_bound
  double upper_slack = 0.0;  ///< upper_bound - c_lower
};

/// Checks 1/eps_upper - tol <= c_lower <= 2/eps_lower + tol.
SandwichReport sandwich_check(const SPRCertificate& cert, double c_lower, double tol = 1e-2);

/// sqrt(2) * (sqrt(8) * C)^(1/gamma): the stability constant implied by
/// gamma-Holder stable phase retrieval with constant C.
double holder_to_spr(const HolderParams& h);

struct NormRatioBounds {
  double lo = 1.0;
  double hi = 1.0;
};

/// Extreme values of ||x||_{L_p} / ||x||_{L_q} over E (probability weights).
NormRatioBounds norm_equivalence_bounds(const Subspace& e, double p, double q, const SearchBudget& budget,
                                        std::uint64_t seed);

/// inf over unit pairs of mu{ |x| >= alpha ||x||, |y| >= alpha ||y|| }.
double joint_level_mass(const Subspace& e, double alpha, const SearchBudget& budget, std::uint64_t seed);

/// inf over unit pairs of max(0, 2 - min(||f+g||, ||f-g||)).
double nonsquare_constant(const Subspace& e, const SearchBudget& budget, std::uint64_t seed);

struct InterpRow {
  double r = 1.0;
  SPRCertificate certificate;
  bool epsilon_positive = false;
  bool spr_finite = false;
  std::optional<double> chain_bound;  ///< constant predicted from the q-certificate
  bool chain_respected = true;
};

/// Re-certifies E under L_r for each r in r_list (all within [1, p]). When
/// spr_constant_q is finite, also evaluates the constant the q-certificate
/// predicts at each r and checks the observed ratios stay below it.
std::vector<InterpRow> interp_extrap_report(const Subspace& e, double p, double q,
                                            const std::vector<double>& r_list, double spr_constant_q,
                                            const SearchBudget& budget, std::uint64_t seed);

}  // namespace spr

#pragma once

// One-sided Hausdorff distance between subspaces and the stability
// constants it controls.

#include <cstdint>
#include <optional>
#include <string>

#include "spr/space.hpp"

namespace spr {

struct HausdorffBudget {
  std::size_t samples = 256;     ///< random unit vectors of F
  std::size_t refine_starts = 3;
  int refine_evaluations = 60;   ///< outer Nelder-Mead evaluations per start
};

/// ||x - P_E x|| minimized over E-coefficients (Nelder-Mead from the
/// Euclidean projection).
double distance_to_subspace(const LatticeVector& x, const Subspace& e);

/// Estimate of sup over unit x in F of dist(x, E). Sampling cannot certify a
/// supremum, so this is a lower estimate.
double one_sided_hausdorff(const Subspace& e, const Subspace& f, const HausdorffBudget& budget = {},
                           std::uint64_t seed = 0);

/// 1 / (2 sqrt(2) (C + 1)).
double perturbation_threshold(double c);

/// C' with 1/C' = (1/C)(1/sqrt(2) - 2d) - 2d, or nullopt when d is not below
/// the threshold.
std::optional<double> perturbed_spr_bound(double c, double d);

struct PerturbationReport {
  double d1h = 0.0;
  double threshold = 0.0;
  std::optional<double> c_prime;  ///< nullopt means inadmissible
};

PerturbationReport perturbation_report(const Subspace& e, const Subspace& f, double c,
                                       const HausdorffBudget& budget = {}, std::uint64_t seed = 0);

struct BasisPerturbationReport {
  double gamma = 0.0;
  double epsilon = 0.0;
  bool hypothesis_holds = true;  ///< epsilon <= gamma / 4
  double min_meet = 0.0;         ///< smallest meet over the sampled unit pairs of F
  double bound = 0.0;            ///< gamma / 2 - slack
  std::optional<bool> passed;    ///< unset when the hypothesis fails
  std::string warning;
  Subspace perturbed;
};

/// Replaces each normalized column e_i by cos(phi) e_i + sin(phi) d_i with d_i
/// a fresh unit Gaussian column orthogonal to e_i and 2 sin(phi / 2) =
/// epsilon, so ||e_i - f_i|| = epsilon, then samples the meet on F.
BasisPerturbationReport basis_perturbation_check(const Subspace& e, double gamma, double epsilon,
                                                 std::uint64_t seed = 0, std::size_t pairs = 1000,
                                                 double slack = 0.05);

}  // namespace spr

#pragma once

// Tightening of a pair (f, g) into an almost orthogonal pair (f', g') on
// span{f, g}, using a Hilbert norm that is sandwiched between ||.|| and
// K ||.|| on the span.

#include <array>
#include <Eigen/Dense>

#include "spr/space.hpp"

namespace spr {

/// Coordinates with respect to (f, g).
using Coords = std::array<Scalar, 2>;

struct HilbertSurrogate {
  /// <x, y>_H = c_y^* gram c_x in (f, g) coordinates.
  Eigen::Matrix2cd gram = Eigen::Matrix2cd::Identity();
  double k_factor = 1.0;
  /// max ||x||_H / ||x|| found on the span before the safety slack.
  double measured_max = 1.0;

  Scalar inner(const Coords& x, const Coords& y) const;
  double norm(const Coords& x) const;
};

/// Hilbert norm on span{f, g} with ||x|| <= ||x||_H <= k_factor ||x||. For an
/// L_2 ambient this is the native inner product (k_factor = 1); otherwise it
/// is sqrt(2) times the minimum-volume ellipse around the sampled unit sphere.
HilbertSurrogate hilbert_surrogate(const LatticeVector& f, const LatticeVector& g);

struct WitnessPair {
  LatticeVector f_prime;
  LatticeVector g_prime;
  double k_factor = 1.0;
  double r_star = 0.0;
  Scalar lambda{1.0, 0.0};  ///< phase applied to g before the path
  Coords f_coords{};        ///< f' in (f, g) coordinates
  Coords g_coords{};
  HilbertSurrogate surrogate;
};

/// Smaller root of a (r^2 - r) + c = 0, clamped to [0, 1/2].
double tightening_root(double sum_norm_sq, double inner_fg);

/// f' = f - R(f + lambda g), g' = lambda g - R(f + lambda g) with R chosen so
/// that <f', g'>_H = 0. Throws surrogate_quality if a postcondition fails.
WitnessPair tighten(const LatticeVector& f, const LatticeVector& g);

struct WitnessReport {
  double slack_phase = 0.0;  ///< K pd(f', g') - pd(f, g)
  double slack_norm = 0.0;  ///< K pd(f', g') - sqrt(||f'||^2 + ||g'||^2)
  double slack_modulus = 0.0;  ///< || |f| - |g| || - || |f'| - |g'| ||
  bool pass = false;      ///< every slack >= -tol
};

WitnessReport verify_witness(const WitnessPair& w, const LatticeVector& f, const LatticeVector& g,
                             double tol = 1e-8);

/// Minimum-volume origin-centred ellipsoid {x : x^T A x <= 1} containing the
/// given points (columns). Todd-Yildirim ascent with away steps.
Eigen::MatrixXd min_volume_ellipsoid(const Eigen::MatrixXd& points, double tol = 1e-9,
                                     int max_iterations = 200000);

}  // namespace spr

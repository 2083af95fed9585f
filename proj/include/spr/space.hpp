#pragma once

// Finite models of Banach lattices: a set of weighted atoms, an absolute norm
// on functions over those atoms, and the lattice operations (modulus, meet)
// that the stability quantities are built from.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spr/error.hpp"

namespace spr {

using Scalar = std::complex<double>;

enum class Field { real, complex };

struct LpNorm {
  double p = 2.0;
  bool operator==(const LpNorm&) const = default;
};

/// The p = infinity case: max of the moduli, weights ignored.
struct SupNorm {
  bool operator==(const SupNorm&) const = default;
};

/// Lorentz L_{p,q} norm of a step function, evaluated through the decreasing
/// rearrangement: (sum_k (x*_k)^q (W_k^{q/p} - W_{k-1}^{q/p}))^{1/q} with W_k
/// the cumulative mass of the k largest atoms. Coincides with L_p at q = p;
/// satisfies the triangle inequality for q <= p.
struct LorentzNorm {
  double p = 2.0;
  double q = 2.0;
  bool operator==(const LorentzNorm&) const = default;
};

/// ||x|| = max_k sum_i a_{k,i} |x_i| over a finite family of nonnegative
/// coefficient vectors a_k.
struct PolyhedralNorm {
  std::vector<std::vector<double>> functionals;
  bool operator==(const PolyhedralNorm&) const = default;
};

using NormSpec = std::variant<LpNorm, SupNorm, LorentzNorm, PolyhedralNorm>;

std::string describe(const NormSpec& norm);

/// Atoms with positive masses plus the norm placed on functions over them.
class AtomSpace {
 public:
  AtomSpace(std::vector<double> weights, NormSpec norm, Field field = Field::real);

  /// `atoms` atoms of equal mass `total_mass / atoms`.
  static std::shared_ptr<const AtomSpace> uniform(std::size_t atoms, NormSpec norm,
                                                  Field field = Field::real,
                                                  double total_mass = 1.0);

  std::size_t atom_count() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  const NormSpec& norm_spec() const noexcept { return norm_; }
  Field field() const noexcept { return field_; }
  double total_mass() const noexcept { return total_mass_; }

  bool is_probability(double tol = 1e-12) const noexcept;
  void require_probability(const std::string& context) const;

  /// Norm of a function given its (nonnegative) modulus. Every norm here is
  /// absolute, so this is the only evaluation path.
  double modulus_norm(std::span<const double> modulus) const;

  std::shared_ptr<const AtomSpace> with_norm(NormSpec norm) const;

  bool operator==(const AtomSpace& other) const;

 private:
  std::vector<double> weights_;
  NormSpec norm_;
  Field field_;
  double total_mass_ = 0.0;
  // Lorentz: W_k^{q/p} is recomputed per call since the rearrangement changes.
};

using SpacePtr = std::shared_ptr<const AtomSpace>;

bool same_space(const AtomSpace& a, const AtomSpace& b);

class LatticeVector {
 public:
  LatticeVector(SpacePtr space, std::vector<Scalar> entries);
  static LatticeVector from_real(SpacePtr space, std::span<const double> entries);

  const AtomSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const Scalar> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const Scalar& operator[](std::size_t i) const { return entries_[i]; }

  std::vector<double> modulus() const;
  std::vector<double> real_parts() const;
  bool has_real_entries(double tol = 0.0) const;

  double norm() const;

  LatticeVector operator+(const LatticeVector& other) const;
  LatticeVector operator-(const LatticeVector& other) const;
  LatticeVector operator-() const;
  LatticeVector scaled(Scalar factor) const;
  /// The vector rescaled to unit norm; throws on the zero vector.
  LatticeVector normalized() const;

 private:
  SpacePtr space_;
  std::vector<Scalar> entries_;
};

inline LatticeVector operator*(Scalar factor, const LatticeVector& x) { return x.scaled(factor); }
inline LatticeVector operator*(double factor, const LatticeVector& x) { return x.scaled(factor); }

void require_same_space(const LatticeVector& f, const LatticeVector& g);

double norm(const LatticeVector& x);

/// ||  |f| meet |g|  ||
double meet_norm(const LatticeVector& f, const LatticeVector& g);

/// ||  |f| - |g|  ||
double modulus_gap(const LatticeVector& f, const LatticeVector& g);

struct PhaseDistance {
  double distance = 0.0;
  Scalar minimizer{1.0, 0.0};
  /// Lipschitz bound on the error of the coarse grid stage, ||g|| * step / 2
  /// (zero for real scalars where the minimum is exact).
  double grid_error_bound = 0.0;
};

/// inf over unimodular lambda of ||f - lambda g||. Real field: exact over
/// {+1, -1}. Complex field: 720-point angle grid, then golden-section
/// refinement around the best grid angle.
PhaseDistance phase_distance(const LatticeVector& f, const LatticeVector& g);

inline constexpr int kPhaseGridPoints = 720;

/// An ordered, linearly independent family of vectors in one ambient space.
class Subspace {
 public:
  Subspace(SpacePtr ambient, std::vector<LatticeVector> basis);

  std::size_t dimension() const noexcept { return basis_.size(); }
  const AtomSpace& ambient() const noexcept { return *ambient_; }
  const SpacePtr& ambient_ptr() const noexcept { return ambient_; }
  std::span<const LatticeVector> basis() const noexcept { return basis_; }
  Field field() const noexcept { return ambient_->field(); }

  LatticeVector combine(std::span<const Scalar> coefficients) const;
  LatticeVector combine_real(std::span<const double> coefficients) const;

  /// Same basis entries placed in a re-normed copy of the ambient space.
  Subspace with_norm(NormSpec norm) const;
  /// Every basis vector multiplied by the matching positive factor.
  Subspace rescaled(std::span<const double> factors) const;

 private:
  SpacePtr ambient_;
  std::vector<LatticeVector> basis_;
};

/// Relative singular-value threshold for linear independence.
inline constexpr double kIndependenceTolerance = 1e-10;

/// sigma_min / sigma_max of the (Euclidean) atom-by-basis matrix.
double relative_min_singular_value(std::span<const LatticeVector> vectors);

}  // namespace spr

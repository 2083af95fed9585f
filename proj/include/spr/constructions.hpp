#pragma once

// Explicit subspace families: random Gaussian and q-stable spans, the
// Rademacher-plus-spike spaces, the phase-retrieving but unstable sup-norm
// family, the scattered C(K) basis, the three-dimensional polyhedral example
// and sup-norm embeddings through norming functionals.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spr/space.hpp"

namespace spr {

/// m uniform probability atoms, n columns of iid standard normal samples.
Subspace gaussian_span(std::size_t n, std::size_t m, std::uint64_t seed, NormSpec norm = LpNorm{2.0});

/// beta with P(|N(0,1)| >= beta) = 3/4, i.e. the 0.625 normal quantile.
double gaussian_beta();

/// One symmetric q-stable draw with characteristic function exp(-|t|^q)
/// (Chambers-Mallows-Stuck).
double stable_sample(double q, std::mt19937_64& rng);

/// m uniform probability atoms, n columns of iid q-stable samples, L_p norm.
/// The columns only lie in L_p for p < q; see q_stable_integrable.
Subspace q_stable_span(double q, std::size_t n, std::size_t m, std::uint64_t seed, double p = 1.0);
bool q_stable_integrable(double p, double q);

/// [0, 2] split into 2 * resolution atoms of mass 1/resolution, L_p norm.
/// g_j = r_j on [0, 1] plus 2^{j/p} on [1 + 2^-j, 1 + 2^-j+1).
Subspace rademacher_spike(double p, std::size_t n, std::size_t resolution);
Subspace rademacher_spike_l2(std::size_t n, std::size_t resolution);

/// Cantor pairing (i + j)(i + j + 1)/2 + j and its symmetrization.
std::uint64_t cantor_pair(std::uint64_t i, std::uint64_t j);
std::uint64_t cantor_psi(std::uint64_t i, std::uint64_t j);

/// Sup-norm space with one atom u_i per index and one atom v_{ij} per pair;
/// f_i = u_i + sum_{j != i} 2^{-4 phi(i, j)} v_{ij} (indices from 1).
Subspace pr_not_spr(std::size_t n);
/// Atom index of v_{ij} (1-based i != j) in pr_not_spr(n).
std::size_t pr_pair_atom(std::size_t n, std::size_t i, std::size_t j);

/// Finite model of the scattered C(K) basis x^(1..n) (sup norm).
Subspace scattered_ck_basis(std::size_t n);

struct Example3D {
  Subspace space;  ///< R^3 with max{|x|, |y|, (|x| + |y| + |z|)/2}, standard basis
  std::vector<std::array<double, 3>> extreme_points;  ///< the 12 dual vertices
};
Example3D example_3d();

struct ExtremePointBound {
  double value = 0.0;
  std::array<double, 3> functional{};
};
/// max over the 12 dual vertices e* of |e*(x)| meet |e*(y)| for unit x, y.
ExtremePointBound extreme_point_bound(const LatticeVector& x, const LatticeVector& y);

/// The 3D example inside a sup-norm space over 6 dual vertices (one per
/// +- pair), an isometric lattice embedding.
Subspace example_3d_embedded();

/// Coefficients c with f(x) = sum_i c_i x_i.
using Functional = std::vector<Scalar>;

Scalar evaluate(const Functional& f, const LatticeVector& x);

/// sup { |f(x)| : ||x|| <= 1 } for the ambient norm. Polyhedral norms are
/// handled by vertex enumeration (small atom counts only); Lorentz norms are
/// not supported.
double dual_norm(const AtomSpace& space, const Functional& f);

/// Unit functional with |f(x)| and |f(y)| both >= 1/5 for unit x, y.
Functional supporting_functional(const LatticeVector& x, const LatticeVector& y);

struct SupEmbedding {
  Subspace image;                  ///< J(E) inside a sup-norm space over the net
  std::vector<std::vector<Scalar>> net;  ///< functionals on E-coefficients
  double delta = 0.0;
  double norming = 0.0;            ///< observed min ||Jx|| / ||x||
};

/// J x = (f_i(x))_i over a delta-net of the dual sphere of E, delta = 1/net_size.
/// E must span its ambient space (square basis) so the dual norm is exact.
SupEmbedding linfty_spr_embed(const Subspace& e, std::size_t net_size, std::uint64_t seed = 0);

struct ConstructionRecipe {
  std::string variant;  ///< gaussian, q-stable, rademacher-spike, rademacher-spike-l2,
                        ///< pr-not-spr, scattered-ck, threed, threed-embedded
  std::size_t n = 3;
  std::size_t m = 0;
  std::size_t resolution = 0;
  double p = 2.0;
  double q = 1.5;
  std::uint64_t seed = 0;
};

Subspace build(const ConstructionRecipe& recipe);

}  // namespace spr

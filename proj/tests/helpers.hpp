#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "spr/space.hpp"

namespace spr::test {

inline std::vector<double> gaussian_vector(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(m);
  for (auto& x : v) x = g(rng);
  return v;
}

// n random real columns in the given m-atom space
inline Subspace random_subspace(const SpacePtr& space, std::size_t n, std::mt19937_64& rng) {
  std::vector<LatticeVector> basis;
  for (std::size_t j = 0; j < n; ++j)
    basis.push_back(LatticeVector::from_real(space, gaussian_vector(space->atom_count(), rng)));
  return Subspace(space, std::move(basis));
}

inline LatticeVector real_vector(const SpacePtr& space, std::vector<double> v) {
  return LatticeVector::from_real(space, v);
}

// ||x||_p on counting weights, written out by hand
inline double lp_counting(const std::vector<double>& x, double p) {
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace spr::test

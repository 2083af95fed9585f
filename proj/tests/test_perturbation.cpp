#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "spr/constructions.hpp"
#include "spr/metrics.hpp"
#include "spr/perturbation.hpp"

using namespace spr;
using test::real_vector;

TEST_CASE("perturbed constant formula") {
  CHECK(*perturbed_spr_bound(1.0, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(perturbation_threshold(1.0) == doctest::Approx(1.0 / (4.0 * std::sqrt(2.0))));
  const double inv = 0.5 * (1.0 / std::sqrt(2.0) - 0.02) - 0.02;
  CHECK(*perturbed_spr_bound(2.0, 0.01) == doctest::Approx(1.0 / inv).epsilon(1e-12));
  CHECK(*perturbed_spr_bound(2.0, 0.01) == doctest::Approx(3.0907).epsilon(1e-4));
  for (double c : {1.0, 3.0, 10.0}) CHECK(*perturbed_spr_bound(c, 0.0) == doctest::Approx(std::sqrt(2.0) * c));
  CHECK_FALSE(perturbed_spr_bound(1.0, 0.2).has_value());
  CHECK(*perturbed_spr_bound(2.0, 0.02) > *perturbed_spr_bound(2.0, 0.01));
  CHECK(*perturbed_spr_bound(3.0, 0.01) > *perturbed_spr_bound(2.0, 0.01));
  CHECK_THROWS_AS(perturbation_threshold(0.5), Error);
}

TEST_CASE("hausdorff distance on simple planes") {
  auto l2 = std::make_shared<AtomSpace>(std::vector<double>{1, 1}, LpNorm{2.0});
  Subspace e(l2, {real_vector(l2, {1, 0})}), f(l2, {real_vector(l2, {0, 1})});
  CHECK(one_sided_hausdorff(e, e) < 1e-9);
  CHECK(one_sided_hausdorff(e, f) == doctest::Approx(1.0).epsilon(1e-9));
  auto other = AtomSpace::uniform(3, LpNorm{2.0});
  Subspace g(other, {real_vector(other, {1, 0, 0})});
  CHECK_THROWS_AS(one_sided_hausdorff(e, g), Error);
}

TEST_CASE("hausdorff distance under a small column perturbation") {
  std::mt19937_64 rng(3);
  auto space = AtomSpace::uniform(6, LpNorm{1.0});
  const auto e = test::random_subspace(space, 2, rng);
  const double delta = 0.01;
  std::vector<LatticeVector> cols;
  std::vector<double> col_dist;
  for (int j = 0; j < 2; ++j) {
    const auto d = real_vector(space, test::gaussian_vector(6, rng)).normalized();
    cols.push_back(e.basis()[j] + d.scaled(delta * e.basis()[j].norm()));
    col_dist.push_back(distance_to_subspace(cols.back().normalized(), e));
  }
  const Subspace f(space, cols);
  const double d = one_sided_hausdorff(e, f);
  // every unit x = a f1 + b f2 sits at distance <= (|a| + |b|) delta max||e_j|| from E
  double sum_coeff = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double t = M_PI * k / 2000;
    const auto x = f.combine_real(std::vector<double>{std::cos(t), std::sin(t)});
    sum_coeff = std::max(sum_coeff, (std::abs(std::cos(t)) + std::abs(std::sin(t))) / x.norm());
  }
  const double bound = sum_coeff * delta * std::max(e.basis()[0].norm(), e.basis()[1].norm());
  CHECK(d <= bound + 1e-9);
  CHECK(d >= std::max(col_dist[0], col_dist[1]) - 1e-9);
}

TEST_CASE("basis perturbation keeps the meet") {
  const auto e = gaussian_span(3, 2048, 5);
  SearchBudget b;
  b.pairs = 1500;
  b.refine_starts = 4;
  const double gamma = disjointness_constant(e, b, 1).epsilon_upper;
  const auto zero = basis_perturbation_check(e, gamma, 0.0, 2, 300);
  REQUIRE(zero.passed);
  CHECK(*zero.passed);
  CHECK(zero.min_meet >= gamma - 0.02);
  const auto quarter = basis_perturbation_check(e, gamma, gamma / 4, 2, 300);
  REQUIRE(quarter.passed);
  CHECK(*quarter.passed);
  const auto half = basis_perturbation_check(e, gamma, gamma / 2, 2, 300);
  CHECK_FALSE(half.passed.has_value());
  CHECK_FALSE(half.warning.empty());
  // columns move by exactly epsilon
  for (int j = 0; j < 3; ++j) {
    const auto u = e.basis()[j].normalized();
    CHECK((quarter.perturbed.basis()[j] - u).norm() == doctest::Approx(gamma / 4).epsilon(1e-9));
  }
}

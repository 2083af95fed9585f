#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "spr/witness.hpp"

using namespace spr;
using test::real_vector;

namespace {
// R in [0, 1/2] with R (1 - R) = t, by bisection
double bisect_root(double t) {
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * (1.0 - mid) < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double weighted_inner(const LatticeVector& a, const LatticeVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.space().weights()[i] * (a[i] * std::conj(b[i])).real();
  return s;
}
}  // namespace

TEST_CASE("tightening root against bisection") {
  for (double t : {0.0, 1e-6, 0.01, 0.1, 0.2, 0.2499}) {
    CHECK(std::abs(tightening_root(1.0, t) - bisect_root(t)) < 1e-10);
    CHECK(std::abs(tightening_root(4.0, 4.0 * t) - bisect_root(t)) < 1e-10);
  }
  // tangent case, where bisection only resolves sqrt(ulp)
  CHECK(tightening_root(1.0, 0.25) == 0.5);
  CHECK(tightening_root(1.0, 0.3) == 0.5);
}

TEST_CASE("mvee of a circle and of a square") {
  Eigen::MatrixXd circle(2, 360);
  for (int k = 0; k < 360; ++k) circle.col(k) << std::cos(k * M_PI / 180), std::sin(k * M_PI / 180);
  const Eigen::MatrixXd a = min_volume_ellipsoid(circle);
  CHECK(a(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(a(1, 1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(a(0, 1)) < 1e-6);

  Eigen::MatrixXd square(2, 4);
  square << 1, 1, -1, -1, 1, -1, 1, -1;
  const Eigen::MatrixXd b = min_volume_ellipsoid(square);
  CHECK(b(0, 0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(b(1, 1) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("l2 pair: native inner product, exact orthogonality") {
  std::mt19937_64 rng(2);
  auto space = AtomSpace::uniform(5, LpNorm{2.0});
  for (int k = 0; k < 20; ++k) {
    const auto f = real_vector(space, test::gaussian_vector(5, rng));
    const auto g = real_vector(space, test::gaussian_vector(5, rng));
    const auto w = tighten(f, g);
    CHECK(w.k_factor == 1.0);
    CHECK(std::abs(weighted_inner(w.f_prime, w.g_prime)) < 1e-10 * w.f_prime.norm() * w.g_prime.norm());
    const auto r = verify_witness(w, f, g, 1e-9);
    CHECK(r.pass);
  }
}

TEST_CASE("sup norm plane: factor close to sqrt 2") {
  auto space = std::make_shared<AtomSpace>(std::vector<double>{1, 1}, SupNorm{});
  const auto f = real_vector(space, {1, 0}), g = real_vector(space, {0.3, 1});
  const auto h = hilbert_surrogate(f, g);
  CHECK(h.measured_max == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(h.k_factor <= std::sqrt(2.0) * 1.001);
  // the surrogate dominates the norm on the span
  for (int k = 0; k < 100; ++k) {
    const double t = 2 * M_PI * k / 100;
    const Coords c{std::cos(t), std::sin(t)};
    const auto x = f.scaled(c[0]) + g.scaled(c[1]);
    CHECK(h.norm(c) >= x.norm() * (1 - 1e-9));
    CHECK(h.norm(c) <= h.k_factor * x.norm() * (1 + 1e-9));
  }
}

TEST_CASE("l1 and complex pairs pass verification") {
  std::mt19937_64 rng(3);
  auto l1 = AtomSpace::uniform(4, LpNorm{1.0});
  for (int k = 0; k < 10; ++k) {
    const auto f = real_vector(l1, test::gaussian_vector(4, rng));
    const auto g = real_vector(l1, test::gaussian_vector(4, rng));
    const auto w = tighten(f, g);
    CHECK(w.k_factor <= std::sqrt(2.0) * 1.001);
    CHECK(verify_witness(w, f, g).pass);
  }
  auto c3 = AtomSpace::uniform(3, LpNorm{3.0}, Field::complex);
  std::normal_distribution<double> n;
  for (int k = 0; k < 5; ++k) {
    std::vector<Scalar> a(3), b(3);
    for (auto& z : a) z = {n(rng), n(rng)};
    for (auto& z : b) z = {n(rng), n(rng)};
    const LatticeVector f(c3, a), g(c3, b);
    const auto w = tighten(f, g);
    CHECK(verify_witness(w, f, g).pass);
    CHECK(std::abs(std::abs(w.lambda) - 1.0) < 1e-12);
  }
}

TEST_CASE("nearly opposite pair in sup norm") {
  auto space = AtomSpace::uniform(4, SupNorm{});
  const auto f = real_vector(space, {-0.63915682798521334, -1, 0.37697863108296703, -0.50715666389454495});
  const auto g = real_vector(space, {0.63834396892741707, 1, -0.37692229718967935, 0.50615880229141019});
  const auto w = tighten(f, g);
  CHECK(w.k_factor <= std::sqrt(2.0) * 1.001);
  CHECK(verify_witness(w, f, g).pass);
}

TEST_CASE("dependent pair is rejected") {
  auto space = AtomSpace::uniform(3, LpNorm{1.0});
  const auto f = real_vector(space, {1, 2, 3});
  CHECK_THROWS_AS(tighten(f, f.scaled(-2.0)), Error);
}

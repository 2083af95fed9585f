#include "spr/perturbation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <variant>

#include "spr/optimize.hpp"
#include "spr/parallel.hpp"

namespace spr {

namespace {

constexpr std::uint64_t kHausdorffStream = 21;
constexpr std::uint64_t kColumnStream = 22;
constexpr std::uint64_t kPairStream = 23;

std::vector<Scalar> to_coeffs(const std::vector<double>& p, bool complex_field) {
  std::vector<Scalar> c(complex_field ? p.size() / 2 : p.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    c[j] = complex_field ? Scalar(p[2 * j], p[2 * j + 1]) : Scalar(p[j], 0.0);
  return c;
}

std::vector<double> to_params(const std::vector<Scalar>& c, bool complex_field) {
  std::vector<double> p;
  for (const auto& z : c) {
    p.push_back(z.real());
    if (complex_field) p.push_back(z.imag());
  }
  return p;
}

std::vector<double> random_params(std::size_t dim, bool complex_field, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> p(complex_field ? 2 * dim : dim);
  for (auto& v : p) v = gauss(rng);
  return p;
}

}  // namespace

double distance_to_subspace(const LatticeVector& x, const Subspace& e) {
  require(same_space(x.space(), e.ambient()), ErrorKind::dimension, "vector and subspace live in different spaces");
  const bool complex_field = e.field() == Field::complex;
  const std::size_t m = x.size(), n = e.dimension();

  // weighted least squares start
  const auto w = e.ambient().weights();
  Eigen::MatrixXcd a(m, n);
  Eigen::VectorXcd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = std::sqrt(w[i]);
    b(i) = s * x[i];
    for (std::size_t j = 0; j < n; ++j) a(i, j) = s * e.basis()[j][i];
  }
  const Eigen::VectorXcd ls = a.colPivHouseholderQr().solve(b);
  std::vector<Scalar> start(n);
  for (std::size_t j = 0; j < n; ++j) start[j] = complex_field ? ls(j) : Scalar(ls(j).real(), 0.0);

  auto objective = [&](const std::vector<double>& p) { return (x - e.combine(to_coeffs(p, complex_field))).norm(); };
  const double scale = std::max(1e-3, std::sqrt(std::accumulate(start.begin(), start.end(), 0.0,
                                                                [](double s, Scalar z) { return s + std::norm(z); })));
  opt::NelderMeadOptions o;
  o.initial_step = 0.1 * scale;
  o.restarts = 2;
  o.x_tolerance = 1e-11;
  o.f_tolerance = 1e-13;
  o.max_evaluations = 1500 * static_cast<int>(complex_field ? 2 * n : n);
  const auto r = opt::nelder_mead(objective, to_params(start, complex_field), o);
  return std::min(r.value, objective(to_params(start, complex_field)));
}

double one_sided_hausdorff(const Subspace& e, const Subspace& f, const HausdorffBudget& budget, std::uint64_t seed) {
  require(same_space(e.ambient(), f.ambient()), ErrorKind::dimension, "subspaces live in different ambient spaces");
  const bool complex_field = f.field() == Field::complex;
  const std::size_t n = f.dimension();

  auto value = [&](const std::vector<double>& p) {
    const LatticeVector x = f.combine(to_coeffs(p, complex_field));
    const double nx = x.norm();
    if (nx <= 0.0) return 0.0;
    return distance_to_subspace(x.scaled(1.0 / nx), e);
  };

  const std::size_t total = n + budget.samples;
  auto params_for = [&](std::size_t k) {
    if (k < n) {
      std::vector<double> p(complex_field ? 2 * n : n, 0.0);
      p[complex_field ? 2 * k : k] = 1.0;
      return p;
    }
    auto rng = sample_rng(seed, k, kHausdorffStream);
    return random_params(n, complex_field, rng);
  };
  std::vector<double> values(total);
  parallel_for(total, [&](std::size_t k) { values[k] = value(params_for(k)); });

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  double best = values[order.front()];
  if (n > 1 || complex_field) {
    const std::size_t starts = std::min(budget.refine_starts, total);
    std::vector<double> refined(starts, 0.0);
    parallel_for(starts, [&](std::size_t k) {
      opt::NelderMeadOptions o;
      o.initial_step = 0.1;
      o.max_evaluations = budget.refine_evaluations;
      refined[k] = -opt::nelder_mead([&](const std::vector<double>& p) { return -value(p); },
                                     params_for(order[k]), o)
                        .value;
    });
    for (double r : refined) best = std::max(best, r);
  }
  return best;
}

double perturbation_threshold(double c) {
  require(c >= 1.0, ErrorKind::domain, "SPR constant must be >= 1");
  return 1.0 / (2.0 * std::sqrt(2.0) * (c + 1.0));
}

std::optional<double> perturbed_spr_bound(double c, double d) {
  require(d >= 0.0, ErrorKind::domain, "distance must be nonnegative");
  if (!(d < perturbation_threshold(c))) return std::nullopt;
  const double inv = (1.0 / c) * (1.0 / std::sqrt(2.0) - 2.0 * d) - 2.0 * d;
  return 1.0 / inv;
}

PerturbationReport perturbation_report(const Subspace& e, const Subspace& f, double c, const HausdorffBudget& budget,
                                       std::uint64_t seed) {
  PerturbationReport r;
  r.d1h = one_sided_hausdorff(e, f, budget, seed);
  r.threshold = perturbation_threshold(c);
  r.c_prime = perturbed_spr_bound(c, r.d1h);
  return r;
}

BasisPerturbationReport basis_perturbation_check(const Subspace& e, double gamma, double epsilon, std::uint64_t seed,
                                                 std::size_t pairs, double slack) {
  const AtomSpace& space = e.ambient();
  const auto* lp = std::get_if<LpNorm>(&space.norm_spec());
  require(lp && lp->p == 2.0 && space.field() == Field::real, ErrorKind::domain,
          "basis perturbation check needs a real L_2 ambient");
  space.require_probability("basis_perturbation_check");
  require(gamma > 0.0 && epsilon >= 0.0 && epsilon <= 2.0, ErrorKind::domain, "need gamma > 0 and 0 <= epsilon <= 2");

  const std::size_t m = space.atom_count();
  const auto w = space.weights();
  auto inner = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w[i] * a[i] * b[i];
    return s;
  };

  const double phi = 2.0 * std::asin(epsilon / 2.0);
  std::vector<LatticeVector> columns;
  for (std::size_t j = 0; j < e.dimension(); ++j) {
    std::vector<double> col = e.basis()[j].real_parts();
    const double nc = std::sqrt(inner(col, col));
    for (auto& v : col) v /= nc;
    auto rng = sample_rng(seed, j, kColumnStream);
    std::normal_distribution<double> gauss;
    std::vector<double> d(m);
    for (auto& v : d) v = gauss(rng);
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(m);
    for (auto& v : d) v -= mean;
    const double proj = inner(d, col);
    for (std::size_t i = 0; i < m; ++i) d[i] -= proj * col[i];
    const double nd = std::sqrt(inner(d, d));
    for (std::size_t i = 0; i < m; ++i) col[i] = std::cos(phi) * col[i] + std::sin(phi) * d[i] / nd;
    columns.push_back(LatticeVector::from_real(e.ambient_ptr(), col));
  }
  Subspace f(e.ambient_ptr(), std::move(columns));

  std::vector<double> meets(pairs);
  parallel_for(pairs, [&](std::size_t k) {
    auto rng = sample_rng(seed, k, kPairStream);
    const auto a = random_params(f.dimension(), false, rng);
    const auto b = random_params(f.dimension(), false, rng);
    meets[k] = meet_norm(f.combine_real(a).normalized(), f.combine_real(b).normalized());
  });

  BasisPerturbationReport r{gamma, epsilon, epsilon <= gamma / 4.0 + 1e-15,
                            pairs ? *std::min_element(meets.begin(), meets.end()) : 0.0,
                            gamma / 2.0 - slack, std::nullopt, "", std::move(f)};
  if (r.hypothesis_holds) {
    r.passed = r.min_meet >= r.bound;
  } else {
    r.warning = "epsilon exceeds gamma/4; the meet bound is not guaranteed";
  }
  return r;
}

}  // namespace spr

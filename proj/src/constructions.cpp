#include "spr/constructions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <variant>

#include "spr/optimize.hpp"
#include "spr/oracle.hpp"
#include "spr/parallel.hpp"

namespace spr {

namespace {

constexpr double kPi = std::numbers::pi;

enum Stream : std::uint64_t { gaussian_stream = 11, stable_stream = 12, net_stream = 13, norming_stream = 14 };

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

void require_unit(const LatticeVector& x, const char* what) {
  require(std::abs(x.norm() - 1.0) <= 1e-9, ErrorKind::domain, std::string(what) + " must have norm 1");
}

Scalar unit_phase(Scalar z) { return std::abs(z) > 0.0 ? z / std::abs(z) : Scalar(0.0); }

}  // namespace

// ---------------------------------------------------------------------------
// random spans

Subspace gaussian_span(std::size_t n, std::size_t m, std::uint64_t seed, NormSpec norm) {
  require(n >= 1, ErrorKind::dimension, "gaussian_span needs n >= 1");
  require(m >= 16 * n, ErrorKind::domain, "gaussian_span is undersampled: need m >= 16 n");
  auto space = AtomSpace::uniform(m, std::move(norm));
  std::vector<LatticeVector> basis;
  for (std::size_t j = 0; j < n; ++j) {
    auto rng = sample_rng(seed, j, gaussian_stream);
    std::normal_distribution<double> gauss;
    std::vector<double> col(m);
    for (auto& v : col) v = gauss(rng);
    basis.push_back(LatticeVector::from_real(space, col));
  }
  return Subspace(space, std::move(basis));
}

double gaussian_beta() { return oracle::quantile(oracle::Distribution::normal, 0.625); }

double stable_sample(double q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);
  std::exponential_distribution<double> expo(1.0);
  double v = angle(rng);
  while (std::abs(v) >= kPi / 2) v = angle(rng);
  const double w = expo(rng);
  return std::sin(q * v) / std::pow(std::cos(v), 1.0 / q) *
         std::pow(std::cos((1.0 - q) * v) / w, (1.0 - q) / q);
}

bool q_stable_integrable(double p, double q) { return p < q; }

Subspace q_stable_span(double q, std::size_t n, std::size_t m, std::uint64_t seed, double p) {
  require(q > 1.0 && q <= 2.0, ErrorKind::domain, "q-stable span needs q in (1, 2]");
  require(n >= 1 && m >= n, ErrorKind::dimension, "q-stable span needs 1 <= n <= m");
  auto space = AtomSpace::uniform(m, LpNorm{p});
  std::vector<LatticeVector> basis;
  for (std::size_t j = 0; j < n; ++j) {
    auto rng = sample_rng(seed, j, stable_stream);
    std::vector<double> col(m);
    for (auto& v : col) v = stable_sample(q, rng);
    basis.push_back(LatticeVector::from_real(space, col));
  }
  return Subspace(space, std::move(basis));
}

// ---------------------------------------------------------------------------
// Rademacher functions with spikes

Subspace rademacher_spike(double p, std::size_t n, std::size_t resolution) {
  require(p >= 2.0 && std::isfinite(p), ErrorKind::domain, "rademacher_spike needs p >= 2");
  require(n >= 1 && n < 40, ErrorKind::dimension, "rademacher_spike needs 1 <= N < 40");
  require(is_power_of_two(resolution), ErrorKind::domain, "resolution must be a power of two");
  require(resolution >= (std::size_t{1} << (n + 1)), ErrorKind::domain, "resolution must be at least 2^(N+1)");
  auto space = std::make_shared<const AtomSpace>(
      std::vector<double>(2 * resolution, 1.0 / static_cast<double>(resolution)), LpNorm{p});
  std::vector<LatticeVector> basis;
  for (std::size_t j = 1; j <= n; ++j) {
    std::vector<double> g(2 * resolution, 0.0);
    const std::size_t block = resolution >> j;  // atoms per dyadic interval of length 2^-j
    for (std::size_t k = 0; k < resolution; ++k) g[k] = ((k / block) % 2 == 0) ? 1.0 : -1.0;
    const double height = std::pow(2.0, static_cast<double>(j) / p);
    for (std::size_t k = resolution + block; k < resolution + 2 * block; ++k) g[k] = height;
    basis.push_back(LatticeVector::from_real(space, g));
  }
  return Subspace(space, std::move(basis));
}

Subspace rademacher_spike_l2(std::size_t n, std::size_t resolution) { return rademacher_spike(2.0, n, resolution); }

// ---------------------------------------------------------------------------
// phase retrieval without stability

std::uint64_t cantor_pair(std::uint64_t i, std::uint64_t j) { return (i + j) * (i + j + 1) / 2 + j; }

std::uint64_t cantor_psi(std::uint64_t i, std::uint64_t j) { return std::max(cantor_pair(i, j), cantor_pair(j, i)); }

std::size_t pr_pair_atom(std::size_t n, std::size_t i, std::size_t j) {
  require(i != j && i >= 1 && j >= 1 && i <= n && j <= n, ErrorKind::domain, "pair indices out of range");
  const std::size_t a = std::min(i, j), b = std::max(i, j);
  std::size_t idx = n;
  for (std::size_t k = 1; k < a; ++k) idx += n - k;
  return idx + (b - a - 1);
}

Subspace pr_not_spr(std::size_t n) {
  require(n >= 2, ErrorKind::dimension, "pr_not_spr needs N >= 2");
  require(4 * cantor_psi(n - 1, n) <= 1022, ErrorKind::domain, "pr_not_spr weights underflow for this N");
  const std::size_t atoms = n + n * (n - 1) / 2;
  auto space = std::make_shared<const AtomSpace>(std::vector<double>(atoms, 1.0), SupNorm{});
  std::vector<LatticeVector> basis;
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<double> f(atoms, 0.0);
    f[i - 1] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
      if (j == i) continue;
      f[pr_pair_atom(n, i, j)] = std::ldexp(1.0, -4 * static_cast<int>(cantor_pair(i, j)));
    }
    basis.push_back(LatticeVector::from_real(space, f));
  }
  return Subspace(space, std::move(basis));
}

// ---------------------------------------------------------------------------
// scattered C(K)

Subspace scattered_ck_basis(std::size_t n) {
  require(n >= 2, ErrorKind::dimension, "scattered_ck_basis needs N >= 2");
  // atoms: s_{1,2k-1} for k = 1..N, then s_{j,2k} for k = 1..N, j = 1..N+1
  const std::size_t atoms = n + n * (n + 1);
  auto even_atom = [n](std::size_t j, std::size_t k) { return n + (k - 1) * (n + 1) + (j - 1); };
  auto space = std::make_shared<const AtomSpace>(std::vector<double>(atoms, 1.0), SupNorm{});
  std::vector<LatticeVector> basis;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<double> x(atoms, 0.0);
    x[k - 1] = 1.0;
    for (std::size_t j = 1; j <= n + 1; ++j) x[even_atom(j, k)] = 0.5;
    for (std::size_t i = 1; i < k; ++i) x[even_atom(k, i)] = 0.5;
    basis.push_back(LatticeVector::from_real(space, x));
  }
  return Subspace(space, std::move(basis));
}

// ---------------------------------------------------------------------------
// the three-dimensional example

Example3D example_3d() {
  auto space = std::make_shared<const AtomSpace>(
      std::vector<double>(3, 1.0), PolyhedralNorm{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.5, 0.5, 0.5}}});
  std::vector<LatticeVector> basis;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> e(3, 0.0);
    e[k] = 1.0;
    basis.push_back(LatticeVector::from_real(space, e));
  }
  std::vector<std::array<double, 3>> vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  for (double a : {0.5, -0.5})
    for (double b : {0.5, -0.5})
      for (double c : {0.5, -0.5}) vertices.push_back({a, b, c});
  return {Subspace(space, std::move(basis)), std::move(vertices)};
}

ExtremePointBound extreme_point_bound(const LatticeVector& x, const LatticeVector& y) {
  require_same_space(x, y);
  require(x.size() == 3 && x.space().field() == Field::real, ErrorKind::dimension,
          "extreme_point_bound works on the real 3D example");
  require_unit(x, "x");
  require_unit(y, "y");
  static const Example3D ex = example_3d();
  ExtremePointBound best{-1.0, {}};
  for (const auto& e : ex.extreme_points) {
    double ex_ = 0.0, ey = 0.0;
    for (int k = 0; k < 3; ++k) {
      ex_ += e[k] * x[k].real();
      ey += e[k] * y[k].real();
    }
    const double v = std::min(std::abs(ex_), std::abs(ey));
    if (v > best.value) best = {v, e};
  }
  return best;
}

Subspace example_3d_embedded() {
  const std::vector<std::array<double, 3>> rows = {{1, 0, 0},         {0, 1, 0},          {0.5, 0.5, 0.5},
                                                   {0.5, 0.5, -0.5}, {0.5, -0.5, 0.5}, {-0.5, 0.5, 0.5}};
  auto space = std::make_shared<const AtomSpace>(std::vector<double>(rows.size(), 1.0), SupNorm{});
  std::vector<LatticeVector> basis;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> col(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][k];
    basis.push_back(LatticeVector::from_real(space, col));
  }
  return Subspace(space, std::move(basis));
}

// ---------------------------------------------------------------------------
// functionals

Scalar evaluate(const Functional& f, const LatticeVector& x) {
  require(f.size() == x.size(), ErrorKind::dimension, "functional length does not match atom count");
  Scalar s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * x[i];
  return s;
}

namespace {

double polyhedral_dual(const PolyhedralNorm& poly, const std::vector<double>& c) {
  // max sum c_i t_i over {t >= 0, A t <= 1}: enumerate the vertices.
  const std::size_t n = c.size();
  const std::size_t rows = poly.functionals.size() + n;
  double combos = 1.0;
  for (std::size_t k = 0; k < n; ++k) combos = combos * static_cast<double>(rows - k) / static_cast<double>(k + 1);
  require(combos <= 2e6, ErrorKind::domain, "polyhedral dual norm: too many atoms for vertex enumeration");

  auto row = [&](std::size_t r, std::size_t i) -> double {
    if (r < poly.functionals.size()) return poly.functionals[r][i];
    return (r - poly.functionals.size() == i) ? -1.0 : 0.0;
  };
  auto rhs = [&](std::size_t r) { return r < poly.functionals.size() ? 1.0 : 0.0; };

  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  double best = 0.0;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  while (true) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < n; ++i) a(r, i) = row(pick[r], i);
      b(r) = rhs(pick[r]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.isInvertible()) {
      const Eigen::VectorXd t = lu.solve(b);
      bool feasible = true;
      for (std::size_t r = 0; r < rows && feasible; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += row(r, i) * t(i);
        feasible = s <= rhs(r) + 1e-12;
      }
      if (feasible) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += c[i] * t(i);
        best = std::max(best, v);
      }
    }
    // next n-subset of rows
    std::size_t k = n;
    while (k > 0 && pick[k - 1] == rows - n + (k - 1)) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t r = k; r < n; ++r) pick[r] = pick[r - 1] + 1;
  }
  return best;
}

/// Extreme subgradients of the norm at z. At zero entries of z, the two
/// choices that extremize g(y) are returned.
std::vector<Functional> subgradients(const LatticeVector& z, const LatticeVector& y) {
  const AtomSpace& space = z.space();
  const auto w = space.weights();
  const std::size_t n = z.size();
  const auto mod = z.modulus();
  const double top = *std::max_element(mod.begin(), mod.end());
  const double nz = z.norm();
  require(nz > 0.0, ErrorKind::numerical, "subgradient of the zero vector");
  std::vector<bool> zero(n);
  std::vector<Scalar> phase(n), y_phase(n);
  for (std::size_t i = 0; i < n; ++i) {
    zero[i] = mod[i] <= 1e-12 * top;
    phase[i] = zero[i] ? Scalar(0.0) : std::conj(unit_phase(z[i]));
    y_phase[i] = std::conj(unit_phase(y[i]));
  }
  auto with_zero_fill = [&](Functional base, const std::vector<double>& scale) {
    std::vector<Functional> out;
    if (std::none_of(zero.begin(), zero.end(), [](bool b) { return b; })) return std::vector<Functional>{base};
    for (double s : {1.0, -1.0}) {
      Functional f = base;
      for (std::size_t i = 0; i < n; ++i)
        if (zero[i]) f[i] = s * scale[i] * y_phase[i];
      out.push_back(std::move(f));
    }
    return out;
  };

  return std::visit(
      [&](const auto& norm) -> std::vector<Functional> {
        using T = std::decay_t<decltype(norm)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          Functional f(n);
          if (norm.p == 1.0) {
            for (std::size_t i = 0; i < n; ++i) f[i] = w[i] * phase[i];
            return with_zero_fill(f, std::vector<double>(w.begin(), w.end()));
          }
          for (std::size_t i = 0; i < n; ++i) f[i] = w[i] * std::pow(mod[i] / nz, norm.p - 1.0) * phase[i];
          return {f};
        } else if constexpr (std::is_same_v<T, SupNorm>) {
          std::vector<Functional> out;
          for (std::size_t i = 0; i < n; ++i) {
            if (mod[i] < (1.0 - 1e-9) * top) continue;
            Functional f(n, 0.0);
            f[i] = phase[i];
            out.push_back(std::move(f));
          }
          return out;
        } else if constexpr (std::is_same_v<T, PolyhedralNorm>) {
          std::vector<Functional> out;
          for (const auto& a : norm.functionals) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += a[i] * mod[i];
            if (s < (1.0 - 1e-9) * nz) continue;
            Functional f(n);
            for (std::size_t i = 0; i < n; ++i) f[i] = a[i] * phase[i];
            for (auto& g : with_zero_fill(f, a)) out.push_back(std::move(g));
          }
          return out;
        } else {
          fail(ErrorKind::domain, "supporting functionals are not available for Lorentz norms");
        }
      },
      space.norm_spec());
}

/// argmin_t ||x - t y|| over the scalar field.
std::pair<Scalar, double> distance_to_line(const LatticeVector& x, const LatticeVector& y) {
  const double bound = 2.0 * x.norm() / y.norm() + 1.0;
  if (x.space().field() == Field::real) {
    const auto r = opt::golden_section([&](double t) { return (x - y.scaled(t)).norm(); }, -bound, bound, 1e-14, 400);
    return {Scalar(r.x), r.value};
  }
  opt::NelderMeadOptions o;
  o.initial_step = 0.25;
  o.restarts = 3;
  o.max_evaluations = 4000;
  o.x_tolerance = 1e-14;
  o.f_tolerance = 1e-15;
  const auto r =
      opt::nelder_mead([&](const std::vector<double>& t) { return (x - y.scaled(Scalar(t[0], t[1]))).norm(); },
                       {0.0, 0.0}, o);
  return {Scalar(r.x[0], r.x[1]), r.value};
}

/// Unit functional g with g(y) = 0 and g(x) = dist(x, F y).
Functional annihilating_functional(const LatticeVector& x, const LatticeVector& y) {
  const auto [t, dist] = distance_to_line(x, y);
  const LatticeVector z = x - y.scaled(t);
  const auto cands = subgradients(z, y);
  require(!cands.empty(), ErrorKind::numerical, "no active subgradient found");
  if (x.space().field() == Field::complex) {
    require(cands.size() == 1, ErrorKind::domain,
            "complex supporting functionals need a smooth norm (L_p with 1 < p < inf)");
  }
  // smooth point: the gradient already annihilates y up to the line search error
  if (cands.size() == 1) return cands.front();
  std::size_t hi = 0, lo = 0;
  std::vector<double> v(cands.size());
  for (std::size_t k = 0; k < cands.size(); ++k) {
    v[k] = evaluate(cands[k], y).real();
    if (v[k] > v[hi]) hi = k;
    if (v[k] < v[lo]) lo = k;
  }
  if (std::abs(v[hi]) <= 1e-13) return cands[hi];
  if (std::abs(v[lo]) <= 1e-13) return cands[lo];
  require(v[hi] >= 0.0 && v[lo] <= 0.0, ErrorKind::numerical, "subgradients do not bracket g(y) = 0");
  const double theta = -v[lo] / (v[hi] - v[lo]);
  Functional g(cands[hi].size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = theta * cands[hi][i] + (1.0 - theta) * cands[lo][i];
  return g;
}

}  // namespace

double dual_norm(const AtomSpace& space, const Functional& f) {
  require(f.size() == space.atom_count(), ErrorKind::dimension, "functional length does not match atom count");
  const auto w = space.weights();
  std::vector<double> c(f.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::abs(f[i]);
  return std::visit(
      [&](const auto& norm) -> double {
        using T = std::decay_t<decltype(norm)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          if (norm.p == 1.0) {
            double best = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) best = std::max(best, c[i] / w[i]);
            return best;
          }
          const double q = norm.p / (norm.p - 1.0);
          double top = 0.0;
          for (std::size_t i = 0; i < c.size(); ++i) top = std::max(top, c[i] / w[i]);
          if (top == 0.0) return 0.0;
          double s = 0.0;
          for (std::size_t i = 0; i < c.size(); ++i) s += w[i] * std::pow(c[i] / w[i] / top, q);
          return top * std::pow(s, 1.0 / q);
        } else if constexpr (std::is_same_v<T, SupNorm>) {
          return std::accumulate(c.begin(), c.end(), 0.0);
        } else if constexpr (std::is_same_v<T, PolyhedralNorm>) {
          return polyhedral_dual(norm, c);
        } else {
          fail(ErrorKind::domain, "dual norm is not available for Lorentz norms");
        }
      },
      space.norm_spec());
}

Functional supporting_functional(const LatticeVector& x, const LatticeVector& y) {
  require_same_space(x, y);
  require_unit(x, "x");
  require_unit(y, "y");
  const AtomSpace& space = x.space();

  Functional f;
  if (distance_to_line(y, x).second <= 0.4) {
    f = subgradients(x, y).front();
  } else if (distance_to_line(x, y).second <= 0.4) {
    f = subgradients(y, x).front();
  } else {
    const Functional g = annihilating_functional(x, y);
    const Functional h = annihilating_functional(y, x);
    f.resize(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = g[i] + h[i];
  }
  const double n = dual_norm(space, f);
  require(n > 0.0, ErrorKind::numerical, "supporting functional vanished");
  for (auto& c : f) c /= n;
  const double value = std::min(std::abs(evaluate(f, x)), std::abs(evaluate(f, y)));
  require(value >= 0.2 - 1e-9, ErrorKind::numerical, "supporting functional misses the 1/5 bound");
  return f;
}

// ---------------------------------------------------------------------------
// sup-norm embedding

SupEmbedding linfty_spr_embed(const Subspace& e, std::size_t net_size, std::uint64_t seed) {
  require(net_size >= 2, ErrorKind::domain, "net_size must be at least 2");
  const std::size_t n = e.dimension();
  const std::size_t m = e.ambient().atom_count();
  require(n == m, ErrorKind::domain, "linfty_spr_embed needs E to span its ambient space");
  const bool complex_field = e.field() == Field::complex;
  const double delta = 1.0 / static_cast<double>(net_size);

  Eigen::MatrixXcd b(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) b(i, j) = e.basis()[j][i];
  const Eigen::MatrixXcd bt_inv = b.transpose().inverse();
  auto e_dual = [&](const std::vector<Scalar>& psi) {
    Eigen::VectorXcd v(n);
    for (std::size_t j = 0; j < n; ++j) v(j) = psi[j];
    const Eigen::VectorXcd c = bt_inv * v;
    return dual_norm(e.ambient(), Functional(c.data(), c.data() + m));
  };

  // ||psi||_* <= lambda ||psi||_2, so Euclidean radius delta / lambda suffices.
  double lambda_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Scalar> unit(n, 0.0);
    unit[j] = 1.0;
    lambda_sq += std::pow(e_dual(unit), 2);
    if (complex_field) {
      unit[j] = Scalar(0, 1);
      lambda_sq += std::pow(e_dual(unit), 2);
    }
  }
  const double radius = delta / std::sqrt(lambda_sq);
  const std::size_t dims = complex_field ? 2 * n : n;
  const double cells = std::pow(std::ceil(1.0 / radius), static_cast<double>(dims - 1));
  const std::size_t samples = static_cast<std::size_t>(std::min(4e6, 40.0 * std::max(1.0, cells)));

  std::vector<std::vector<Scalar>> candidates(samples);
  parallel_for(samples, [&](std::size_t k) {
    auto rng = sample_rng(seed, k, net_stream);
    std::normal_distribution<double> gauss;
    std::vector<Scalar> psi(n);
    for (auto& z : psi) z = complex_field ? Scalar(gauss(rng), gauss(rng)) : Scalar(gauss(rng), 0.0);
    const double s = e_dual(psi);
    for (auto& z : psi) z /= s;
    candidates[k] = std::move(psi);
  });

  // Greedy thinning with a hash grid of cell size `radius`.
  auto realify = [&](const std::vector<Scalar>& psi) {
    std::vector<double> r;
    for (const auto& z : psi) {
      r.push_back(z.real());
      if (complex_field) r.push_back(z.imag());
    }
    return r;
  };
  std::map<std::vector<long>, std::vector<std::size_t>> grid;
  std::vector<std::vector<Scalar>> net;
  std::vector<std::vector<double>> net_real;
  for (const auto& psi : candidates) {
    const auto r = realify(psi);
    std::vector<long> cell(dims);
    for (std::size_t d = 0; d < dims; ++d) cell[d] = static_cast<long>(std::floor(r[d] / radius));
    bool covered = false;
    std::vector<long> probe(dims);
    const std::size_t neighbours = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(dims)));
    for (std::size_t code = 0; code < neighbours && !covered; ++code) {
      std::size_t c = code;
      for (std::size_t d = 0; d < dims; ++d) {
        probe[d] = cell[d] + static_cast<long>(c % 3) - 1;
        c /= 3;
      }
      const auto it = grid.find(probe);
      if (it == grid.end()) continue;
      for (std::size_t idx : it->second) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < dims; ++d) d2 += std::pow(r[d] - net_real[idx][d], 2);
        if (d2 <= radius * radius) {
          covered = true;
          break;
        }
      }
    }
    if (covered) continue;
    grid[cell].push_back(net.size());
    net.push_back(psi);
    net_real.push_back(r);
  }

  auto space = std::make_shared<const AtomSpace>(std::vector<double>(net.size(), 1.0), SupNorm{}, e.field());
  std::vector<LatticeVector> basis;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Scalar> col(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) col[i] = net[i][j];
    basis.emplace_back(space, std::move(col));
  }
  SupEmbedding out{Subspace(space, std::move(basis)), std::move(net), delta, 1.0};

  // Norming check on random and coordinate directions.
  const std::size_t checks = 1000 + n;
  std::vector<double> ratios(checks);
  parallel_for(checks, [&](std::size_t k) {
    std::vector<Scalar> a(n, 0.0);
    if (k < n) {
      a[k] = 1.0;
    } else {
      auto rng = sample_rng(seed, k, norming_stream);
      std::normal_distribution<double> gauss;
      for (auto& z : a) z = complex_field ? Scalar(gauss(rng), gauss(rng)) : Scalar(gauss(rng), 0.0);
    }
    ratios[k] = out.image.combine(a).norm() / e.combine(a).norm();
  });
  out.norming = *std::min_element(ratios.begin(), ratios.end());
  require(out.norming >= 1.0 - delta - 1e-12, ErrorKind::numerical,
          "net too coarse to be (1 - delta)-norming; increase the sample budget");
  return out;
}

// ---------------------------------------------------------------------------

Subspace build(const ConstructionRecipe& r) {
  const std::string& v = r.variant;
  if (v == "gaussian") return gaussian_span(r.n, r.m, r.seed, LpNorm{r.p});
  if (v == "q-stable") return q_stable_span(r.q, r.n, r.m, r.seed, r.p);
  if (v == "rademacher-spike") return rademacher_spike(r.p, r.n, r.resolution);
  if (v == "rademacher-spike-l2") return rademacher_spike_l2(r.n, r.resolution);
  if (v == "pr-not-spr") return pr_not_spr(r.n);
  if (v == "scattered-ck") return scattered_ck_basis(r.n);
  if (v == "threed") return example_3d().space;
  if (v == "threed-embedded") return example_3d_embedded();
  fail(ErrorKind::usage, "unknown construction variant '" + v + "'");
}

}  // namespace spr

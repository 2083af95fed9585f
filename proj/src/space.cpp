#include "spr/space.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "spr/optimize.hpp"

namespace spr {

namespace {

void validate_norm(const NormSpec& norm, std::size_t atoms) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          require(std::isfinite(n.p) && n.p >= 1.0, ErrorKind::domain,
                  "Lp norm requires p in [1, inf)");
        } else if constexpr (std::is_same_v<T, LorentzNorm>) {
          require(std::isfinite(n.p) && n.p >= 1.0 && std::isfinite(n.q) && n.q >= 1.0,
                  ErrorKind::domain, "Lorentz norm requires p, q >= 1");
        } else if constexpr (std::is_same_v<T, PolyhedralNorm>) {
          require(!n.functionals.empty(), ErrorKind::domain,
                  "polyhedral norm needs at least one functional");
          std::vector<bool> covered(atoms, false);
          for (const auto& a : n.functionals) {
            require(a.size() == atoms, ErrorKind::dimension,
                    "polyhedral functional length does not match atom count");
            for (std::size_t i = 0; i < atoms; ++i) {
              require(std::isfinite(a[i]) && a[i] >= 0.0, ErrorKind::domain,
                      "polyhedral functionals must be entrywise nonnegative");
              if (a[i] > 0.0) covered[i] = true;
            }
          }
          require(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }),
                  ErrorKind::domain, "polyhedral norm is not definite: some atom is never weighted");
        }
      },
      norm);
}

}  // namespace

std::string describe(const NormSpec& norm) {
  std::ostringstream os;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) os << "Lp(" << n.p << ")";
        else if constexpr (std::is_same_v<T, SupNorm>) os << "Sup";
        else if constexpr (std::is_same_v<T, LorentzNorm>) os << "Lorentz(" << n.p << "," << n.q << ")";
        else os << "Polyhedral[" << n.functionals.size() << "]";
      },
      norm);
  return os.str();
}

AtomSpace::AtomSpace(std::vector<double> weights, NormSpec norm, Field field)
    : weights_(std::move(weights)), norm_(std::move(norm)), field_(field) {
  require(!weights_.empty(), ErrorKind::dimension, "atom space needs at least one atom");
  for (double w : weights_)
    require(std::isfinite(w) && w > 0.0, ErrorKind::domain, "atom weights must be strictly positive");
  validate_norm(norm_, weights_.size());
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::shared_ptr<const AtomSpace> AtomSpace::uniform(std::size_t atoms, NormSpec norm, Field field,
                                                    double total_mass) {
  require(atoms > 0, ErrorKind::dimension, "atom space needs at least one atom");
  return std::make_shared<const AtomSpace>(
      std::vector<double>(atoms, total_mass / static_cast<double>(atoms)), std::move(norm), field);
}

bool AtomSpace::is_probability(double tol) const noexcept { return std::abs(total_mass_ - 1.0) <= tol; }

void AtomSpace::require_probability(const std::string& context) const {
  require(is_probability(), ErrorKind::domain, context + ": ambient weights must sum to 1");
}

double AtomSpace::modulus_norm(std::span<const double> m) const {
  require(m.size() == weights_.size(), ErrorKind::dimension, "vector length does not match atom count");
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          if (n.p == 1.0) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) s += weights_[i] * m[i];
            return s;
          }
          const double top = *std::max_element(m.begin(), m.end());
          if (top == 0.0) return 0.0;
          double s = 0.0;
          if (n.p == 2.0) {
            for (std::size_t i = 0; i < m.size(); ++i) {
              const double r = m[i] / top;
              s += weights_[i] * r * r;
            }
            return top * std::sqrt(s);
          }
          for (std::size_t i = 0; i < m.size(); ++i) s += weights_[i] * std::pow(m[i] / top, n.p);
          return top * std::pow(s, 1.0 / n.p);
        } else if constexpr (std::is_same_v<T, SupNorm>) {
          return *std::max_element(m.begin(), m.end());
        } else if constexpr (std::is_same_v<T, LorentzNorm>) {
          const double top = *std::max_element(m.begin(), m.end());
          if (top == 0.0) return 0.0;
          std::vector<std::size_t> order(m.size());
          std::iota(order.begin(), order.end(), 0);
          std::stable_sort(order.begin(), order.end(),
                           [&](std::size_t a, std::size_t b) { return m[a] > m[b]; });
          const double s_exp = n.q / n.p;
          double cumulative = 0.0, previous = 0.0, s = 0.0;
          for (std::size_t k : order) {
            cumulative += weights_[k];
            const double current = std::pow(cumulative, s_exp);
            s += std::pow(m[k] / top, n.q) * (current - previous);
            previous = current;
          }
          return top * std::pow(s, 1.0 / n.q);
        } else {
          double best = 0.0;
          for (const auto& a : n.functionals) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) s += a[i] * m[i];
            best = std::max(best, s);
          }
          return best;
        }
      },
      norm_);
}

std::shared_ptr<const AtomSpace> AtomSpace::with_norm(NormSpec norm) const {
  return std::make_shared<const AtomSpace>(weights_, std::move(norm), field_);
}

bool AtomSpace::operator==(const AtomSpace& other) const {
  return field_ == other.field_ && weights_ == other.weights_ && norm_ == other.norm_;
}

bool same_space(const AtomSpace& a, const AtomSpace& b) { return &a == &b || a == b; }

// ---------------------------------------------------------------------------

LatticeVector::LatticeVector(SpacePtr space, std::vector<Scalar> entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  require(space_ != nullptr, ErrorKind::dimension, "lattice vector without a space");
  require(entries_.size() == space_->atom_count(), ErrorKind::dimension,
          "vector length does not match atom count");
  if (space_->field() == Field::real) {
    for (const auto& z : entries_)
      require(z.imag() == 0.0, ErrorKind::domain, "complex entry in a real lattice");
  }
}

LatticeVector LatticeVector::from_real(SpacePtr space, std::span<const double> entries) {
  std::vector<Scalar> z(entries.begin(), entries.end());
  return LatticeVector(std::move(space), std::move(z));
}

std::vector<double> LatticeVector::modulus() const {
  std::vector<double> m(entries_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(entries_[i]);
  return m;
}

std::vector<double> LatticeVector::real_parts() const {
  std::vector<double> r(entries_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = entries_[i].real();
  return r;
}

bool LatticeVector::has_real_entries(double tol) const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [tol](const Scalar& z) { return std::abs(z.imag()) <= tol; });
}

double LatticeVector::norm() const { return space_->modulus_norm(modulus()); }

void require_same_space(const LatticeVector& f, const LatticeVector& g) {
  require(same_space(f.space(), g.space()), ErrorKind::dimension, "vectors live in different spaces");
}

LatticeVector LatticeVector::operator+(const LatticeVector& other) const {
  require_same_space(*this, other);
  std::vector<Scalar> z(entries_.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = entries_[i] + other.entries_[i];
  return LatticeVector(space_, std::move(z));
}

LatticeVector LatticeVector::operator-(const LatticeVector& other) const {
  require_same_space(*this, other);
  std::vector<Scalar> z(entries_.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = entries_[i] - other.entries_[i];
  return LatticeVector(space_, std::move(z));
}

LatticeVector LatticeVector::operator-() const { return scaled(-1.0); }

LatticeVector LatticeVector::scaled(Scalar factor) const {
  require(space_->field() == Field::complex || factor.imag() == 0.0, ErrorKind::domain,
          "complex scalar applied in a real lattice");
  std::vector<Scalar> z(entries_.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = factor * entries_[i];
  return LatticeVector(space_, std::move(z));
}

LatticeVector LatticeVector::normalized() const {
  const double n = norm();
  require(n > 0.0, ErrorKind::numerical, "cannot normalize the zero vector");
  return scaled(1.0 / n);
}

double norm(const LatticeVector& x) { return x.norm(); }

double meet_norm(const LatticeVector& f, const LatticeVector& g) {
  require_same_space(f, g);
  std::vector<double> m(f.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(std::abs(f[i]), std::abs(g[i]));
  return f.space().modulus_norm(m);
}

double modulus_gap(const LatticeVector& f, const LatticeVector& g) {
  require_same_space(f, g);
  std::vector<double> m(f.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(std::abs(f[i]) - std::abs(g[i]));
  return f.space().modulus_norm(m);
}

PhaseDistance phase_distance(const LatticeVector& f, const LatticeVector& g) {
  require_same_space(f, g);
  const AtomSpace& space = f.space();
  const std::size_t n = f.size();
  std::vector<double> buffer(n);

  auto distance_at = [&](Scalar lambda) {
    for (std::size_t i = 0; i < n; ++i) buffer[i] = std::abs(f[i] - lambda * g[i]);
    return space.modulus_norm(buffer);
  };

  if (space.field() == Field::real) {
    const double plus = distance_at(1.0);
    const double minus = distance_at(-1.0);
    return plus <= minus ? PhaseDistance{plus, 1.0, 0.0} : PhaseDistance{minus, -1.0, 0.0};
  }

  const double step = 2.0 * std::numbers::pi / kPhaseGridPoints;
  int best_k = 0;
  double best = distance_at(1.0);
  for (int k = 1; k < kPhaseGridPoints; ++k) {
    const double d = distance_at(std::polar(1.0, k * step));
    if (d < best) {
      best = d;
      best_k = k;
    }
  }
  const double grid_bound = g.norm() * step / 2.0;

  const double centre = best_k * step;
  const auto refined = opt::golden_section(
      [&](double theta) { return distance_at(std::polar(1.0, theta)); }, centre - step,
      centre + step, 1e-12);
  PhaseDistance out{best, std::polar(1.0, centre), grid_bound};
  if (refined.value < best) {
    out.distance = refined.value;
    out.minimizer = std::polar(1.0, refined.x);
  }
  // Snap the reported phase to an exact root of unity when it is one to
  // machine precision (keeps +-1, +-i stable in reports).
  for (Scalar candidate : {Scalar(1, 0), Scalar(-1, 0), Scalar(0, 1), Scalar(0, -1)}) {
    if (std::abs(out.minimizer - candidate) < 1e-9) {
      const double d = distance_at(candidate);
      if (d <= out.distance + 1e-15) {
        out.distance = std::min(out.distance, d);
        out.minimizer = candidate;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double relative_min_singular_value(std::span<const LatticeVector> vectors) {
  if (vectors.empty()) return 0.0;
  const std::size_t m = vectors.front().size();
  Eigen::MatrixXcd a(m, vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j)
    for (std::size_t i = 0; i < m; ++i) a(i, j) = vectors[j][i];
  if (vectors.size() > m) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

Subspace::Subspace(SpacePtr ambient, std::vector<LatticeVector> basis)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {
  require(ambient_ != nullptr, ErrorKind::dimension, "subspace without an ambient space");
  require(!basis_.empty(), ErrorKind::dimension, "subspace needs dimension >= 1");
  for (const auto& b : basis_)
    require(same_space(b.space(), *ambient_), ErrorKind::dimension,
            "basis vector does not live in the ambient space");
  require(relative_min_singular_value(basis_) > kIndependenceTolerance, ErrorKind::dimension,
          "basis vectors are not linearly independent");
}

LatticeVector Subspace::combine(std::span<const Scalar> coefficients) const {
  require(coefficients.size() == basis_.size(), ErrorKind::dimension,
          "coefficient count does not match subspace dimension");
  std::vector<Scalar> z(ambient_->atom_count(), Scalar(0.0));
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    const Scalar c = coefficients[j];
    if (c == Scalar(0.0)) continue;
    const auto e = basis_[j].entries();
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += c * e[i];
  }
  return LatticeVector(ambient_, std::move(z));
}

LatticeVector Subspace::combine_real(std::span<const double> coefficients) const {
  std::vector<Scalar> c(coefficients.begin(), coefficients.end());
  return combine(c);
}

Subspace Subspace::with_norm(NormSpec norm) const {
  auto space = ambient_->with_norm(std::move(norm));
  std::vector<LatticeVector> basis;
  basis.reserve(basis_.size());
  for (const auto& b : basis_)
    basis.emplace_back(space, std::vector<Scalar>(b.entries().begin(), b.entries().end()));
  return Subspace(space, std::move(basis));
}

Subspace Subspace::rescaled(std::span<const double> factors) const {
  require(factors.size() == basis_.size(), ErrorKind::dimension, "one factor per basis vector");
  std::vector<LatticeVector> basis;
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    require(factors[j] > 0.0, ErrorKind::domain, "rescaling factors must be positive");
    basis.push_back(basis_[j].scaled(factors[j]));
  }
  return Subspace(ambient_, std::move(basis));
}

}  // namespace spr

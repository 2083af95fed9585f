#include "spr/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "spr/optimize.hpp"

namespace spr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCircleSamples = 720;
constexpr int kComplexSide = 30;
constexpr int kCheckSamples = 3600;
constexpr int kRefineRounds = 6;
constexpr double kOutside = 1e-6;
// a (1 + tol)-optimal ellipse keeps the John factor within sqrt(2 (1 + tol))
constexpr double kMveeTolerance = 1e-7;
constexpr int kMveeIterations = 200000;
constexpr double kFitTolerance = 1e-6;
constexpr double kSafety = 1e-3;

struct SpanNorm {
  const LatticeVector& f;
  const LatticeVector& g;

  double operator()(const Coords& c) const {
    std::vector<double> m(f.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(c[0] * f[i] + c[1] * g[i]);
    return f.space().modulus_norm(m);
  }
};

Coords real_coords(double theta) { return {Scalar(std::cos(theta)), Scalar(std::sin(theta))}; }

Coords complex_coords(double alpha, double beta) {
  return {Scalar(std::cos(alpha)), std::polar(std::sin(alpha), beta)};
}

double ratio(const HilbertSurrogate& h, const SpanNorm& n, const Coords& c) { return h.norm(c) / n(c); }

// Todd-Yildirim with away steps. Works for real points and for complex
// points of a circled body (the update formulas are the same).
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> mvee(const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& points,
                                                       double tol, int max_iterations) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index d = points.rows(), count = points.cols();
  require(count >= d, ErrorKind::degenerate_span, "too few points for an enclosing ellipsoid");
  const double dd = static_cast<double>(d);
  Eigen::VectorXd u = Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
  Mat m = points * u.cast<T>().asDiagonal() * points.adjoint();
  Mat tmp(d, count);
  Eigen::VectorXd kappa(count);

  for (int it = 0; it < max_iterations; ++it) {
    const Mat inv = m.inverse();
    tmp.noalias() = inv * points;
    kappa = points.conjugate().cwiseProduct(tmp).colwise().sum().real().transpose();
    Eigen::Index j = 0, k = -1;
    kappa.maxCoeff(&j);
    double kappa_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < count; ++i) {
      if (u(i) > 0.0 && kappa(i) < kappa_min) {
        kappa_min = kappa(i);
        k = i;
      }
    }
    const double up = kappa(j) / dd - 1.0;
    const double down = 1.0 - kappa_min / dd;
    if (up <= tol && down <= tol) break;

    Eigen::Index target = j;
    double step = (kappa(j) - dd) / (dd * (kappa(j) - 1.0));
    if (down > up && k >= 0) {
      target = k;
      step = (kappa(k) - dd) / (dd * (kappa(k) - 1.0));
      step = std::max(step, -u(k) / (1.0 - u(k)));
    }
    u *= (1.0 - step);
    u(target) += step;
    if (u(target) < 1e-300) u(target) = 0.0;
    m = (1.0 - step) * m + step * points.col(target) * points.col(target).adjoint();
  }
  return m.inverse() / dd;
}

// The same iteration specialised to the plane, warm-started from `u` (new
// points get weight zero).
template <class T>
Eigen::Matrix<T, 2, 2> mvee_plane(const Eigen::Matrix<T, 2, Eigen::Dynamic>& points, Eigen::VectorXd& u, double tol,
                                  int max_iterations) {
  using Mat2 = Eigen::Matrix<T, 2, 2>;
  const Eigen::Index count = points.cols();
  const Eigen::Index old = u.size();
  if (old == 0) {
    u = Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
  } else {
    u.conservativeResize(count);
    u.tail(count - old).setZero();
  }
  Mat2 m = Mat2::Zero();
  for (Eigen::Index i = 0; i < count; ++i) m += u(i) * points.col(i) * points.col(i).adjoint();
  Eigen::VectorXd kappa(count);

  for (int it = 0; it < max_iterations; ++it) {
    const Mat2 inv = m.inverse();
    for (Eigen::Index i = 0; i < count; ++i) kappa(i) = std::real(points.col(i).dot(inv * points.col(i)));
    Eigen::Index j = 0, k = -1;
    kappa.maxCoeff(&j);
    double kappa_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < count; ++i) {
      if (u(i) > 0.0 && kappa(i) < kappa_min) {
        kappa_min = kappa(i);
        k = i;
      }
    }
    const double up = kappa(j) / 2.0 - 1.0;
    const double down = 1.0 - kappa_min / 2.0;
    if (up <= tol && down <= tol) break;

    Eigen::Index target = j;
    double step = (kappa(j) - 2.0) / (2.0 * (kappa(j) - 1.0));
    if (down > up && k >= 0) {
      target = k;
      step = (kappa(k) - 2.0) / (2.0 * (kappa(k) - 1.0));
      step = std::max(step, -u(k) / (1.0 - u(k)));
    }
    u *= (1.0 - step);
    u(target) += step;
    if (u(target) < 1e-300) u(target) = 0.0;
    m = (1.0 - step) * m + step * points.col(target) * points.col(target).adjoint();
  }
  return m.inverse() / 2.0;
}

struct Extremes {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::vector<Coords> peaks;  ///< refined local maxima of the ratio
};

/// Extreme values of ||x||_H / ||x|| over the span, refined from a grid.
Extremes ratio_extremes(const HilbertSurrogate& h, const SpanNorm& n, bool complex_field) {
  Extremes ex;
  if (!complex_field) {
    const int count = kCheckSamples / 2;
    const double step = kPi / count;
    std::vector<double> r(count);
    for (int k = 0; k < count; ++k) r[k] = ratio(h, n, real_coords(k * step));
    for (int k = 0; k < count; ++k) {
      // ratio(t + pi) = ratio(t), so the grid wraps around
      const double prev = r[(k + count - 1) % count];
      const double next = r[(k + 1) % count];
      ex.lo = std::min(ex.lo, r[k]);
      ex.hi = std::max(ex.hi, r[k]);
      if (r[k] <= prev && r[k] <= next) {
        const auto m = opt::golden_section([&](double t) { return ratio(h, n, real_coords(t)); },
                                           (k - 1) * step, (k + 1) * step);
        ex.lo = std::min(ex.lo, m.value);
      }
      if (r[k] >= prev && r[k] >= next) {
        const auto m = opt::golden_section([&](double t) { return -ratio(h, n, real_coords(t)); },
                                           (k - 1) * step, (k + 1) * step);
        ex.hi = std::max(ex.hi, -m.value);
        ex.peaks.push_back(real_coords(m.x));
      }
    }
    return ex;
  }

  struct Sample {
    double value;
    double alpha, beta;
  };
  std::vector<Sample> samples;
  for (int i = 0; i <= 2 * kComplexSide; ++i) {
    for (int j = 0; j < 2 * kComplexSide; ++j) {
      const double a = (kPi / 2) * i / (2 * kComplexSide), b = kPi * j / kComplexSide;
      samples.push_back({ratio(h, n, complex_coords(a, b)), a, b});
    }
  }
  auto refine = [&](double sign) {
    std::sort(samples.begin(), samples.end(),
              [&](const Sample& x, const Sample& y) { return sign * x.value < sign * y.value; });
    double best = sign * samples.front().value;
    for (std::size_t k = 0; k < 6 && k < samples.size(); ++k) {
      opt::NelderMeadOptions o;
      o.initial_step = 0.02;
      o.max_evaluations = 400;
      const auto r = opt::nelder_mead(
          [&](const std::vector<double>& x) { return sign * ratio(h, n, complex_coords(x[0], x[1])); },
          {samples[k].alpha, samples[k].beta}, o);
      best = std::min(best, r.value);
      if (sign < 0) ex.peaks.push_back(complex_coords(r.x[0], r.x[1]));
    }
    return sign * best;
  };
  ex.lo = refine(1.0);
  ex.hi = refine(-1.0);
  return ex;
}

void check_sandwich(const HilbertSurrogate& h, const SpanNorm& n, bool complex_field) {
  auto check = [&](const Coords& c) {
    const double r = ratio(h, n, c);
    require(r >= 1.0 - kFitTolerance && r <= h.k_factor + kFitTolerance, ErrorKind::surrogate_quality,
            "Hilbert surrogate violates ||x|| <= ||x||_H <= K ||x|| (ratio " + std::to_string(r) + ")");
  };
  if (!complex_field) {
    for (int k = 0; k < kCheckSamples; ++k) check(real_coords(2 * kPi * (k + 0.5) / kCheckSamples));
  } else {
    for (int i = 0; i <= 2 * kComplexSide; ++i)
      for (int j = 0; j < 2 * kComplexSide; ++j)
        check(complex_coords((kPi / 2) * (i + 0.5) / (2 * kComplexSide + 1), kPi * (j + 0.5) / kComplexSide));
  }
}

}  // namespace

Scalar HilbertSurrogate::inner(const Coords& x, const Coords& y) const {
  Scalar s = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) s += std::conj(y[j]) * gram(j, k) * x[k];
  return s;
}

double HilbertSurrogate::norm(const Coords& x) const { return std::sqrt(std::max(0.0, inner(x, x).real())); }

Eigen::MatrixXd min_volume_ellipsoid(const Eigen::MatrixXd& points, double tol, int max_iterations) {
  return mvee<double>(points, tol, max_iterations);
}

namespace {

Eigen::Matrix2cd weighted_gram(const LatticeVector& f, const LatticeVector& g) {
  const std::array<const LatticeVector*, 2> pair{&f, &g};
  const auto w = f.space().weights();
  Eigen::Matrix2cd gram;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      Scalar s = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::conj((*pair[j])[i]) * (*pair[k])[i];
      gram(j, k) = s;
    }
  return gram;
}

// Surrogate for a pair that is roughly orthonormal, so that uniform samples
// in (f, g) coordinates cover the unit sphere evenly.
HilbertSurrogate fit_surrogate(const LatticeVector& f, const LatticeVector& g, bool complex_field) {
  HilbertSurrogate h;
  // Boundary points of the unit ball in (f, g) coordinates. The complex ball
  // is circled, so its ellipse is Hermitian and one point per complex line
  // through the origin is enough.
  const SpanNorm n{f, g};
  std::vector<Coords> boundary;
  if (!complex_field) {
    for (int k = 0; k < kCircleSamples; ++k) boundary.push_back(real_coords(2 * kPi * k / kCircleSamples));
  } else {
    for (int i = 0; i <= kComplexSide; ++i)
      for (int j = 0; j < kComplexSide; ++j)
        boundary.push_back(complex_coords((kPi / 2) * i / kComplexSide, 2 * kPi * j / kComplexSide));
  }
  for (auto& c : boundary) {
    const double s = n(c);
    c = {c[0] / s, c[1] / s};
  }

  Extremes ex;
  Eigen::VectorXd weights;
  for (int round = 0; round < kRefineRounds; ++round) {
    if (!complex_field) {
      Eigen::Matrix<double, 2, Eigen::Dynamic> pts(2, boundary.size());
      for (std::size_t k = 0; k < boundary.size(); ++k) pts.col(k) << boundary[k][0].real(), boundary[k][1].real();
      h.gram = (2.0 * mvee_plane<double>(pts, weights, kMveeTolerance, kMveeIterations)).cast<Scalar>();
    } else {
      Eigen::Matrix<Scalar, 2, Eigen::Dynamic> pts(2, boundary.size());
      for (std::size_t k = 0; k < boundary.size(); ++k) pts.col(k) << boundary[k][0], boundary[k][1];
      h.gram = 2.0 * mvee_plane<Scalar>(pts, weights, kMveeTolerance, kMveeIterations);
    }
    ex = ratio_extremes(h, n, complex_field);
    // Vertices of the ball that fall between samples stick out of the
    // ellipse and push the ratio past the John bound; add them and refit.
    if (ex.hi <= std::sqrt(2.0) * ex.lo) break;
    std::size_t added = 0;
    for (const auto& c : ex.peaks) {
      const double s = n(c);
      const Coords b{c[0] / s, c[1] / s};
      if (h.norm(b) * h.norm(b) > 2.0 * (1.0 + kOutside)) {
        boundary.push_back(b);
        ++added;
      }
    }
    if (added == 0) break;
  }

  h.gram /= ex.lo * ex.lo;
  h.measured_max = ex.hi / ex.lo;
  h.k_factor = std::min(h.measured_max * (1.0 + kSafety), std::sqrt(2.0) * (1.0 + kSafety));
  check_sandwich(h, n, complex_field);
  return h;
}

}  // namespace

HilbertSurrogate hilbert_surrogate(const LatticeVector& f, const LatticeVector& g) {
  require_same_space(f, g);
  const std::array<LatticeVector, 2> pair{f, g};
  require(relative_min_singular_value(pair) > kIndependenceTolerance, ErrorKind::degenerate_span,
          "f and g are linearly dependent");
  const AtomSpace& space = f.space();
  const Eigen::Matrix2cd gram = weighted_gram(f, g);
  if (const auto* lp = std::get_if<LpNorm>(&space.norm_spec()); lp && lp->p == 2.0) {
    HilbertSurrogate h;
    h.gram = gram;
    return h;
  }

  // fit in the frame (f, g) G^{-1/2}, then pull the gram back: G^{1/2} A G^{1/2}
  Eigen::Matrix2cd p, root;
  if (space.field() == Field::real) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gram.real());
    p = es.operatorInverseSqrt().cast<Scalar>();
    root = es.operatorSqrt().cast<Scalar>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(gram);
    p = es.operatorInverseSqrt();
    root = es.operatorSqrt();
  }
  const LatticeVector u = f.scaled(p(0, 0)) + g.scaled(p(1, 0));
  const LatticeVector v = f.scaled(p(0, 1)) + g.scaled(p(1, 1));
  HilbertSurrogate h = fit_surrogate(u, v, space.field() == Field::complex);
  h.gram = root * h.gram * root;
  return h;
}

double tightening_root(double sum_norm_sq, double inner_fg) {
  require(sum_norm_sq > 0.0, ErrorKind::degenerate_span, "||f + g||_H vanishes");
  const double t = std::max(0.0, inner_fg) / sum_norm_sq;
  const double disc = std::max(0.0, 1.0 - 4.0 * t);
  // 2t / (1 + sqrt(disc)) is the smaller root without cancellation
  return std::clamp(2.0 * t / (1.0 + std::sqrt(disc)), 0.0, 0.5);
}

WitnessPair tighten(const LatticeVector& f, const LatticeVector& g) {
  const HilbertSurrogate h = hilbert_surrogate(f, g);
  const Scalar ip = h.inner({1.0, 0.0}, {0.0, 1.0});
  Scalar lambda = 1.0;
  if (f.space().field() == Field::real) {
    lambda = ip.real() >= 0.0 ? 1.0 : -1.0;
  } else if (std::abs(ip) > 0.0) {
    lambda = ip / std::abs(ip);
  }
  const double c = std::abs(ip);
  const double sum_sq = std::pow(h.norm({1.0, lambda}), 2);
  const double r = tightening_root(sum_sq, c);

  const LatticeVector gl = g.scaled(lambda);
  WitnessPair w{f.scaled(1.0 - r) - gl.scaled(r),
                gl.scaled(1.0 - r) - f.scaled(r),
                h.k_factor,
                r,
                lambda,
                {1.0 - r, -r * lambda},
                {-r, (1.0 - r) * lambda},
                h};

  const double orth = std::abs(h.inner(w.f_coords, w.g_coords));
  require(orth <= 1e-9 * h.norm(w.f_coords) * h.norm(w.g_coords) + 1e-300, ErrorKind::surrogate_quality,
          "tightened pair is not H-orthogonal");
  const WitnessReport report = verify_witness(w, f, g);
  require(report.slack_phase >= -1e-8, ErrorKind::surrogate_quality, "tightened pair loses the phase distance bound");
  require(report.slack_norm >= -1e-8, ErrorKind::surrogate_quality, "tightened pair is not almost orthogonal");
  require(report.slack_modulus >= -1e-8, ErrorKind::surrogate_quality, "tightened pair increases the modulus gap");
  return w;
}

WitnessReport verify_witness(const WitnessPair& w, const LatticeVector& f, const LatticeVector& g, double tol) {
  WitnessReport r;
  const double pd_prime = phase_distance(w.f_prime, w.g_prime).distance;
  r.slack_phase = w.k_factor * pd_prime - phase_distance(f, g).distance;
  r.slack_norm = w.k_factor * pd_prime - std::hypot(w.f_prime.norm(), w.g_prime.norm());
  r.slack_modulus = modulus_gap(f, g) - modulus_gap(w.f_prime, w.g_prime);
  r.pass = r.slack_phase >= -tol && r.slack_norm >= -tol && r.slack_modulus >= -tol;
  return r;
}

}  // namespace spr

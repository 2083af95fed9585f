#pragma once

// Fast evaluation of vectors in a subspace from raw coefficient arrays. Real
// subspaces take one double per basis vector, complex ones take (re, im).

#include <random>
#include <vector>

#include "spr/space.hpp"

namespace spr::detail {

class SpanSampler;

struct Point {
  std::vector<Scalar> z;
  std::vector<double> modulus;
  double norm = 0.0;

  LatticeVector vector(const SpanSampler& s) const;
  LatticeVector unit_vector(const SpanSampler& s) const;
};

class SpanSampler {
 public:
  explicit SpanSampler(const Subspace& e)
      : e_(e), n_(e.dimension()), m_(e.ambient().atom_count()), complex_(e.field() == Field::complex) {
    basis_.resize(n_ * m_);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < m_; ++i) basis_[j * m_ + i] = e.basis()[j][i];
  }

  std::size_t dimension() const { return n_; }
  std::size_t atoms() const { return m_; }
  std::size_t param_size() const { return complex_ ? 2 * n_ : n_; }
  bool is_complex() const { return complex_; }
  const AtomSpace& space() const { return e_.ambient(); }
  const Subspace& subspace() const { return e_; }

  std::vector<double> random_params(std::mt19937_64& rng) const {
    std::normal_distribution<double> gauss;
    std::vector<double> p(param_size());
    for (auto& x : p) x = gauss(rng);
    return p;
  }

  Point point(const double* params) const {
    Point out;
    out.z.assign(m_, Scalar(0.0));
    for (std::size_t j = 0; j < n_; ++j) {
      const Scalar c = complex_ ? Scalar(params[2 * j], params[2 * j + 1]) : Scalar(params[j], 0.0);
      if (c == Scalar(0.0)) continue;
      const Scalar* b = &basis_[j * m_];
      if (complex_) {
        for (std::size_t i = 0; i < m_; ++i) out.z[i] += c * b[i];
      } else {
        for (std::size_t i = 0; i < m_; ++i) out.z[i] += Scalar(c.real() * b[i].real(), 0.0);
      }
    }
    finish(out);
    return out;
  }

  Point add(const Point& f, const Point& g, double sign) const {
    Point out;
    out.z.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) out.z[i] = f.z[i] + sign * g.z[i];
    finish(out);
    return out;
  }

  Point scale(const Point& f, double factor) const {
    Point out;
    out.z.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) out.z[i] = factor * f.z[i];
    finish(out);
    return out;
  }

  double modulus_gap(const Point& f, const Point& g) const {
    std::vector<double> buf(m_);
    for (std::size_t i = 0; i < m_; ++i) buf[i] = std::abs(f.modulus[i] - g.modulus[i]);
    return space().modulus_norm(buf);
  }

  double phase_distance(const Point& f, const Point& g) const {
    if (!complex_) return std::min(add(f, g, -1.0).norm, add(f, g, 1.0).norm);
    return spr::phase_distance(f.vector(*this), g.vector(*this)).distance;
  }

  /// Basis pairs (b_i, b_j) and (b_i + b_j, b_i - b_j), concatenated params.
  std::vector<std::vector<double>> structured_pairs(std::size_t max_dimension = 64) const {
    std::vector<std::vector<double>> out;
    if (n_ > max_dimension) return out;
    const std::size_t w = param_size();
    const std::size_t stride = complex_ ? 2 : 1;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        std::vector<double> p(2 * w, 0.0);
        p[i * stride] = 1.0;
        p[w + j * stride] = 1.0;
        out.push_back(p);
        std::vector<double> q(2 * w, 0.0);
        q[i * stride] = 1.0;
        q[j * stride] = 1.0;
        q[w + i * stride] = 1.0;
        q[w + j * stride] = -1.0;
        out.push_back(q);
        if (complex_) {
          std::vector<double> r(2 * w, 0.0);
          r[i * stride] = 1.0;
          r[j * stride + 1] = 1.0;
          r[w + i * stride] = 1.0;
          r[w + j * stride + 1] = -1.0;
          out.push_back(r);
        }
      }
    }
    return out;
  }

  /// b_i and b_i +- b_j.
  std::vector<std::vector<double>> structured_singles(std::size_t max_dimension = 64) const {
    std::vector<std::vector<double>> out;
    if (n_ > max_dimension) return out;
    const std::size_t w = param_size();
    const std::size_t stride = complex_ ? 2 : 1;
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<double> p(w, 0.0);
      p[i * stride] = 1.0;
      out.push_back(p);
      for (std::size_t j = i + 1; j < n_; ++j) {
        for (double s : {1.0, -1.0}) {
          std::vector<double> q(w, 0.0);
          q[i * stride] = 1.0;
          q[j * stride] = s;
          out.push_back(q);
        }
      }
    }
    return out;
  }

 private:
  void finish(Point& p) const {
    p.modulus.resize(m_);
    for (std::size_t i = 0; i < m_; ++i)
      p.modulus[i] = complex_ ? std::abs(p.z[i]) : std::abs(p.z[i].real());
    p.norm = space().modulus_norm(p.modulus);
  }

  const Subspace& e_;
  std::size_t n_, m_;
  bool complex_;
  std::vector<Scalar> basis_;
};

inline LatticeVector Point::vector(const SpanSampler& s) const {
  return LatticeVector(s.subspace().ambient_ptr(), z);
}

inline LatticeVector Point::unit_vector(const SpanSampler& s) const {
  return vector(s).normalized();
}

}  // namespace spr::detail

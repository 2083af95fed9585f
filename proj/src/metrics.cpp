#include "spr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "detail/span_sampler.hpp"
#include "spr/optimize.hpp"
#include "spr/parallel.hpp"

namespace spr {

using detail::Point;
using detail::SpanSampler;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Indices of the k smallest values (ties by index).
std::vector<std::size_t> smallest(const std::vector<double>& values, std::size_t k) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      return values[a] < values[b] || (values[a] == values[b] && a < b);
                    });
  idx.resize(k);
  return idx;
}

/// Minimizes objective(params_f ++ params_g) over random pairs, structured
/// basis pairs, and Nelder-Mead refinement of the best starts.
struct PairSearchResult {
  double value = kInf;
  std::vector<double> params;
};

PairSearchResult search_pairs(const SpanSampler& sampler, const SearchBudget& budget, std::uint64_t seed,
                              std::uint64_t stream,
                              const std::function<double(const std::vector<double>&)>& objective,
                              bool refine = true) {
  const std::size_t width = 2 * sampler.param_size();
  const auto structured = sampler.structured_pairs();
  const std::size_t total = structured.size() + budget.pairs;

  auto params_for = [&](std::size_t i) {
    if (i < structured.size()) return structured[i];
    auto rng = sample_rng(seed, i - structured.size(), stream);
    auto p = sampler.random_params(rng);
    auto q = sampler.random_params(rng);
    p.insert(p.end(), q.begin(), q.end());
    return p;
  };

  std::vector<double> values(total);
  parallel_for(total, [&](std::size_t i) { values[i] = objective(params_for(i)); });

  PairSearchResult best;
  const auto starts = smallest(values, std::max<std::size_t>(1, budget.refine_starts));
  best.value = values[starts.front()];
  best.params = params_for(starts.front());
  if (!refine || budget.refine_starts == 0) return best;

  std::vector<PairSearchResult> refined(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) {
    opt::NelderMeadOptions o;
    o.max_evaluations = budget.refine_evaluations;
    o.initial_step = 0.1;
    auto r = opt::nelder_mead(objective, params_for(starts[k]), o);
    refined[k] = {r.value, std::move(r.x)};
  });
  for (auto& r : refined) {
    if (r.params.size() == width && r.value < best.value) best = std::move(r);
  }
  return best;
}

double unit_meet(const SpanSampler& s, const Point& f, const Point& g, std::vector<double>& buf) {
  if (f.norm <= 0.0 || g.norm <= 0.0) return kInf;
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = std::min(f.modulus[i] / f.norm, g.modulus[i] / g.norm);
  return s.space().modulus_norm(buf);
}

struct Ratio {
  double value = 0.0;
  bool pr_failure = false;
  bool skipped = false;
};

/// phase_distance / modulus gap with the zero-denominator convention: equal
/// vectors up to phase are skipped, |f| = |g| with f != lambda g is a failure.
Ratio stability_ratio(const SpanSampler& s, const Point& f, const Point& g) {
  const double scale = f.norm + g.norm;
  if (scale <= 0.0) return {0.0, false, true};
  const double gap = s.modulus_gap(f, g);
  const double pd = s.phase_distance(f, g);
  if (gap <= 1e-13 * scale) {
    if (pd <= 1e-9 * scale) return {0.0, false, true};
    return {kInf, true, false};
  }
  return {pd / gap, false, false};
}

}  // namespace

// ---------------------------------------------------------------------------

SPRCertificate disjointness_constant(const Subspace& e, const SearchBudget& budget, std::uint64_t seed) {
  const SpanSampler sampler(e);
  const std::size_t n = sampler.param_size();
  auto objective = [&](const std::vector<double>& p) {
    thread_local std::vector<double> buf;
    buf.resize(sampler.atoms());
    const Point f = sampler.point(p.data());
    const Point g = sampler.point(p.data() + n);
    return unit_meet(sampler, f, g, buf);
  };
  const auto found = search_pairs(sampler, budget, seed, 1, objective);

  SPRCertificate cert;
  cert.seed = seed;
  cert.budget = budget;
  cert.method = "sampled";
  const LatticeVector f = sampler.point(found.params.data()).unit_vector(sampler);
  const LatticeVector g = sampler.point(found.params.data() + n).unit_vector(sampler);
  cert.epsilon_upper = std::clamp(found.value, 0.0, 1.0);
  cert.witnesses.push_back({"epsilon", f, g, cert.epsilon_upper});

  if (e.dimension() == 2 && budget.grid_step > 0.0) {
    const double step =
        e.field() == Field::complex ? std::max(budget.grid_step, oracle::kComplexGridStep) : budget.grid_step;
    const auto grid = oracle::grid_disjointness_min(e, step);
    if (grid.grid_min < cert.epsilon_upper) {
      cert.epsilon_upper = std::clamp(grid.grid_min, 0.0, 1.0);
      cert.witnesses.push_back({"grid-epsilon", *grid.f, *grid.g, grid.grid_min});
    }
    cert.epsilon_lower = std::clamp(grid.certified_lower, 0.0, cert.epsilon_upper);
    cert.method = grid.method;
    cert.tolerance = grid.error_bound;
  }
  if (e.dimension() == 1) {
    // unit vectors of a line differ by a phase, so the meet is always 1
    cert.epsilon_upper = 1.0;
    cert.epsilon_lower = 1.0;
    cert.method = "exact";
    cert.witnesses.back() = {"epsilon", f, f, 1.0};
  }

  // The sum/difference pair of the best witness realizes ratio ~ 1/meet.
  const auto& w = cert.witnesses.back();
  const LatticeVector x = w.f + w.g, y = w.f - w.g;
  const double gap = modulus_gap(x, y);
  const double pd = phase_distance(x, y).distance;
  if (gap > 1e-13 * (x.norm() + y.norm())) {
    cert.spr_lower = pd / gap;
  } else if (pd > 1e-9) {
    cert.spr_lower = kInf;
    cert.pr_failure = true;
  }
  cert.witnesses.push_back({"spr", x, y, cert.spr_lower});
  if (cert.epsilon_lower) {
    cert.spr_interval = std::pair{cert.epsilon_upper > 0 ? 1.0 / cert.epsilon_upper : kInf,
                                  *cert.epsilon_lower > 0 ? 2.0 / *cert.epsilon_lower : kInf};
  }
  return cert;
}

SprLowerBound spr_constant_lower(const Subspace& e, const SearchBudget& budget, std::uint64_t seed) {
  const SpanSampler sampler(e);
  const std::size_t n = sampler.param_size();

  // Each candidate scores the sampled pair and its sum/difference pair.
  auto build = [&](const std::vector<double>& p, bool sum_difference) {
    Point f = sampler.point(p.data());
    Point g = sampler.point(p.data() + n);
    if (sum_difference) return std::pair{sampler.add(f, g, 1.0), sampler.add(f, g, -1.0)};
    return std::pair{std::move(f), std::move(g)};
  };
  auto score = [&](const std::vector<double>& p, bool& failure, bool& sd_wins) {
    failure = false;
    sd_wins = false;
    double best = 0.0;
    for (bool sd : {false, true}) {
      const auto [f, g] = build(p, sd);
      const Ratio r = stability_ratio(sampler, f, g);
      if (r.skipped) continue;
      if (r.pr_failure) {
        failure = true;
        sd_wins = sd;
        return kInf;
      }
      if (r.value > best) {
        best = r.value;
        sd_wins = sd;
      }
    }
    return best;
  };
  auto objective = [&](const std::vector<double>& p) {
    bool failure = false, sd = false;
    const double v = score(p, failure, sd);
    return failure ? -1e300 : -v;
  };

  const auto found = search_pairs(sampler, budget, seed, 2, objective);

  SprLowerBound out;
  bool failure = false, sd = false;
  out.value = score(found.params, failure, sd);
  out.pr_failure = failure;
  const auto [f, g] = build(found.params, sd);
  out.f = f.vector(sampler);
  out.g = g.vector(sampler);
  return out;
}

SPRCertificate certify(const Subspace& e, const SearchBudget& budget, std::uint64_t seed) {
  SPRCertificate cert = disjointness_constant(e, budget, seed);
  const auto lower = spr_constant_lower(e, budget, seed);
  if (lower.value > cert.spr_lower) {
    cert.spr_lower = lower.value;
    cert.witnesses.push_back({"spr-search", *lower.f, *lower.g, lower.value});
  }
  cert.pr_failure = cert.pr_failure || lower.pr_failure;

  if (e.dimension() == 2 && budget.grid_step > 0.0) {
    const double step = e.field() == Field::complex ? std::max(budget.grid_step, oracle::kComplexSprGridStep)
                                                    : budget.grid_step;
    const auto grid = oracle::grid_spr_sup(e, step);
    if (grid.value > cert.spr_lower) {
      cert.spr_lower = grid.value;
      cert.witnesses.push_back({"grid-spr", *grid.f, *grid.g, grid.value});
    }
    cert.pr_failure = cert.pr_failure || grid.pr_failure;
  }

  if (cert.pr_failure) {
    cert.spr_lower = kInf;
    if (e.field() == Field::real) {
      // |f| = |g| makes (f+g)/2 and (f-g)/2 disjoint.
      for (auto it = cert.witnesses.rbegin(); it != cert.witnesses.rend(); ++it) {
        if (!std::isinf(it->value) || it->role == "epsilon") continue;
        const LatticeVector u = 0.5 * (it->f + it->g), v = 0.5 * (it->f - it->g);
        if (u.norm() > 0 && v.norm() > 0) {
          const LatticeVector un = u.normalized(), vn = v.normalized();
          const double m = meet_norm(un, vn);
          if (m < cert.epsilon_upper) {
            cert.epsilon_upper = m;
            cert.witnesses.push_back({"disjoint", un, vn, m});
          }
        }
        break;
      }
      if (cert.epsilon_lower) cert.epsilon_lower = std::min(*cert.epsilon_lower, cert.epsilon_upper);
    }
  }
  if (cert.epsilon_lower) {
    cert.spr_interval = std::pair{cert.epsilon_upper > 0 ? 1.0 / cert.epsilon_upper : kInf,
                                  *cert.epsilon_lower > 0 ? 2.0 / *cert.epsilon_lower : kInf};
  }
  return cert;
}

SandwichReport sandwich_check(const SPRCertificate& cert, double c_lower, double tol) {
  require(cert.epsilon_lower.has_value(), ErrorKind::not_certified,
          "sandwich check needs a grid-certified epsilon lower bound");
  SandwichReport r;
  r.lower_bound = cert.epsilon_upper > 0 ? 1.0 / cert.epsilon_upper - tol : kInf;
  r.upper_bound = *cert.epsilon_lower > 0 ? 2.0 / *cert.epsilon_lower + tol : kInf;
  const bool lower_ok = std::isinf(r.lower_bound) ? std::isinf(c_lower) : c_lower >= r.lower_bound;
  const bool upper_ok = std::isinf(r.upper_bound) || c_lower <= r.upper_bound;
  r.lower_slack = std::isinf(r.lower_bound) ? (std::isinf(c_lower) ? 0.0 : -kInf) : c_lower - r.lower_bound;
  r.upper_slack = std::isinf(r.upper_bound) ? kInf : r.upper_bound - c_lower;
  r.pass = lower_ok && upper_ok;
  return r;
}

double holder_to_spr(const HolderParams& h) {
  require(h.gamma > 0.0 && h.gamma <= 1.0, ErrorKind::domain, "Holder exponent must lie in (0, 1]");
  require(h.c_holder > 0.0, ErrorKind::domain, "Holder constant must be positive");
  return std::sqrt(2.0) * std::pow(std::sqrt(8.0) * h.c_holder, 1.0 / h.gamma);
}

// ---------------------------------------------------------------------------

NormRatioBounds norm_equivalence_bounds(const Subspace& e, double p, double q, const SearchBudget& budget,
                                        std::uint64_t seed) {
  require(p >= 1.0 && q >= 1.0, ErrorKind::domain, "norm equivalence needs p, q >= 1");
  e.ambient().require_probability("norm_equivalence_bounds");
  const SpanSampler sampler(e);
  const auto sp = e.ambient().with_norm(LpNorm{p});
  const auto sq = e.ambient().with_norm(LpNorm{q});
  auto ratio = [&](const double* params) {
    const Point x = sampler.point(params);
    const double den = sq->modulus_norm(x.modulus);
    return den > 0 ? sp->modulus_norm(x.modulus) / den : std::numeric_limits<double>::quiet_NaN();
  };

  const std::size_t n = sampler.param_size();
  const auto singles = sampler.structured_singles();
  const std::size_t total = singles.size() + budget.pairs;
  auto params_for = [&](std::size_t i) {
    if (i < singles.size()) return singles[i];
    auto rng = sample_rng(seed, i - singles.size(), 3);
    return sampler.random_params(rng);
  };
  std::vector<double> values(total);
  parallel_for(total, [&](std::size_t i) {
    const auto prm = params_for(i);
    values[i] = ratio(prm.data());
  });

  NormRatioBounds out{kInf, 0.0};
  for (double v : values) {
    if (std::isnan(v)) continue;
    out.lo = std::min(out.lo, v);
    out.hi = std::max(out.hi, v);
  }
  if (n > 1) {
    for (int direction : {1, -1}) {
      std::vector<double> signed_values(values.size());
      for (std::size_t i = 0; i < values.size(); ++i)
        signed_values[i] = std::isnan(values[i]) ? kInf : direction * values[i];
      for (std::size_t start : smallest(signed_values, budget.refine_starts)) {
        opt::NelderMeadOptions o;
        o.max_evaluations = budget.refine_evaluations;
        auto r = opt::nelder_mead(
            [&](const std::vector<double>& prm) {
              const double v = ratio(prm.data());
              return std::isnan(v) ? kInf : direction * v;
            },
            params_for(start), o);
        const double v = direction * r.value;
        out.lo = std::min(out.lo, v);
        out.hi = std::max(out.hi, v);
      }
    }
  }
  if (e.dimension() == 2 && e.field() == Field::real && budget.grid_step > 0.0) {
    const std::size_t k = static_cast<std::size_t>(std::ceil(std::numbers::pi / budget.grid_step));
    for (std::size_t i = 0; i < k; ++i) {
      const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
      const double prm[2] = {std::cos(t), std::sin(t)};
      const double v = ratio(prm);
      out.lo = std::min(out.lo, v);
      out.hi = std::max(out.hi, v);
    }
  }
  return out;
}

double joint_level_mass(const Subspace& e, double alpha, const SearchBudget& budget, std::uint64_t seed) {
  require(alpha > 0.0, ErrorKind::domain, "alpha must be positive");
  e.ambient().require_probability("joint_level_mass");
  const SpanSampler sampler(e);
  const std::size_t n = sampler.param_size();
  const auto w = e.ambient().weights();
  auto objective = [&](const std::vector<double>& p) {
    const Point x = sampler.point(p.data());
    const Point y = sampler.point(p.data() + n);
    if (x.norm <= 0 || y.norm <= 0) return kInf;
    double mass = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t)
      if (x.modulus[t] >= alpha * x.norm && y.modulus[t] >= alpha * y.norm) mass += w[t];
    return mass;
  };
  // The objective is piecewise constant, so only sampling is used.
  return search_pairs(sampler, budget, seed, 4, objective, false).value;
}

double nonsquare_constant(const Subspace& e, const SearchBudget& budget, std::uint64_t seed) {
  require(e.dimension() >= 2, ErrorKind::dimension, "non-squareness needs dimension >= 2");
  const SpanSampler sampler(e);
  const std::size_t n = sampler.param_size();
  auto objective = [&](const std::vector<double>& p) {
    const Point f = sampler.point(p.data());
    const Point g = sampler.point(p.data() + n);
    if (f.norm <= 0 || g.norm <= 0) return kInf;
    const Point fu = sampler.scale(f, 1.0 / f.norm), gu = sampler.scale(g, 1.0 / g.norm);
    const double plus = sampler.add(fu, gu, 1.0).norm;
    const double minus = sampler.add(fu, gu, -1.0).norm;
    return std::max(0.0, 2.0 - std::min(plus, minus));
  };
  return search_pairs(sampler, budget, seed, 5, objective).value;
}

std::vector<InterpRow> interp_extrap_report(const Subspace& e, double p, double q,
                                            const std::vector<double>& r_list, double spr_constant_q,
                                            const SearchBudget& budget, std::uint64_t seed) {
  require(p >= 1.0 && q >= 1.0 && q < p, ErrorKind::domain, "interp/extrap needs 1 <= q < p");
  for (double r : r_list) require(r >= 1.0 && r <= p, ErrorKind::domain, "every r must lie in [1, p]");

  std::optional<double> equivalence_pq;
  if (std::isfinite(spr_constant_q)) equivalence_pq = norm_equivalence_bounds(e, p, q, budget, seed).hi;

  std::vector<InterpRow> rows;
  for (double r : r_list) {
    InterpRow row;
    row.r = r;
    const Subspace er = e.with_norm(LpNorm{r});
    row.certificate = certify(er, budget, seed);
    row.epsilon_positive = row.certificate.epsilon_upper > 0.0;
    row.spr_finite = std::isfinite(row.certificate.spr_lower);
    if (equivalence_pq) {
      if (r >= q) {
        // ||.||_r <= ||.||_p <= C ||.||_q and ||.||_q <= ||.||_r on a probability space
        row.chain_bound = *equivalence_pq * spr_constant_q;
      } else {
        const double c_pr = norm_equivalence_bounds(e, p, r, budget, seed).hi;
        const double theta = (1.0 / q - 1.0 / p) / (1.0 / r - 1.0 / p);
        row.chain_bound = holder_to_spr({theta, c_pr * spr_constant_q});
      }
      row.chain_respected = row.certificate.spr_lower <= *row.chain_bound * (1.0 + 1e-9);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace spr

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rejectlab/abstain.hpp"
#include "rejectlab/constructions.hpp"
#include "rejectlab/convert.hpp"
#include "rejectlab/cover.hpp"
#include "rejectlab/domain.hpp"
#include "rejectlab/erm.hpp"
#include "rejectlab/errors.hpp"
#include "rejectlab/risk.hpp"
#include "rejectlab/rng.hpp"

namespace rejectlab {

enum class LearnerKind { erm, abstain, finite_diameter, dist_dependent, memorize, oracle };

inline const char* learner_name(LearnerKind k) {
  switch (k) {
    case LearnerKind::erm: return "erm";
    case LearnerKind::abstain: return "abstain";
    case LearnerKind::finite_diameter: return "finite_diameter";
    case LearnerKind::dist_dependent: return "dist_dependent";
    case LearnerKind::memorize: return "memorize";
    case LearnerKind::oracle: return "oracle";
  }
  return "unknown";
}

struct LearnerSpec {
  LearnerKind kind = LearnerKind::erm;
  double p = 0.25;           // rejection parameter (abstain; also R^p evaluation)
  double h = 1.0;            // margin level the conversion is tuned to
  double c = 1.0;            // almost-ERM slack constant
  double c1 = 1.0 / 128.0;   // diameter fixed-point constant
  double c2 = 128.0;         // cover radius constant
  double delta = 0.05;
  std::size_t cover_budget = kDefaultCoverAtomBudget;
  std::optional<std::size_t> d_override;
};

enum class RiskTag { standard, reject, zero_reject };

inline const char* risk_name(RiskTag t) {
  switch (t) {
    case RiskTag::standard: return "R";
    case RiskTag::reject: return "R^p";
    case RiskTag::zero_reject: return "R^0";
  }
  return "unknown";
}

struct CurveRow {
  std::size_t n = 0;
  double mean_excess = 0.0;
  double stderr_excess = 0.0;
  double mean_abstain_mass = 0.0;
  std::size_t reps = 0;
};

struct LearningCurve {
  std::string learner;
  std::string risk;
  std::uint64_t seed = 0;
  std::vector<CurveRow> rows;
};

// A data-generating setup per phase size n; rate experiments may scale the
// distribution with n to expose worst-case behavior.
using ConstructionFamily = std::function<Construction(std::size_t)>;

namespace detail {

inline std::size_t sample_multiplier(LearnerKind k) {
  switch (k) {
    case LearnerKind::erm:
    case LearnerKind::memorize: return 1;
    case LearnerKind::abstain: return 2;
    case LearnerKind::finite_diameter:
    case LearnerKind::dist_dependent: return 3;
    case LearnerKind::oracle: return 0;
  }
  return 1;
}

inline double abstained_mass(const AbstainingHypothesis& f, const FiniteDistribution& dist) {
  double mass = 0.0;
  for (DomainPoint x = 0; x < f.domain_size(); ++x)
    if (f.abstains(x)) mass += dist.weight(x);
  return mass;
}

struct RepOutcome {
  double excess = 0.0;
  double abstain_mass = 0.0;
};

inline RepOutcome run_replication(const Construction& con, const LearnerSpec& spec, RiskTag risk, std::size_t n,
                                  RngStream& rng) {
  const std::size_t draw = sample_multiplier(spec.kind) * n;
  AbstainingHypothesis pred(con.cls.domain_size(), 0);
  switch (spec.kind) {
    case LearnerKind::erm: {
      const LabeledSample s = sample(con.dist, draw, rng);
      pred = AbstainingHypothesis(erm(con.cls, s));
      break;
    }
    case LearnerKind::abstain: {
      const LabeledSample s = sample(con.dist, draw, rng);
      pred = abstaining_learner(con.cls, s, spec.delta, spec.p, spec.c, spec.d_override).predictor;
      break;
    }
    case LearnerKind::finite_diameter: {
      const LabeledSample s = sample(con.dist, draw, rng);
      pred = AbstainingHypothesis(
          finite_diameter_learner(con.cls, s, spec.delta, spec.h, spec.c, spec.d_override).output);
      break;
    }
    case LearnerKind::dist_dependent: {
      const LabeledSample s = sample(con.dist, draw, rng);
      pred = AbstainingHypothesis(distribution_dependent_learner(con.cls, s, spec.delta, con.dist, spec.c1,
                                                                 spec.c2, spec.c, spec.cover_budget,
                                                                 spec.d_override)
                                      .output);
      break;
    }
    case LearnerKind::memorize: {
      const LabeledSample s = sample(con.dist, draw, rng);
      pred = AbstainingHypothesis(memorizing_learner(s, con.cls[0]));
      break;
    }
    case LearnerKind::oracle: {
      pred = AbstainingHypothesis(con.cls[con.meta.fstar_index]);
      break;
    }
  }

  double price_p = 0.0;  // evaluation parameter: R == R^p on committed output
  if (risk == RiskTag::reject) price_p = spec.p;
  RepOutcome out;
  out.excess = population_reject_risk(pred, con.dist, price_p) - con.meta.fstar_risk;
  out.abstain_mass = abstained_mass(pred, con.dist);
  return out;
}

}  // namespace detail

// Monte Carlo learning curve: per (n, rep) draw a fresh sample from its own
// RNG stream, train, and score the exact population excess. Aggregation runs
// in replication order, so results are byte-identical for any worker count,
// and adding grid points never perturbs existing rows.
inline LearningCurve monte_carlo_curve(const ConstructionFamily& family, const LearnerSpec& spec,
                                       const std::vector<std::size_t>& n_grid, std::size_t reps, RiskTag risk,
                                       std::uint64_t seed, std::size_t workers = 1) {
  require(!n_grid.empty(), "phase-size grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    require(n_grid[i] >= 1, "phase sizes must be positive");
    require(i == 0 || n_grid[i - 1] < n_grid[i], "phase-size grid must be strictly increasing");
  }
  require(reps >= 2, "need at least 2 replications for a standard error");
  if (spec.kind == LearnerKind::abstain && risk == RiskTag::standard)
    throw validation_error("the plain risk is undefined for an abstaining learner; evaluate R^p or R^0");
  require(spec.p >= 0.0 && spec.p <= 0.5, "rejection parameter p must lie in [0, 1/2]");

  LearningCurve curve;
  curve.learner = learner_name(spec.kind);
  curve.risk = risk_name(risk);
  curve.seed = seed;

  const std::size_t nworkers = std::max<std::size_t>(1, std::min(workers, reps));
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const std::size_t n = n_grid[ni];
    const Construction con = family(n);
    require(con.cls.size() >= 1, "construction with an empty class");
    if (spec.kind == LearnerKind::memorize && con.meta.h < 1.0)
      throw validation_error("memorize learner requires noiseless labels (margin level 1)");

    std::vector<detail::RepOutcome> outcomes(reps);
    const auto run_range = [&](std::size_t first, std::size_t last) {
      for (std::size_t rep = first; rep < last; ++rep) {
        RngStream rng = make_stream(seed, ni, rep);
        outcomes[rep] = detail::run_replication(con, spec, risk, n, rng);
      }
    };
    if (nworkers == 1) {
      run_range(0, reps);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (reps + nworkers - 1) / nworkers;
      for (std::size_t w = 0; w < nworkers; ++w) {
        const std::size_t first = w * chunk;
        const std::size_t last = std::min(reps, first + chunk);
        if (first >= last) break;
        pool.emplace_back(run_range, first, last);
      }
      for (std::thread& t : pool) t.join();
    }

    CurveRow row;
    row.n = n;
    row.reps = reps;
    double sum = 0.0, mass_sum = 0.0;
    for (const auto& o : outcomes) {
      sum += o.excess;
      mass_sum += o.abstain_mass;
    }
    row.mean_excess = sum / static_cast<double>(reps);
    row.mean_abstain_mass = mass_sum / static_cast<double>(reps);
    double sq = 0.0;
    for (const auto& o : outcomes) sq += (o.excess - row.mean_excess) * (o.excess - row.mean_excess);
    row.stderr_excess = std::sqrt(sq / (static_cast<double>(reps) * static_cast<double>(reps - 1)));
    curve.rows.push_back(row);
  }
  return curve;
}

inline LearningCurve monte_carlo_curve(const Construction& con, const LearnerSpec& spec,
                                       const std::vector<std::size_t>& n_grid, std::size_t reps, RiskTag risk,
                                       std::uint64_t seed, std::size_t workers = 1) {
  return monte_carlo_curve([&con](std::size_t) { return con; }, spec, n_grid, reps, risk, seed, workers);
}

enum class CurveField { excess, abstain_mass };

// Least-squares slope of log(value) against log(n); the exponent estimate
// for power-law decay. Optionally weighted by the squared mean-to-stderr
// ratio (the delta-method precision of the log mean).
inline double fit_rate_slope(const LearningCurve& curve, CurveField field = CurveField::excess,
                             bool weighted = false) {
  require(curve.rows.size() >= 3, "slope fitting needs at least 3 grid points");
  std::vector<double> x, y, w;
  for (const CurveRow& row : curve.rows) {
    const double v = field == CurveField::excess ? row.mean_excess : row.mean_abstain_mass;
    if (!(v > 0.0)) throw validation_error("rate degenerate (exact zero excess)");
    x.push_back(std::log(static_cast<double>(row.n)));
    y.push_back(std::log(v));
    if (weighted) {
      require(row.stderr_excess > 0.0, "weighted fit needs positive standard errors");
      w.push_back((v / row.stderr_excess) * (v / row.stderr_excess));
    } else {
      w.push_back(1.0);
    }
  }
  double wsum = 0.0, xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    wsum += w[i];
    xbar += w[i] * x[i];
    ybar += w[i] * y[i];
  }
  xbar /= wsum;
  ybar /= wsum;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += w[i] * (x[i] - xbar) * (y[i] - ybar);
    den += w[i] * (x[i] - xbar) * (x[i] - xbar);
  }
  require(den > 0.0, "slope fitting needs at least two distinct phase sizes");
  return num / den;
}

// Per grid row, n * p * mean_excess / (d log(n/d) + log(1/delta)) with the
// clamped-log convention: the observed constant in the fast-rate bound.
inline std::vector<double> scaled_theorem_statistic(const LearningCurve& curve, std::size_t d, double delta,
                                                    double p) {
  require(p > 0.0, "p must be positive");
  require(d >= 1, "dimension must be at least 1");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  std::vector<double> out;
  for (const CurveRow& row : curve.rows) {
    const double n = static_cast<double>(row.n);
    const double dd = static_cast<double>(d);
    const double denom = dd * clamped_log(n / dd) + clamped_log(1.0 / delta);
    out.push_back(n * p * row.mean_excess / denom);
  }
  return out;
}

}  // namespace rejectlab

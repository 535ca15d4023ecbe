#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rejectlab/abstain.hpp"
#include "rejectlab/combinatorics.hpp"
#include "rejectlab/domain.hpp"
#include "rejectlab/erm.hpp"
#include "rejectlab/errors.hpp"
#include "rejectlab/risk.hpp"
#include "rejectlab/rng.hpp"

namespace rejectlab {

// Exact best-in-class population minimizer with lowest-index tie-break.
struct PopulationMinimizer {
  std::size_t index = 0;
  double risk = 0.0;
  std::size_t tie_count = 1;  // members whose risk equals the minimum
};

inline PopulationMinimizer population_minimizer(const HypothesisClass& F, const FiniteDistribution& dist) {
  require(F.domain_size() == dist.domain_size(), "domain size mismatch");
  PopulationMinimizer out;
  out.risk = population_risk(F[0], dist);
  for (std::size_t j = 1; j < F.size(); ++j) {
    const double r = population_risk(F[j], dist);
    if (r < out.risk) {
      out.index = j;
      out.risk = r;
      out.tie_count = 1;
    } else if (r == out.risk) {
      ++out.tie_count;
    }
  }
  return out;
}

// Recorded worst-case normalized deviations across Monte Carlo trials, with
// exact order-statistic quantiles.
struct DeviationStatistic {
  std::size_t trials = 0;
  std::vector<double> values;           // one per trial, trial order
  std::vector<double> quantile_levels;  // ascending
  std::vector<double> quantile_values;  // matching order statistics

  // level-q empirical quantile: the ceil(q*trials)-th smallest value
  double quantile(double level) const {
    require(trials >= 1, "quantile of an empty statistic");
    require(level > 0.0 && level <= 1.0, "quantile level must lie in (0, 1]");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double k = std::ceil(level * static_cast<double>(trials));
    const std::size_t idx = static_cast<std::size_t>(std::max(1.0, k)) - 1;
    return sorted[std::min(idx, trials - 1)];
  }
};

namespace detail {

inline DeviationStatistic finalize_statistic(std::vector<double> values, double delta) {
  DeviationStatistic out;
  out.trials = values.size();
  out.values = std::move(values);
  out.quantile_levels = {0.5, 0.9, 1.0 - delta};
  std::sort(out.quantile_levels.begin(), out.quantile_levels.end());
  for (const double lvl : out.quantile_levels) out.quantile_values.push_back(out.quantile(lvl));
  return out;
}

}  // namespace detail

// Per trial, the largest over member pairs of
//   |P_n|f-g| - P|f-g|| / (alpha * sqrt(P_n|f-g|) + alpha^2),
// i.e. the observed constant in the ratio-type deviation bound.
inline DeviationStatistic ratio_bound_check(const HypothesisClass& F, const FiniteDistribution& dist,
                                            std::size_t n, double delta, std::size_t trials, std::uint64_t seed,
                                            std::optional<std::size_t> d_override = std::nullopt) {
  require(F.domain_size() == dist.domain_size(), "domain size mismatch");
  require(trials >= 1, "trials must be at least 1");
  require(n >= 1, "sample size must be at least 1");
  const std::size_t d = std::max<std::size_t>(1, d_override ? *d_override : vc_dimension(F));
  const double a = alpha(n, d, delta);

  std::vector<double> pop(F.size() * F.size(), 0.0);
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = i + 1; j < F.size(); ++j)
      pop[i * F.size() + j] = population_l1_distance(F[i], F[j], dist);

  std::vector<double> values(trials, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng = make_stream(seed, t, 0);
    const LabeledSample s = sample(dist, n, rng);
    double worst = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i)
      for (std::size_t j = i + 1; j < F.size(); ++j) {
        const double emp = empirical_l1_distance(F[i], F[j], s);
        const double dev = std::abs(emp - pop[i * F.size() + j]);
        worst = std::max(worst, dev / (a * std::sqrt(emp) + a * a));
      }
    values[t] = worst;
  }
  return detail::finalize_statistic(std::move(values), delta);
}

// Same normalized-deviation scan for the excess loss h = |f-Y|^q - |f*-Y|^q
// against the normalizer alpha * sqrt(P_n|f-f*|) + alpha^2.
inline DeviationStatistic excess_loss_deviation_check(const HypothesisClass& F, const FiniteDistribution& dist,
                                                      std::size_t n, double delta, double q, std::size_t trials,
                                                      std::uint64_t seed,
                                                      std::optional<std::size_t> d_override = std::nullopt) {
  require(F.domain_size() == dist.domain_size(), "domain size mismatch");
  require(trials >= 1, "trials must be at least 1");
  require(n >= 1, "sample size must be at least 1");
  require(q >= 1.0, "loss exponent q must be at least 1");
  const std::size_t d = std::max<std::size_t>(1, d_override ? *d_override : vc_dimension(F));
  const double a = alpha(n, d, delta);
  const PopulationMinimizer fstar = population_minimizer(F, dist);
  const Hypothesis& fs = F[fstar.index];

  const auto qloss = [&](int fx, int y) { return std::pow(std::abs(static_cast<double>(fx - y)), q); };

  // population excess loss P h per member
  std::vector<double> pop(F.size(), 0.0);
  for (std::size_t j = 0; j < F.size(); ++j) {
    double acc = 0.0;
    for (DomainPoint x = 0; x < F.domain_size(); ++x) {
      const double w = dist.weight(x);
      if (w == 0.0) continue;
      const double e1 = dist.eta1(x);
      acc += w * (e1 * (qloss(F[j](x), 1) - qloss(fs(x), 1)) + (1.0 - e1) * (qloss(F[j](x), 0) - qloss(fs(x), 0)));
    }
    pop[j] = acc;
  }

  std::vector<double> values(trials, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng = make_stream(seed, t, 0);
    const LabeledSample s = sample(dist, n, rng);
    double worst = 0.0;
    for (std::size_t j = 0; j < F.size(); ++j) {
      if (j == fstar.index) continue;
      double emp_h = 0.0;
      for (const LabeledItem& it : s.items()) emp_h += qloss(F[j](it.x), it.y) - qloss(fs(it.x), it.y);
      emp_h /= static_cast<double>(s.size());
      const double emp_dist = empirical_l1_distance(F[j], fs, s);
      const double dev = std::abs(pop[j] - emp_h);
      worst = std::max(worst, dev / (a * std::sqrt(emp_dist) + a * a));
    }
    values[t] = worst;
  }
  return detail::finalize_statistic(std::move(values), delta);
}

// Fraction of trials in which the population minimizer lands in the
// almost-ERM set built from a fresh n-sample.
inline double target_membership_check(const HypothesisClass& F, const FiniteDistribution& dist, std::size_t n,
                                      double delta, double c, std::size_t trials, std::uint64_t seed,
                                      std::optional<std::size_t> d_override = std::nullopt) {
  require(trials >= 1, "trials must be at least 1");
  const PopulationMinimizer fstar = population_minimizer(F, dist);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng = make_stream(seed, t, 0);
    const LabeledSample s = sample(dist, n, rng);
    const AlmostErmSet fhat = almost_erm_set(F, s, delta, c, d_override);
    if (std::binary_search(fhat.members.begin(), fhat.members.end(), fstar.index)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

// Smallest feasible constant B with Pr(f != f*) <= B * excess(f)^beta over
// the class; +infinity when some member has positive distance at zero excess
// (and beta > 0, where the constraint is unsatisfiable).
inline double bernstein_estimate(const HypothesisClass& F, const FiniteDistribution& dist, double beta) {
  require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
  const PopulationMinimizer fstar = population_minimizer(F, dist);
  const Hypothesis& fs = F[fstar.index];
  double best = 0.0;
  for (std::size_t j = 0; j < F.size(); ++j) {
    if (j == fstar.index) continue;
    const double d1 = population_l1_distance(F[j], fs, dist);
    if (d1 == 0.0) continue;  // indistinguishable under the marginal
    const double excess = population_risk(F[j], dist) - fstar.risk;
    best = std::max(best, d1 / std::pow(excess, beta));  // 0^0 = 1, x/0 = inf
  }
  return best;
}

// Discrepancy between the reject-risk excess at price p and the power-loss
// excess of the same predictor with abstentions read as the value 1/2.
// Contract: at most 1e-12 whenever p <= 1/4.
inline double identity_check_rp_lq(const AbstainerModel& model, const FiniteDistribution& dist,
                                   double fstar_risk, double p) {
  require(p >= 0.0 && p <= 0.25, "identity holds for p in [0, 1/4] only");
  const double q = q_from_p(p);
  const double lhs = population_reject_risk(model.predictor, dist, p) - fstar_risk;
  const double rhs = lq_risk(model.predictor, dist, q) - fstar_risk;
  return std::abs(lhs - rhs);
}

}  // namespace rejectlab

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "rejectlab/domain.hpp"
#include "rejectlab/erm.hpp"
#include "rejectlab/errors.hpp"
#include "rejectlab/risk.hpp"

namespace rejectlab {

// Calibration 1/2 - p = 2^{-q}; valid on p in [0, 1/4] where q lands in [1, 2].
inline double q_from_p(double p) {
  require(p >= 0.0 && p <= 0.25, "q_from_p needs p in [0, 1/4]; clamp larger p first");
  return std::log2(1.0 / (0.5 - p));
}

// (f+g)/2 with the value 1/2 replaced by abstention.
inline AbstainingHypothesis midpoint(const Hypothesis& f, const Hypothesis& g) {
  require(f.domain_size() == g.domain_size(), "domain size mismatch");
  AbstainingHypothesis h(f.domain_size());
  for (std::size_t x = 0; x < f.domain_size(); ++x)
    h.set(x, f(x) == g(x) ? f(x) : AbstainingHypothesis::kAbstain);
  return h;
}

// Trained abstaining predictor: the midpoint of an ERM and one almost-ERM
// partner, abstaining exactly where they disagree.
struct AbstainerModel {
  std::size_t base_index = 0;     // index of the first-half ERM in the class
  std::size_t partner_index = 0;  // index of the selected almost-ERM partner
  Hypothesis base;
  Hypothesis partner;
  AbstainingHypothesis predictor;  // midpoint(partner, base)
  double p = 0.0;                  // effective abstention parameter (already clamped to <= 1/4)
  // training configuration, echoed for serialization
  double c = 1.0;
  double delta = 0.05;
  std::size_t split = 0;  // first-half size n (the sample had 2n items)
};

namespace detail {

// Shared selection step: minimize (committed errors + abstain_price * abstained
// hits) over the midpoint class on the second half. abstain_price = 1/2 - p for
// the reject risk, 2^{-q} for the l_q risk; equal prices select identically.
inline AbstainerModel select_abstainer(const HypothesisClass& F, const LabeledSample& s, double delta,
                                       double abstain_price, double p_effective, double c,
                                       std::optional<std::size_t> d_override) {
  require(s.size() >= 2 && s.size() % 2 == 0, "abstaining learner needs an even sample of size >= 2");
  require(F.domain_size() == s.domain_size(), "domain size mismatch");
  const std::size_t n = s.size() / 2;

  const AlmostErmSet fhat = detail::almost_erm_set_range(F, s, 0, n, delta, c, d_override);
  const std::size_t g = fhat.erm_index;

  // per-atom tallies of the second half let each candidate be scored in O(m)
  const bool tabulate = F.domain_size() <= n;
  const AtomTallies t = tabulate ? atom_tallies(s, n, n) : AtomTallies{};

  // best so far: (objective, abstain-atom count, partner index), lexicographic
  bool have = false;
  double best_obj = 0.0;
  std::size_t best_abst_atoms = 0;
  std::size_t best_partner = 0;

  for (const std::size_t j : fhat.members) {
    std::size_t wrong = 0, abstained = 0;
    if (tabulate) {
      for (std::size_t x = 0; x < F.domain_size(); ++x) {
        const int a = F[j](x), b = F[g](x);
        if (a != b)
          abstained += t.cnt[x];
        else
          wrong += (a == 1 ? t.cnt[x] - t.ones[x] : t.ones[x]);
      }
    } else {
      for (std::size_t i = n; i < 2 * n; ++i) {
        const auto& it = s[i];
        const int a = F[j](it.x), b = F[g](it.x);
        if (a != b)
          ++abstained;
        else
          wrong += (a != it.y);
      }
    }
    const double obj = static_cast<double>(wrong) + abstain_price * static_cast<double>(abstained);
    const std::size_t abst_atoms = F[j].hamming(F[g]);
    if (!have || obj < best_obj ||
        (obj == best_obj && (abst_atoms < best_abst_atoms ||
                             (abst_atoms == best_abst_atoms && j < best_partner)))) {
      have = true;
      best_obj = obj;
      best_abst_atoms = abst_atoms;
      best_partner = j;
    }
  }

  AbstainerModel model;
  model.base_index = g;
  model.partner_index = best_partner;
  model.base = F[g];
  model.partner = F[best_partner];
  model.predictor = midpoint(F[best_partner], F[g]);
  model.p = p_effective;
  model.c = c;
  model.delta = delta;
  model.split = n;
  return model;
}

}  // namespace detail

// ERM on the first half, almost-ERM set on the first half, then pick the
// midpoint minimizing the empirical reject risk on the second half. p above
// 1/4 is clamped to 1/4 (abstention stops paying beyond that point), so the
// stored model carries the effective p.
inline AbstainerModel abstaining_learner(const HypothesisClass& F, const LabeledSample& s, double delta, double p,
                                         double c = 1.0, std::optional<std::size_t> d_override = std::nullopt) {
  require(p >= 0.0 && p <= 0.5, "p must lie in [0, 1/2]");
  const double p_eff = std::min(p, 0.25);
  return detail::select_abstainer(F, s, delta, 0.5 - p_eff, p_eff, c, d_override);
}

// Same pipeline with the empirical l_q objective (abstention costs 2^{-q} per
// hit); selects identically to abstaining_learner at q = q_from_p(p).
inline AbstainerModel aggregate_lq(const HypothesisClass& F, const LabeledSample& s, double delta, double q,
                                   double c = 1.0, std::optional<std::size_t> d_override = std::nullopt) {
  require(q > 1.0 && q <= 2.0, "q must lie in (1, 2]");
  const double price = std::exp2(-q);
  return detail::select_abstainer(F, s, delta, price, 0.5 - price, c, d_override);
}

// R^p(model) - R(f*); can be negative, abstention may beat the best in class.
inline double reject_excess_risk(const AbstainerModel& model, const FiniteDistribution& dist, double p,
                                 double fstar_risk) {
  return population_reject_risk(model.predictor, dist, p) - fstar_risk;
}

}  // namespace rejectlab

#pragma once

#include <cmath>

#include "rejectlab/domain.hpp"
#include "rejectlab/errors.hpp"

namespace rejectlab {

// R(f) = Pr(f(X) != Y), an exact finite sum over atoms.
inline double population_risk(const Hypothesis& f, const FiniteDistribution& dist) {
  require(f.domain_size() == dist.domain_size(), "domain size mismatch");
  double r = 0.0;
  for (std::size_t x = 0; x < dist.domain_size(); ++x)
    r += dist.weight(x) * (f(x) == 1 ? 1.0 - dist.eta1(x) : dist.eta1(x));
  return r;
}

// R_n(f): fraction of sample points f mislabels.
inline double empirical_risk(const Hypothesis& f, const LabeledSample& s) {
  require(s.size() > 0, "empirical risk of an empty sample");
  require(f.domain_size() == s.domain_size(), "domain size mismatch");
  std::size_t wrong = 0;
  for (const auto& it : s.items()) wrong += (f(it.x) != it.y);
  return static_cast<double>(wrong) / static_cast<double>(s.size());
}

// Chow risk R^p: misclassification mass plus (1/2 - p) per unit of abstained mass.
inline double population_reject_risk(const AbstainingHypothesis& f, const FiniteDistribution& dist, double p) {
  require(p >= 0.0 && p <= 0.5, "p must lie in [0, 1/2]");
  require(f.domain_size() == dist.domain_size(), "domain size mismatch");
  const double abstain_price = 0.5 - p;
  double r = 0.0;
  for (std::size_t x = 0; x < dist.domain_size(); ++x) {
    const int v = f(x);
    if (v == AbstainingHypothesis::kAbstain)
      r += dist.weight(x) * abstain_price;
    else
      r += dist.weight(x) * (v == 1 ? 1.0 - dist.eta1(x) : dist.eta1(x));
  }
  return r;
}

inline double empirical_reject_risk(const AbstainingHypothesis& f, const LabeledSample& s, double p) {
  require(p >= 0.0 && p <= 0.5, "p must lie in [0, 1/2]");
  require(s.size() > 0, "empirical reject risk of an empty sample");
  require(f.domain_size() == s.domain_size(), "domain size mismatch");
  const double abstain_price = 0.5 - p;
  double total = 0.0;
  for (const auto& it : s.items()) {
    const int v = f(it.x);
    if (v == AbstainingHypothesis::kAbstain)
      total += abstain_price;
    else
      total += (v != it.y) ? 1.0 : 0.0;
  }
  return total / static_cast<double>(s.size());
}

// l_q risk E|g(X) - Y|^q with abstention read as the value 1/2.
inline double lq_risk(const AbstainingHypothesis& g, const FiniteDistribution& dist, double q) {
  require(q >= 1.0, "q must be at least 1");
  require(g.domain_size() == dist.domain_size(), "domain size mismatch");
  const double half_pow_q = std::exp2(-q);  // |1/2 - y|^q for either label
  double r = 0.0;
  for (std::size_t x = 0; x < dist.domain_size(); ++x) {
    const int v = g(x);
    if (v == AbstainingHypothesis::kAbstain)
      r += dist.weight(x) * half_pow_q;
    else
      r += dist.weight(x) * (v == 1 ? 1.0 - dist.eta1(x) : dist.eta1(x));
  }
  return r;
}

// empirical counterpart of lq_risk, used by the aggregation step
inline double empirical_lq_risk(const AbstainingHypothesis& g, const LabeledSample& s, double q) {
  require(q >= 1.0, "q must be at least 1");
  require(s.size() > 0, "empirical lq risk of an empty sample");
  require(g.domain_size() == s.domain_size(), "domain size mismatch");
  const double half_pow_q = std::exp2(-q);
  double total = 0.0;
  for (const auto& it : s.items()) {
    const int v = g(it.x);
    if (v == AbstainingHypothesis::kAbstain)
      total += half_pow_q;
    else
      total += (v != it.y) ? 1.0 : 0.0;
  }
  return total / static_cast<double>(s.size());
}

// P|f - g|: probability mass of the disagreement set.
inline double population_l1_distance(const Hypothesis& f, const Hypothesis& g, const FiniteDistribution& dist) {
  require(f.domain_size() == dist.domain_size() && g.domain_size() == dist.domain_size(), "domain size mismatch");
  double d = 0.0;
  for (std::size_t x = 0; x < dist.domain_size(); ++x)
    if (f(x) != g(x)) d += dist.weight(x);
  return d;
}

// P_n|f - g|: fraction of sample points in the disagreement set.
inline double empirical_l1_distance(const Hypothesis& f, const Hypothesis& g, const LabeledSample& s) {
  require(s.size() > 0, "empirical distance on an empty sample");
  require(f.domain_size() == s.domain_size() && g.domain_size() == s.domain_size(), "domain size mismatch");
  std::size_t k = 0;
  for (const auto& it : s.items()) k += (f(it.x) != g(it.x));
  return static_cast<double>(k) / static_cast<double>(s.size());
}

// labels[x] = 1 iff Pr(Y=1|x) >= 1/2 (the tie at exactly 1/2 goes to 1)
inline Hypothesis bayes_classifier(const FiniteDistribution& dist) {
  Hypothesis f(dist.domain_size());
  for (std::size_t x = 0; x < dist.domain_size(); ++x)
    if (dist.eta1(x) >= 0.5) f.set(x, 1);
  return f;
}

inline double bayes_risk(const FiniteDistribution& dist) {
  double r = 0.0;
  for (std::size_t x = 0; x < dist.domain_size(); ++x)
    r += dist.weight(x) * std::min(dist.eta1(x), 1.0 - dist.eta1(x));
  return r;
}

// Massart margin: min over positive-weight atoms of |2 Pr(Y=1|x) - 1|.
inline double margin_parameter(const FiniteDistribution& dist) {
  double h = 1.0;
  for (std::size_t x = 0; x < dist.domain_size(); ++x)
    if (dist.weight(x) > 0.0) h = std::min(h, std::abs(2.0 * dist.eta1(x) - 1.0));
  return h;
}

}  // namespace rejectlab

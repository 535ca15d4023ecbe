#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rejectlab/checks.hpp"
#include "rejectlab/combinatorics.hpp"
#include "rejectlab/domain.hpp"
#include "rejectlab/errors.hpp"
#include "rejectlab/risk.hpp"

namespace rejectlab {

struct ConstructionMeta {
  double h = 0.0;                 // margin level of the label noise
  std::size_t diameter = 0;       // largest pairwise disagreement count
  std::size_t vc = 0;             // VC dimension
  std::size_t fstar_index = 0;    // best-in-class member, lowest index on ties
  double fstar_risk = 0.0;
  double approx_error = 0.0;      // best-in-class risk minus Bayes risk
  std::string family;
  std::map<std::string, double> parameters;
};

// A hypothesis class paired with a data distribution, carrying recomputable
// summary metadata. Build through Construction::compute so the metadata is
// consistent by construction; validate_construction re-derives every field.
struct Construction {
  HypothesisClass cls;
  FiniteDistribution dist;
  ConstructionMeta meta;

  static Construction compute(HypothesisClass cls, FiniteDistribution dist, std::string family,
                              std::map<std::string, double> parameters,
                              std::uint64_t budget = kDefaultCombinatorialBudget) {
    require(cls.domain_size() == dist.domain_size(), "domain size mismatch");
    Construction out{std::move(cls), std::move(dist), {}};
    out.meta.h = margin_parameter(out.dist);
    out.meta.diameter = combinatorial_diameter(out.cls);
    out.meta.vc = vc_dimension(out.cls, budget);
    // cache the class statistics so replication loops never re-enumerate
    out.cls = out.cls.with_cached_stats(out.meta.vc, out.meta.diameter);
    const PopulationMinimizer fstar = population_minimizer(out.cls, out.dist);
    out.meta.fstar_index = fstar.index;
    out.meta.fstar_risk = fstar.risk;
    out.meta.approx_error = fstar.risk - bayes_risk(out.dist);
    require(out.meta.approx_error >= -1e-12, "best-in-class risk fell below the Bayes risk");
    if (out.meta.approx_error < 0.0) out.meta.approx_error = 0.0;
    out.meta.family = std::move(family);
    out.meta.parameters = std::move(parameters);
    return out;
  }
};

// Recompute every metadata field and require agreement (1e-12 for reals).
inline void validate_construction(const Construction& c, std::uint64_t budget = kDefaultCombinatorialBudget) {
  const Construction fresh =
      Construction::compute(c.cls, c.dist, c.meta.family, c.meta.parameters, budget);
  require(std::abs(fresh.meta.h - c.meta.h) <= 1e-12, "metadata mismatch: margin level");
  require(fresh.meta.diameter == c.meta.diameter, "metadata mismatch: diameter");
  require(fresh.meta.vc == c.meta.vc, "metadata mismatch: vc dimension");
  require(fresh.meta.fstar_index == c.meta.fstar_index, "metadata mismatch: best-in-class index");
  require(std::abs(fresh.meta.fstar_risk - c.meta.fstar_risk) <= 1e-12, "metadata mismatch: best-in-class risk");
  require(std::abs(fresh.meta.approx_error - c.meta.approx_error) <= 1e-12,
          "metadata mismatch: approximation error");
}

// All hypotheses taking the value one on at most d of m atoms.
inline HypothesisClass make_sparse_class(std::size_t d, std::size_t m,
                                         std::uint64_t budget = kDefaultCombinatorialBudget) {
  require(d >= 1, "sparsity level d must be at least 1");
  require(m >= 2 * d, "need m >= 2d atoms");
  double count = 0.0;
  {
    double binom = 1.0;
    count = 1.0;
    for (std::size_t k = 1; k <= d; ++k) {
      binom = binom * static_cast<double>(m - k + 1) / static_cast<double>(k);
      count += binom;
    }
  }
  detail::WorkBudget wb{budget};
  wb.charge(static_cast<std::uint64_t>(count * static_cast<double>(m)), "sparse class enumeration");

  std::vector<Hypothesis> members;
  members.push_back(Hypothesis(m));
  for (std::size_t k = 1; k <= d; ++k)
    detail::for_each_subset(m, k, [&](const std::vector<std::size_t>& atoms) {
      Hypothesis f(m);
      for (const std::size_t x : atoms) f.set(x, 1);
      members.push_back(std::move(f));
      return true;
    });
  return HypothesisClass(m, std::move(members));
}

// Two-function class over three regions: on A both members match the noisy
// Bayes labels; on B (mass tau + eps) only the second does; on C (mass tau)
// only the first does. Labels flip with probability (1-h)/2.
inline Construction make_two_function_construction(double tau, double eps, std::size_t atoms_b,
                                                   std::size_t atoms_c, std::size_t m, double h) {
  require(tau >= 0.0 && eps >= 0.0, "region masses must be nonnegative");
  require(2.0 * tau + eps <= 1.0, "region masses exceed total mass");
  require(h > 0.0 && h <= 1.0, "margin level h must lie in (0, 1]");
  require(atoms_b >= 1 && atoms_c >= 1, "each disagreement region needs at least one atom");
  require(m >= atoms_b + atoms_c + 1, "domain too small for the three regions");

  const std::size_t atoms_a = m - atoms_b - atoms_c;
  const std::size_t b_first = atoms_a;
  const std::size_t c_first = atoms_a + atoms_b;

  std::vector<double> w(m, 0.0);
  std::vector<double> eta(m, 0.0);
  const double mass_a = 1.0 - 2.0 * tau - eps;
  for (std::size_t x = 0; x < atoms_a; ++x) w[x] = mass_a / static_cast<double>(atoms_a);
  for (std::size_t x = b_first; x < c_first; ++x) w[x] = (tau + eps) / static_cast<double>(atoms_b);
  for (std::size_t x = c_first; x < m; ++x) w[x] = tau / static_cast<double>(atoms_c);
  // Bayes labels: 0 on A, 1 on B, 0 on C
  for (std::size_t x = 0; x < m; ++x) {
    const bool bayes_one = (x >= b_first && x < c_first);
    eta[x] = bayes_one ? (1.0 + h) / 2.0 : (1.0 - h) / 2.0;
  }

  Hypothesis f1(m);                                   // all-zeros: wrong on B
  Hypothesis f2(m);                                   // one on B and C: wrong on C
  for (std::size_t x = b_first; x < m; ++x) f2.set(x, 1);

  return Construction::compute(
      HypothesisClass(m, {f1, f2}), FiniteDistribution(std::move(w), std::move(eta)), "two_function",
      {{"tau", tau},
       {"eps", eps},
       {"atoms_b", static_cast<double>(atoms_b)},
       {"atoms_c", static_cast<double>(atoms_c)},
       {"m", static_cast<double>(m)},
       {"h", h}});
}

// Well-specified bounded-noise setting: labels follow the chosen class
// member, flipped with probability (1-h)/2, so the Bayes rule is in class.
inline Construction make_wellspecified_massart(const HypothesisClass& cls, std::size_t fstar_index, double h,
                                               const std::vector<double>& weights,
                                               std::uint64_t budget = kDefaultCombinatorialBudget) {
  require(h > 0.0 && h <= 1.0, "margin level h must lie in (0, 1]");
  require(fstar_index < cls.size(), "target index out of range");
  require(weights.size() == cls.domain_size(), "marginal weight count mismatch");
  const Hypothesis& target = cls[fstar_index];
  std::vector<double> eta(cls.domain_size(), 0.0);
  for (std::size_t x = 0; x < cls.domain_size(); ++x)
    eta[x] = target(x) == 1 ? (1.0 + h) / 2.0 : (1.0 - h) / 2.0;
  Construction out = Construction::compute(cls, FiniteDistribution(weights, std::move(eta)), "massart",
                                           {{"fstar_index", static_cast<double>(fstar_index)}, {"h", h}}, budget);
  require(out.meta.fstar_index == fstar_index,
          "target is not the unique lowest-index population minimizer under this marginal");
  return out;
}

}  // namespace rejectlab

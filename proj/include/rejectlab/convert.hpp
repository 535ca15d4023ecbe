#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rejectlab/abstain.hpp"
#include "rejectlab/cover.hpp"
#include "rejectlab/domain.hpp"
#include "rejectlab/erm.hpp"
#include "rejectlab/errors.hpp"

namespace rejectlab {

// Per-atom label counts from a sample; ties and unseen atoms vote 0.
struct MajorityTable {
  std::vector<std::uint32_t> zeros;
  std::vector<std::uint32_t> ones;

  explicit MajorityTable(const LabeledSample& s) : zeros(s.domain_size(), 0), ones(s.domain_size(), 0) {
    for (const LabeledItem& it : s.items()) (it.y == 1 ? ones : zeros)[it.x] += 1;
  }

  bool seen(DomainPoint x) const { return zeros[x] + ones[x] > 0; }
  int vote(DomainPoint x) const { return ones[x] > zeros[x] ? 1 : 0; }
};

inline MajorityTable majority_vote(const LabeledSample& s) { return MajorityTable(s); }

// Replace every abstention by the patch sample's per-atom majority label.
inline Hypothesis patch_abstentions(const AbstainingHypothesis& f, const LabeledSample& patch) {
  require(f.domain_size() == patch.domain_size(), "domain size mismatch");
  const MajorityTable table(patch);
  Hypothesis out(f.domain_size());
  for (DomainPoint x = 0; x < f.domain_size(); ++x) {
    const int v = f(x);
    out.set(x, v == AbstainingHypothesis::kAbstain ? table.vote(x) : v);
  }
  return out;
}

struct FiniteDiameterModel {
  AbstainingHypothesis stage_one;  // abstaining predictor built on the first two thirds
  Hypothesis output;               // after majority patching on the last third
  AbstainerModel abstainer;
  double h = 0.0;  // margin level the rejection price was tuned to
};

// Margin-adaptive non-abstaining learner: run the abstaining aggregate with
// rejection cost tuned to the margin level h on the first two thirds of the
// sample, then patch its abstentions by majority vote on the last third.
inline FiniteDiameterModel finite_diameter_learner(const HypothesisClass& F, const LabeledSample& s, double delta,
                                                   double h, double c = 1.0,
                                                   std::optional<std::size_t> d_override = std::nullopt) {
  require(h > 0.0 && h <= 1.0, "margin level h must lie in (0, 1]");
  require(s.size() >= 3 && s.size() % 3 == 0, "sample size must be a positive multiple of 3");
  const std::size_t n = s.size() / 3;

  FiniteDiameterModel model;
  model.h = h;
  model.abstainer = abstaining_learner(F, s.slice(0, 2 * n), delta, h / 2.0, c, d_override);
  model.stage_one = model.abstainer.predictor;
  model.output = patch_abstentions(model.stage_one, s.slice(2 * n, n));
  return model;
}

// Index of the cover center with the fewest label mistakes on the abstained
// atoms of the evaluation sample; ties resolve to the lowest center index.
inline std::size_t select_cover_center(const std::vector<Hypothesis>& centers, const AbstainingHypothesis& stage,
                                       const LabeledSample& eval) {
  require(!centers.empty(), "cover must hold at least one center");
  require(stage.domain_size() == eval.domain_size(), "domain size mismatch");
  std::size_t best = 0;
  std::uint64_t best_err = UINT64_MAX;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    require(centers[k].domain_size() == stage.domain_size(), "domain size mismatch");
    std::uint64_t err = 0;
    for (const LabeledItem& it : eval.items())
      if (stage.abstains(it.x) && centers[k](it.x) != it.y) ++err;
    if (err < best_err) {
      best_err = err;
      best = k;
    }
  }
  return best;
}

struct DistDependentModel {
  AbstainerModel abstainer;     // zero-rejection-cost stage on the first two thirds
  double dpx = 0.0;             // distribution-dependent diameter at phase size n
  bool dpx_exact = true;        // false when greedy covers bounded it from above
  double radius = 0.0;          // cover radius used for the discretization
  bool degenerate = false;      // radius exceeded 1: fell back to one all-zero center
  CoverSpec cover;              // centers competing on the held-out third
  std::size_t center_index = 0; // selected center (lowest index on ties)
  Hypothesis output;
};

// Distribution-dependent non-abstaining learner: abstain at the maximal
// rejection price on two thirds of the sample, cover the abstention support
// at a radius set by the distribution-dependent diameter, and pick the cover
// center with the fewest mistakes on the held-out third over abstained atoms.
inline DistDependentModel distribution_dependent_learner(const HypothesisClass& F, const LabeledSample& s,
                                                         double delta, const FiniteDistribution& marginal,
                                                         double c1, double c2, double c = 1.0,
                                                         std::size_t budget_atoms = kDefaultCoverAtomBudget,
                                                         std::optional<std::size_t> d_override = std::nullopt) {
  require(F.domain_size() == marginal.domain_size(), "domain size mismatch");
  require(s.size() >= 3 && s.size() % 3 == 0, "sample size must be a positive multiple of 3");
  require(c2 > 0.0, "c2 must be positive");
  const std::size_t n = s.size() / 3;

  DistDependentModel model;
  model.abstainer = abstaining_learner(F, s.slice(0, 2 * n), delta, 0.5, c, d_override);

  const DpxResult dpx = dpx_diameter(F, marginal, n, c1, budget_atoms);
  model.dpx = dpx.value;
  model.dpx_exact = dpx.exact;
  model.radius = c2 * (dpx.value + clamped_log(1.0 / delta)) / static_cast<double>(n);

  const std::vector<std::size_t> support = model.abstainer.predictor.abstain_atoms();
  if (model.radius > 1.0) {
    model.degenerate = true;
    model.cover.support = support;
    model.cover.radius = model.radius;
    model.cover.centers.push_back(Hypothesis(F.domain_size()));
    model.cover.exact = true;
  } else {
    model.cover = l1_cover(support, marginal, model.radius, budget_atoms);
  }

  const std::size_t best = select_cover_center(model.cover.centers, model.abstainer.predictor, s.slice(2 * n, n));
  model.center_index = best;

  Hypothesis out(F.domain_size());
  for (DomainPoint x = 0; x < F.domain_size(); ++x) {
    const int v = model.abstainer.predictor(x);
    out.set(x, v == AbstainingHypothesis::kAbstain ? model.cover.centers[best](x) : v);
  }
  model.output = out;
  return model;
}

// Noise-free memorizer: the sample's label where an atom was seen, the
// baseline elsewhere. Conflicting labels for one atom are rejected.
inline Hypothesis memorizing_learner(const LabeledSample& s, const Hypothesis& baseline) {
  require(s.domain_size() == baseline.domain_size(), "domain size mismatch");
  Hypothesis out = baseline;
  std::vector<std::uint8_t> state(s.domain_size(), 0xFF);
  for (const LabeledItem& it : s.items()) {
    if (state[it.x] != 0xFF && state[it.x] != it.y)
      throw validation_error("noise detected: atom " + std::to_string(it.x) + " carries conflicting labels");
    state[it.x] = static_cast<std::uint8_t>(it.y);
    out.set(it.x, it.y);
  }
  return out;
}

// Leave-one-out error of the memorizing learner: a held-out item is missed
// exactly when its atom occurs once in the sample and the baseline disagrees.
inline double loo_error(const LabeledSample& s, const Hypothesis& baseline) {
  require(s.size() >= 1, "leave-one-out needs a nonempty sample");
  require(s.domain_size() == baseline.domain_size(), "domain size mismatch");
  std::vector<std::uint32_t> count(s.domain_size(), 0);
  std::vector<std::uint8_t> state(s.domain_size(), 0xFF);
  for (const LabeledItem& it : s.items()) {
    if (state[it.x] != 0xFF && state[it.x] != it.y)
      throw validation_error("noise detected: atom " + std::to_string(it.x) + " carries conflicting labels");
    state[it.x] = static_cast<std::uint8_t>(it.y);
    count[it.x] += 1;
  }
  std::uint64_t misses = 0;
  for (const LabeledItem& it : s.items())
    if (count[it.x] == 1 && baseline(it.x) != it.y) ++misses;
  return static_cast<double>(misses) / static_cast<double>(s.size());
}

}  // namespace rejectlab

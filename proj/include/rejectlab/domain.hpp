#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rejectlab/errors.hpp"
#include "rejectlab/rng.hpp"

namespace rejectlab {

// An atom of the instance space is just its index in [0, m).
using DomainPoint = std::size_t;

// Binary classifier on a finite domain, stored as packed bits keyed by atom index.
class Hypothesis {
 public:
  Hypothesis() = default;
  explicit Hypothesis(std::size_t m) : m_(m), words_((m + 63) / 64, 0) {}

  static Hypothesis from_string(const std::string& bits) {
    Hypothesis f(bits.size());
    for (std::size_t x = 0; x < bits.size(); ++x) {
      if (bits[x] == '1')
        f.set(x, 1);
      else
        require(bits[x] == '0', "hypothesis string must contain only 0/1");
    }
    return f;
  }

  std::size_t domain_size() const { return m_; }

  int operator()(std::size_t x) const { return static_cast<int>((words_[x >> 6] >> (x & 63)) & 1u); }

  void set(std::size_t x, int v) {
    require(x < m_, "atom index out of range");
    const std::uint64_t bit = 1ULL << (x & 63);
    if (v)
      words_[x >> 6] |= bit;
    else
      words_[x >> 6] &= ~bit;
  }

  std::string to_string() const {
    std::string s(m_, '0');
    for (std::size_t x = 0; x < m_; ++x)
      if ((*this)(x)) s[x] = '1';
    return s;
  }

  // number of atoms where the two hypotheses disagree
  std::size_t hamming(const Hypothesis& o) const {
    require(m_ == o.m_, "domain size mismatch");
    std::size_t d = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) d += std::popcount(words_[w] ^ o.words_[w]);
    return d;
  }

  std::vector<std::size_t> disagreement_atoms(const Hypothesis& o) const {
    require(m_ == o.m_, "domain size mismatch");
    std::vector<std::size_t> atoms;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t x = words_[w] ^ o.words_[w];
      while (x) {
        atoms.push_back((w << 6) + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
    return atoms;
  }

  bool operator==(const Hypothesis& o) const { return m_ == o.m_ && words_ == o.words_; }
  bool operator!=(const Hypothesis& o) const { return !(*this == o); }

  // lexicographic order on the label string, atom 0 most significant
  bool operator<(const Hypothesis& o) const {
    if (m_ != o.m_) return m_ < o.m_;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      const std::uint64_t diff = words_[w] ^ o.words_[w];
      if (diff) {
        const int i = std::countr_zero(diff);
        return ((words_[w] >> i) & 1u) == 0;  // first differing atom: 0 < 1
      }
    }
    return false;
  }

 private:
  std::size_t m_ = 0;
  std::vector<std::uint64_t> words_;
};

// Classifier with a reject option: each atom maps to 0, 1, or abstain.
class AbstainingHypothesis {
 public:
  static constexpr int kAbstain = 2;

  AbstainingHypothesis() = default;
  explicit AbstainingHypothesis(std::size_t m, int fill = 0) : vals_(m, static_cast<std::uint8_t>(fill)) {
    require(fill == 0 || fill == 1 || fill == kAbstain, "fill value must be 0, 1, or abstain");
  }
  // a binary hypothesis is the special case with no abstentions
  explicit AbstainingHypothesis(const Hypothesis& f) : vals_(f.domain_size()) {
    for (std::size_t x = 0; x < f.domain_size(); ++x) vals_[x] = static_cast<std::uint8_t>(f(x));
  }

  std::size_t domain_size() const { return vals_.size(); }

  int operator()(std::size_t x) const { return vals_[x]; }

  void set(std::size_t x, int v) {
    require(x < vals_.size(), "atom index out of range");
    require(v == 0 || v == 1 || v == kAbstain, "value must be 0, 1, or abstain");
    vals_[x] = static_cast<std::uint8_t>(v);
  }

  bool abstains(std::size_t x) const { return vals_[x] == kAbstain; }

  std::size_t abstain_count() const {
    std::size_t k = 0;
    for (auto v : vals_)
      if (v == kAbstain) ++k;
    return k;
  }

  std::vector<std::size_t> abstain_atoms() const {
    std::vector<std::size_t> atoms;
    for (std::size_t x = 0; x < vals_.size(); ++x)
      if (vals_[x] == kAbstain) atoms.push_back(x);
    return atoms;
  }

  bool operator==(const AbstainingHypothesis& o) const { return vals_ == o.vals_; }
  bool operator!=(const AbstainingHypothesis& o) const { return !(*this == o); }

 private:
  std::vector<std::uint8_t> vals_;
};

// Finite class of distinct hypotheses, deduplicated and sorted lexicographically
// at construction so every index-based tie-break downstream is deterministic.
class HypothesisClass {
 public:
  HypothesisClass(std::size_t m, std::vector<Hypothesis> members) : m_(m), members_(std::move(members)) {
    require(!members_.empty(), "hypothesis class must be nonempty");
    for (const auto& f : members_) require(f.domain_size() == m_, "class member domain size mismatch");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::size_t domain_size() const { return m_; }
  std::size_t size() const { return members_.size(); }
  const Hypothesis& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Hypothesis>& members() const { return members_; }

  std::optional<std::size_t> cached_vc_dimension() const { return vc_dim_; }
  std::optional<std::size_t> cached_diameter() const { return diameter_; }

  // Returns a copy carrying precomputed statistics; the cache must match what
  // vc_dimension / combinatorial_diameter recompute (validated in tests).
  HypothesisClass with_cached_stats(std::size_t vc_dim, std::size_t diameter) const {
    HypothesisClass c(*this);
    c.vc_dim_ = vc_dim;
    c.diameter_ = diameter;
    return c;
  }

 private:
  std::size_t m_;
  std::vector<Hypothesis> members_;
  std::optional<std::size_t> vc_dim_;
  std::optional<std::size_t> diameter_;
};

// Distribution over a finite domain: marginal weights plus Pr(Y=1|x) per atom.
class FiniteDistribution {
 public:
  FiniteDistribution(std::vector<double> weights, std::vector<double> eta1)
      : w_(std::move(weights)), eta_(std::move(eta1)) {
    require(!w_.empty(), "distribution needs at least one atom");
    require(w_.size() == eta_.size(), "weights and eta1 must have equal length");
    double sum = 0.0;
    for (double w : w_) {
      require(std::isfinite(w) && w >= 0.0, "weights must be finite and nonnegative");
      sum += w;
    }
    require(std::abs(sum - 1.0) <= 1e-12, "weights must sum to 1 within 1e-12");
    correction_ = sum - 1.0;
    if (sum != 1.0)
      for (double& w : w_) w /= sum;
    for (double e : eta_) require(std::isfinite(e) && e >= 0.0 && e <= 1.0, "eta1 entries must lie in [0,1]");
    cum_.resize(w_.size());
    double acc = 0.0;
    for (std::size_t x = 0; x < w_.size(); ++x) {
      acc += w_[x];
      cum_[x] = acc;
    }
    cum_.back() = 1.0;  // guard the final bucket against rounding
  }

  std::size_t domain_size() const { return w_.size(); }
  double weight(std::size_t x) const { return w_[x]; }
  double eta1(std::size_t x) const { return eta_[x]; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& eta1s() const { return eta_; }
  // how far the raw weights were from summing to 1 (recorded, then normalized away)
  double normalization_correction() const { return correction_; }

  // marginal draw by CDF inversion (deterministic given the stream state)
  std::size_t draw_x(RngStream& rng) const {
    const double u = rng.uniform01();
    return static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
  }

 private:
  std::vector<double> w_, eta_, cum_;
  double correction_ = 0.0;
};

struct LabeledItem {
  std::size_t x;
  int y;
};

// Ordered list of (x, y) pairs; duplicates allowed, order meaningful (learners
// split it positionally).
class LabeledSample {
 public:
  LabeledSample() = default;
  LabeledSample(std::size_t domain_size, std::vector<LabeledItem> items)
      : m_(domain_size), items_(std::move(items)) {
    for (const auto& it : items_) {
      require(it.x < m_, "sample point outside the domain");
      require(it.y == 0 || it.y == 1, "labels must be 0 or 1");
    }
  }

  std::size_t domain_size() const { return m_; }
  std::size_t size() const { return items_.size(); }
  const LabeledItem& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<LabeledItem>& items() const { return items_; }

  LabeledSample slice(std::size_t first, std::size_t count) const {
    require(first + count <= items_.size(), "slice out of range");
    return LabeledSample(m_, std::vector<LabeledItem>(items_.begin() + first, items_.begin() + first + count));
  }

 private:
  std::size_t m_ = 0;
  std::vector<LabeledItem> items_;
};

// n i.i.d. draws: x by the marginal, y ~ Bernoulli(eta1[x]); exactly two
// uniforms consumed per item so the stream position is input-independent.
inline LabeledSample sample(const FiniteDistribution& dist, std::size_t n, RngStream& rng) {
  std::vector<LabeledItem> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = dist.draw_x(rng);
    const int y = rng.bernoulli(dist.eta1(x)) ? 1 : 0;
    items.push_back({x, y});
  }
  return LabeledSample(dist.domain_size(), std::move(items));
}

}  // namespace rejectlab

#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "rejectlab/domain.hpp"
#include "rejectlab/errors.hpp"

namespace rejectlab {

// Elementary-operation allowance for the exhaustive searches below.
inline constexpr std::uint64_t kDefaultCombinatorialBudget = 500'000'000ULL;

namespace detail {

// Charge-as-you-go counter for brute-force enumeration.
struct WorkBudget {
  std::uint64_t limit;
  std::uint64_t used = 0;
  void charge(std::uint64_t amount, const char* what) {
    used += amount;
    if (used > limit) throw budget_error(std::string(what) + ": too large for exact computation");
  }
};

// visits all k-subsets of {0..m-1} in lexicographic order
template <typename Fn>
void for_each_subset(std::size_t m, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(idx)) return;
    // advance to the next combination
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + m - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

inline bool shatters(const HypothesisClass& F, const std::vector<std::size_t>& atoms) {
  const std::size_t k = atoms.size();
  const std::uint32_t want = 1u << k;
  std::vector<bool> seen(want, false);
  std::uint32_t found = 0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    std::uint32_t pat = 0;
    for (std::size_t j = 0; j < k; ++j) pat |= static_cast<std::uint32_t>(F[i](atoms[j])) << j;
    if (!seen[pat]) {
      seen[pat] = true;
      if (++found == want) return true;
    }
  }
  return false;
}

}  // namespace detail

// Exact VC dimension by exhaustive shattering search, growing the set size
// until no set of the next size is shattered. Intended for m <= ~24 and
// |F| <= ~1e5; beyond the budget it refuses rather than degrade.
inline std::size_t vc_dimension(const HypothesisClass& F, std::uint64_t budget = kDefaultCombinatorialBudget) {
  if (F.cached_vc_dimension()) return *F.cached_vc_dimension();
  detail::WorkBudget wb{budget};
  const std::size_t m = F.domain_size();
  std::size_t d = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    if ((k < 64 ? (1ULL << k) : ~0ULL) > F.size()) break;  // cannot shatter more than log2|F| points
    bool any = false;
    detail::for_each_subset(m, k, [&](const std::vector<std::size_t>& atoms) {
      wb.charge(F.size(), "vc_dimension");
      if (detail::shatters(F, atoms)) {
        any = true;
        return false;
      }
      return true;
    });
    if (!any) break;
    d = k;
  }
  return d;
}

// Combinatorial diameter: max Hamming distance over member pairs (Def. of the
// largest disagreement set); 0 for a singleton class.
inline std::size_t combinatorial_diameter(const HypothesisClass& F) {
  if (F.cached_diameter()) return *F.cached_diameter();
  std::size_t best = 0;
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = i + 1; j < F.size(); ++j) best = std::max(best, F[i].hamming(F[j]));
  return best;
}

// Growth function: max over size-n point sets of the number of distinct
// projections (repeating a point never increases the count, so multisets
// reduce to sets; n >= m reduces to the full domain).
inline std::uint64_t growth_function(const HypothesisClass& F, std::size_t n,
                                     std::uint64_t budget = kDefaultCombinatorialBudget) {
  if (n == 0) return 1;
  const std::size_t m = F.domain_size();
  if (n >= m) return F.size();  // members are distinct as full bit patterns
  detail::WorkBudget wb{budget};
  require(n <= 63, "growth_function: n too large for packed projections");
  std::uint64_t best = 0;
  std::vector<std::uint64_t> pats;
  pats.reserve(F.size());
  detail::for_each_subset(m, n, [&](const std::vector<std::size_t>& atoms) {
    wb.charge(F.size(), "growth_function");
    pats.clear();
    for (std::size_t i = 0; i < F.size(); ++i) {
      std::uint64_t pat = 0;
      for (std::size_t j = 0; j < n; ++j) pat |= static_cast<std::uint64_t>(F[i](atoms[j])) << j;
      pats.push_back(pat);
    }
    std::sort(pats.begin(), pats.end());
    const auto distinct =
        static_cast<std::uint64_t>(std::unique(pats.begin(), pats.end()) - pats.begin());
    best = std::max(best, distinct);
    return true;
  });
  return best;
}

}  // namespace rejectlab

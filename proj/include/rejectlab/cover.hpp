#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rejectlab/combinatorics.hpp"
#include "rejectlab/domain.hpp"
#include "rejectlab/errors.hpp"

namespace rejectlab {

inline constexpr std::size_t kDefaultCoverAtomBudget = 20;

// Cover of the binary cube over a disagreement support, in L1(P_X) distance.
struct CoverSpec {
  std::vector<std::size_t> support;  // ascending atom indices
  double radius = 0.0;
  std::vector<Hypothesis> centers;  // full-domain hypotheses, zero off support
  bool exact = false;               // true when the cover is provably minimal
};

namespace detail {

// weight of every subset of the support: wsum[mask] = sum of member weights
inline std::vector<double> subset_weights(const std::vector<double>& w) {
  const std::size_t s = w.size();
  std::vector<double> wsum(std::size_t{1} << s, 0.0);
  for (std::size_t mask = 1; mask < wsum.size(); ++mask) {
    const int low = std::countr_zero(mask);
    wsum[mask] = wsum[mask & (mask - 1)] + w[static_cast<std::size_t>(low)];
  }
  return wsum;
}

inline Hypothesis center_from_mask(std::size_t m, const std::vector<std::size_t>& support, std::size_t mask) {
  Hypothesis f(m);
  for (std::size_t j = 0; j < support.size(); ++j)
    if ((mask >> j) & 1u) f.set(support[j], 1);
  return f;
}

// in-place Walsh-Hadamard transform; inverse = same transform then /2^s
inline void wht(std::vector<long long>& a) {
  const std::size_t n = a.size();
  for (std::size_t len = 1; len < n; len <<= 1)
    for (std::size_t i = 0; i < n; i += len << 1)
      for (std::size_t j = i; j < i + len; ++j) {
        const long long x = a[j], y = a[j + len];
        a[j] = x + y;
        a[j + len] = x - y;
      }
}

// exhaustive minimum set cover over a cube of size <= 16
inline std::vector<std::size_t> exact_min_cover(const std::vector<std::uint32_t>& ball_of, std::uint32_t full) {
  const std::size_t cube = ball_of.size();
  for (std::size_t k = 1; k <= cube; ++k) {
    std::vector<std::size_t> pick;
    bool found = false;
    detail::for_each_subset(cube, k, [&](const std::vector<std::size_t>& idx) {
      std::uint32_t covered = 0;
      for (const std::size_t c : idx) covered |= ball_of[c];
      if (covered == full) {
        pick = idx;
        found = true;
        return false;
      }
      return true;
    });
    if (found) return pick;
  }
  return {};  // unreachable: radius >= 0 means each element covers itself
}

}  // namespace detail

// Valid radius-cover of the 2^|support| cube under weighted-Hamming (L1(P_X))
// distance. Minimal by exhaustive set-cover search when |support| <= 4;
// greedy max-coverage otherwise, whose size upper-bounds the covering number.
inline CoverSpec l1_cover(const std::vector<std::size_t>& support, const FiniteDistribution& marginal,
                          double radius, std::size_t budget_atoms = kDefaultCoverAtomBudget) {
  require(radius >= 0.0, "cover radius must be nonnegative");
  const std::size_t s = support.size();
  if (s > budget_atoms)
    throw budget_error("l1_cover: support of " + std::to_string(s) + " atoms exceeds the budget of " +
                       std::to_string(budget_atoms));
  std::vector<double> w(s);
  for (std::size_t j = 0; j < s; ++j) {
    require(support[j] < marginal.domain_size(), "support atom outside the marginal's domain");
    require(j == 0 || support[j - 1] < support[j], "support atoms must be ascending and distinct");
    w[j] = marginal.weight(support[j]);
  }

  CoverSpec out;
  out.support = support;
  out.radius = radius;

  const std::size_t m = marginal.domain_size();
  if (s == 0) {  // empty support: the single empty function
    out.centers.push_back(Hypothesis(m));
    out.exact = true;
    return out;
  }

  double total = 0.0;
  for (double x : w) total += x;
  if (radius >= total) {  // one ball centered anywhere covers everything
    out.centers.push_back(Hypothesis(m));
    out.exact = true;
    return out;
  }

  const std::size_t cube = std::size_t{1} << s;

  bool all_positive = true;
  for (double x : w) all_positive = all_positive && (x > 0.0);
  if (radius == 0.0 && all_positive) {  // balls are singletons: the cube itself
    out.centers.reserve(cube);
    for (std::size_t mask = 0; mask < cube; ++mask)
      out.centers.push_back(detail::center_from_mask(m, support, mask));
    out.exact = true;
    return out;
  }

  const std::vector<double> wsum = detail::subset_weights(w);

  if (s <= 4) {
    // exact minimum cover over at most 16 elements
    std::vector<std::uint32_t> ball_of(cube, 0);
    for (std::size_t c = 0; c < cube; ++c)
      for (std::size_t e = 0; e < cube; ++e)
        if (wsum[c ^ e] <= radius) ball_of[c] |= (1u << e);
    const std::uint32_t full = (cube == 32 ? ~0u : (1u << cube) - 1u);
    const auto picks = detail::exact_min_cover(ball_of, full);
    for (const std::size_t c : picks) out.centers.push_back(detail::center_from_mask(m, support, c));
    out.exact = true;
    return out;
  }

  // greedy max-coverage; per-round counts via XOR-correlation with the ball
  // shape (distance is translation-invariant over the cube)
  std::vector<long long> ball(cube, 0);
  std::vector<std::size_t> ball_masks;
  for (std::size_t d = 0; d < cube; ++d)
    if (wsum[d] <= radius) {
      ball[d] = 1;
      ball_masks.push_back(d);
    }
  std::vector<long long> ball_hat = ball;
  detail::wht(ball_hat);

  std::vector<char> covered(cube, 0);
  std::size_t uncovered_left = cube;
  detail::WorkBudget wb{kDefaultCombinatorialBudget};
  std::vector<long long> u(cube), counts(cube);
  while (uncovered_left > 0) {
    wb.charge(cube * (std::size_t)(std::bit_width(cube)), "l1_cover greedy");
    for (std::size_t e = 0; e < cube; ++e) u[e] = covered[e] ? 0 : 1;
    detail::wht(u);
    for (std::size_t e = 0; e < cube; ++e) counts[e] = u[e] * ball_hat[e];
    detail::wht(counts);
    std::size_t best = 0;
    long long best_count = -1;
    for (std::size_t c = 0; c < cube; ++c) {
      const long long k = counts[c] / static_cast<long long>(cube);
      if (k > best_count) {
        best_count = k;
        best = c;
      }
    }
    out.centers.push_back(detail::center_from_mask(m, support, best));
    for (const std::size_t d : ball_masks) {
      const std::size_t e = best ^ d;
      if (!covered[e]) {
        covered[e] = 1;
        --uncovered_left;
      }
    }
  }
  out.exact = false;
  return out;
}

struct DpxResult {
  double value = 0.0;
  bool exact = true;  // false when any scanned cover was a greedy upper bound
};

// P_X-dependent diameter: n * sup over member pairs of the largest achievable
// L1 distance gamma with c1 * n * gamma <= log2(covering number at gamma).
// The scan runs over the finite grid of achievable distances (plus 0), where
// the covering number is a step function.
inline DpxResult dpx_diameter(const HypothesisClass& F, const FiniteDistribution& marginal, std::size_t n,
                              double c1, std::size_t budget_atoms = kDefaultCoverAtomBudget) {
  require(n >= 1, "dpx_diameter needs n >= 1");
  require(c1 > 0.0, "c1 must be positive");
  require(F.domain_size() == marginal.domain_size(), "domain size mismatch");

  DpxResult out;
  double best_gamma = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = i + 1; j < F.size(); ++j) {
      const auto support = F[i].disagreement_atoms(F[j]);
      if (support.size() > budget_atoms)
        throw budget_error("dpx_diameter: pair (" + std::to_string(i) + "," + std::to_string(j) +
                           ") has a disagreement support of " + std::to_string(support.size()) +
                           " atoms, exceeding the budget of " + std::to_string(budget_atoms));
      if (support.empty()) continue;

      std::vector<double> w(support.size());
      for (std::size_t k = 0; k < support.size(); ++k) w[k] = marginal.weight(support[k]);
      std::vector<double> grid = detail::subset_weights(w);
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

      const auto feasible = [&](double gamma) {
        const CoverSpec cover = l1_cover(support, marginal, gamma, budget_atoms);
        out.exact = out.exact && cover.exact;
        return c1 * static_cast<double>(n) * gamma <= std::log2(static_cast<double>(cover.centers.size()));
      };

      // grid[0] = 0 is always feasible; find the largest feasible entry
      double pair_gamma = 0.0;
      if (feasible(grid.back())) {
        pair_gamma = grid.back();
      } else {
        std::size_t lo = 0, hi = grid.size() - 1;  // feasible, infeasible
        while (hi - lo > 1) {
          const std::size_t mid = lo + (hi - lo) / 2;
          if (feasible(grid[mid]))
            lo = mid;
          else
            hi = mid;
        }
        pair_gamma = grid[lo];
      }
      best_gamma = std::max(best_gamma, pair_gamma);
    }
  out.value = static_cast<double>(n) * best_gamma;
  return out;
}

}  // namespace rejectlab

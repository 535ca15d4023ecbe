#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "rejectlab/combinatorics.hpp"
#include "rejectlab/domain.hpp"
#include "rejectlab/errors.hpp"
#include "rejectlab/risk.hpp"

namespace rejectlab {

// log x means max{log x, 1} throughout the bounds (natural log).
inline double clamped_log(double x) { return std::max(std::log(x), 1.0); }

// alpha(n, d, delta) = sqrt((d log(n/d) + log(1/delta)) / n), clamped logs.
inline double alpha(std::size_t n, std::size_t d, double delta) {
  require(n >= 1, "alpha needs n >= 1");
  require(d >= 1, "alpha needs d >= 1");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  const double dn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  return std::sqrt((dd * clamped_log(dn / dd) + clamped_log(1.0 / delta)) / dn);
}

namespace detail {

// per-atom draw and positive-label tallies over s[first, first+count)
struct AtomTallies {
  std::vector<std::uint32_t> cnt;
  std::vector<std::uint32_t> ones;
};

inline AtomTallies atom_tallies(const LabeledSample& s, std::size_t first, std::size_t count) {
  AtomTallies t;
  t.cnt.assign(s.domain_size(), 0);
  t.ones.assign(s.domain_size(), 0);
  for (std::size_t i = first; i < first + count; ++i) {
    t.cnt[s[i].x] += 1;
    t.ones[s[i].x] += static_cast<std::uint32_t>(s[i].y);
  }
  return t;
}

// error counts over s[first, first+count), one entry per class member
inline std::vector<std::size_t> error_counts(const HypothesisClass& F, const LabeledSample& s,
                                             std::size_t first, std::size_t count) {
  require(first + count <= s.size(), "sample range out of bounds");
  require(F.domain_size() == s.domain_size(), "domain size mismatch");
  std::vector<std::size_t> errs(F.size(), 0);
  if (F.domain_size() <= count) {  // tally atoms once, score members in O(m)
    const AtomTallies t = atom_tallies(s, first, count);
    for (std::size_t j = 0; j < F.size(); ++j)
      for (std::size_t x = 0; x < F.domain_size(); ++x)
        errs[j] += (F[j](x) == 1 ? t.cnt[x] - t.ones[x] : t.ones[x]);
  } else {
    for (std::size_t i = first; i < first + count; ++i) {
      const auto& it = s[i];
      for (std::size_t j = 0; j < F.size(); ++j) errs[j] += (F[j](it.x) != it.y);
    }
  }
  return errs;
}

inline std::size_t erm_index_range(const HypothesisClass& F, const LabeledSample& s, std::size_t first,
                                   std::size_t count) {
  require(count > 0, "erm needs a nonempty sample");
  const auto errs = error_counts(F, s, first, count);
  std::size_t best = 0;
  for (std::size_t j = 1; j < F.size(); ++j)
    if (errs[j] < errs[best]) best = j;  // strict: ties keep the lowest index
  return best;
}

}  // namespace detail

// Index of the empirical risk minimizer; ties go to the lowest member index.
inline std::size_t erm_index(const HypothesisClass& F, const LabeledSample& s) {
  return detail::erm_index_range(F, s, 0, s.size());
}

inline const Hypothesis& erm(const HypothesisClass& F, const LabeledSample& s) {
  return F[erm_index(F, s)];
}

// The set of almost empirical risk minimizers
//   { f : R_n(f) - R_n(g_hat) <= c (alpha^2 + alpha sqrt(P_n|g_hat - f|)) }.
struct AlmostErmSet {
  std::vector<std::size_t> members;  // ascending indices into the class
  std::size_t erm_index = 0;
  double alpha = 0.0;
  double c = 1.0;
};

namespace detail {

inline AlmostErmSet almost_erm_set_range(const HypothesisClass& F, const LabeledSample& s, std::size_t first,
                                         std::size_t count, double delta, double c,
                                         std::optional<std::size_t> d_override) {
  require(count > 0, "almost-ERM set needs a nonempty sample");
  require(c >= 0.0, "c must be nonnegative");
  const std::size_t d = d_override ? *d_override : vc_dimension(F);
  const double a = alpha(count, std::max<std::size_t>(d, 1), delta);

  const auto errs = error_counts(F, s, first, count);
  std::size_t g = 0;
  for (std::size_t j = 1; j < F.size(); ++j)
    if (errs[j] < errs[g]) g = j;

  const double n = static_cast<double>(count);
  const double risk_g = static_cast<double>(errs[g]) / n;

  AlmostErmSet out;
  out.erm_index = g;
  out.alpha = a;
  out.c = c;
  const bool tabulate = F.domain_size() <= count;
  const AtomTallies t = tabulate ? atom_tallies(s, first, count) : AtomTallies{};
  for (std::size_t j = 0; j < F.size(); ++j) {
    std::size_t disagree = 0;
    if (tabulate) {
      for (std::size_t x = 0; x < F.domain_size(); ++x)
        if (F[j](x) != F[g](x)) disagree += t.cnt[x];
    } else {
      for (std::size_t i = first; i < first + count; ++i) disagree += (F[j](s[i].x) != F[g](s[i].x));
    }
    const double slack = c * (a * a + a * std::sqrt(static_cast<double>(disagree) / n));
    if (static_cast<double>(errs[j]) / n - risk_g <= slack) out.members.push_back(j);
  }
  return out;
}

}  // namespace detail

// d defaults to the class's exact VC dimension (cached if available); callers
// running many replications on one class should pass it to avoid recomputation.
inline AlmostErmSet almost_erm_set(const HypothesisClass& F, const LabeledSample& s, double delta, double c = 1.0,
                                   std::optional<std::size_t> d_override = std::nullopt) {
  return detail::almost_erm_set_range(F, s, 0, s.size(), delta, c, d_override);
}

}  // namespace rejectlab

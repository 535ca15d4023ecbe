#pragma once

// Conversions between library objects and the plain-container inputs the
// reference oracles consume, plus tiny fixture builders shared across tests.

#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "rejectlab/rejectlab.hpp"

namespace testutil {

inline rejectlab::HypothesisClass make_class(const std::vector<std::string>& strings) {
  std::vector<rejectlab::Hypothesis> members;
  members.reserve(strings.size());
  for (const std::string& s : strings) members.push_back(rejectlab::Hypothesis::from_string(s));
  return rejectlab::HypothesisClass(strings.empty() ? 0 : strings[0].size(), std::move(members));
}

inline std::vector<std::string> to_strings(const rejectlab::HypothesisClass& F) {
  std::vector<std::string> out;
  out.reserve(F.size());
  for (std::size_t j = 0; j < F.size(); ++j) out.push_back(F[j].to_string());
  return out;
}

inline std::vector<oracle::Item> to_items(const rejectlab::LabeledSample& s) {
  std::vector<oracle::Item> out;
  out.reserve(s.size());
  for (const auto& it : s.items()) out.emplace_back(static_cast<std::uint32_t>(it.x), it.y);
  return out;
}

inline rejectlab::LabeledSample make_sample(std::size_t m, const std::vector<oracle::Item>& items) {
  std::vector<rejectlab::LabeledItem> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back({it.first, it.second});
  return rejectlab::LabeledSample(m, std::move(out));
}

// label string with '*' for abstentions (local copy so oracle comparisons do
// not route through the library's formatting)
inline std::string abstain_string(const rejectlab::AbstainingHypothesis& f) {
  std::string s(f.domain_size(), '0');
  for (std::size_t x = 0; x < f.domain_size(); ++x) {
    const int v = f(x);
    s[x] = (v == rejectlab::AbstainingHypothesis::kAbstain) ? '*' : static_cast<char>('0' + v);
  }
  return s;
}

}  // namespace testutil

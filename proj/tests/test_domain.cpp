#include <catch2/catch_amalgamated.hpp>

#include "rejectlab/rejectlab.hpp"
#include "test_util.hpp"

using namespace rejectlab;

TEST_CASE("hypothesis string round trip and bit access") {
  const Hypothesis f = Hypothesis::from_string("0110");
  REQUIRE(f.domain_size() == 4);
  REQUIRE(f(0) == 0);
  REQUIRE(f(1) == 1);
  REQUIRE(f(2) == 1);
  REQUIRE(f(3) == 0);
  REQUIRE(f.to_string() == "0110");

  Hypothesis g = f;
  g.set(0, 1);
  g.set(2, 0);
  REQUIRE(g.to_string() == "1100");
  REQUIRE(f.to_string() == "0110");  // copy did not alias

  REQUIRE_THROWS_AS(Hypothesis::from_string("01x0"), validation_error);
}

TEST_CASE("hypothesis hamming distance and disagreement atoms") {
  const Hypothesis f = Hypothesis::from_string("00110011");
  const Hypothesis g = Hypothesis::from_string("01010101");
  REQUIRE(f.hamming(g) == 4);
  REQUIRE(f.disagreement_atoms(g) == std::vector<std::size_t>{1, 2, 5, 6});
  REQUIRE(f.hamming(f) == 0);
  REQUIRE(f.disagreement_atoms(f).empty());
  REQUIRE_THROWS_AS(f.hamming(Hypothesis::from_string("01")), validation_error);
}

TEST_CASE("hypothesis order is lexicographic with atom 0 most significant") {
  const Hypothesis a = Hypothesis::from_string("0011");
  const Hypothesis b = Hypothesis::from_string("0101");
  REQUIRE(a < b);
  REQUIRE(!(b < a));
  REQUIRE(!(a < a));
  // a full word boundary: 65 atoms differing only at the last one
  Hypothesis lo(65), hi(65);
  hi.set(64, 1);
  REQUIRE(lo < hi);
}

TEST_CASE("hypothesis class sorts and deduplicates members") {
  const HypothesisClass F = testutil::make_class({"1111", "0000", "0000", "0101"});
  REQUIRE(F.size() == 3);
  REQUIRE(F[0].to_string() == "0000");
  REQUIRE(F[1].to_string() == "0101");
  REQUIRE(F[2].to_string() == "1111");
  REQUIRE(F.domain_size() == 4);
  REQUIRE_THROWS_AS(HypothesisClass(4, {}), validation_error);
  REQUIRE_THROWS_AS(HypothesisClass(4, {Hypothesis::from_string("01")}), validation_error);
}

TEST_CASE("hypothesis class cached statistics are carried by copies") {
  const HypothesisClass F = testutil::make_class({"0000", "1111"});
  REQUIRE(!F.cached_vc_dimension().has_value());
  REQUIRE(!F.cached_diameter().has_value());
  const HypothesisClass G = F.with_cached_stats(1, 4);
  REQUIRE(G.cached_vc_dimension() == 1);
  REQUIRE(G.cached_diameter() == 4);
  REQUIRE(!F.cached_vc_dimension().has_value());  // the original is untouched
}

TEST_CASE("abstaining hypothesis stores three-valued predictions") {
  AbstainingHypothesis g(4, AbstainingHypothesis::kAbstain);
  REQUIRE(g.abstain_count() == 4);
  g.set(0, 1);
  g.set(3, 0);
  REQUIRE(g(0) == 1);
  REQUIRE(g(1) == AbstainingHypothesis::kAbstain);
  REQUIRE(g.abstains(2));
  REQUIRE(!g.abstains(3));
  REQUIRE(g.abstain_count() == 2);
  REQUIRE(g.abstain_atoms() == std::vector<std::size_t>{1, 2});
  REQUIRE_THROWS_AS(g.set(0, 3), validation_error);
  REQUIRE_THROWS_AS(AbstainingHypothesis(2, 7), validation_error);

  const AbstainingHypothesis lift(Hypothesis::from_string("0110"));
  REQUIRE(lift.abstain_count() == 0);
  REQUIRE(lift(1) == 1);
  REQUIRE(lift(3) == 0);
}

TEST_CASE("finite distribution validates and normalizes its weights") {
  REQUIRE_THROWS_AS(FiniteDistribution({0.5, 0.4}, {0.0, 1.0}), validation_error);        // sums to 0.9
  REQUIRE_THROWS_AS(FiniteDistribution({0.5, 0.5}, {0.0, 1.5}), validation_error);        // eta out of range
  REQUIRE_THROWS_AS(FiniteDistribution({0.5, -0.5, 1.0}, {0.0, 1.0, 0.0}), validation_error);
  REQUIRE_THROWS_AS(FiniteDistribution({}, {}), validation_error);
  REQUIRE_THROWS_AS(FiniteDistribution({1.0}, {0.5, 0.5}), validation_error);             // length mismatch

  // a tiny rounding defect within tolerance is recorded and normalized away
  const double w0 = 0.25 + 1e-13;
  const FiniteDistribution dist({w0, 0.25, 0.25, 0.25}, {0.0, 0.0, 0.0, 0.0});
  double total = 0.0;
  for (std::size_t x = 0; x < 4; ++x) total += dist.weight(x);
  REQUIRE_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(dist.normalization_correction(), Catch::Matchers::WithinAbs(1e-13, 1e-14));
}

TEST_CASE("marginal draws follow the cumulative weights") {
  const FiniteDistribution dist({0.5, 0.25, 0.25}, {0.0, 0.0, 1.0});
  RngStream rng = make_stream(7);
  std::vector<std::size_t> counts(3, 0);
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) counts[dist.draw_x(rng)] += 1;
  // 5 sigma bands around the exact expectations
  REQUIRE(std::abs(static_cast<double>(counts[0]) - 10000.0) < 5.0 * std::sqrt(20000.0 * 0.25));
  REQUIRE(std::abs(static_cast<double>(counts[1]) - 5000.0) < 5.0 * std::sqrt(20000.0 * 0.1875));
  REQUIRE(std::abs(static_cast<double>(counts[2]) - 5000.0) < 5.0 * std::sqrt(20000.0 * 0.1875));
}

TEST_CASE("zero-weight atoms are never drawn") {
  const FiniteDistribution dist({0.5, 0.0, 0.5}, {0.0, 1.0, 1.0});
  RngStream rng = make_stream(11);
  for (std::size_t i = 0; i < 5000; ++i) REQUIRE(dist.draw_x(rng) != 1);
}

TEST_CASE("labeled sample validates items and slices positionally") {
  const LabeledSample s(3, {{0, 1}, {2, 0}, {1, 1}, {0, 0}});
  REQUIRE(s.size() == 4);
  REQUIRE(s[2].x == 1);
  REQUIRE(s[2].y == 1);
  const LabeledSample mid = s.slice(1, 2);
  REQUIRE(mid.size() == 2);
  REQUIRE(mid[0].x == 2);
  REQUIRE(mid[1].x == 1);
  REQUIRE_THROWS_AS(s.slice(3, 2), validation_error);
  REQUIRE_THROWS_AS(LabeledSample(3, {{3, 0}}), validation_error);
  REQUIRE_THROWS_AS(LabeledSample(3, {{0, 2}}), validation_error);
}

TEST_CASE("sampling consumes exactly two uniforms per item") {
  const FiniteDistribution a({0.5, 0.5}, {0.25, 0.75});
  const FiniteDistribution b({0.1, 0.2, 0.7}, {0.0, 0.5, 1.0});
  RngStream ra = make_stream(99);
  RngStream rb = make_stream(99);
  (void)sample(a, 17, ra);
  (void)sample(b, 17, rb);
  // stream positions agree afterwards regardless of the distribution drawn from
  for (int k = 0; k < 8; ++k) REQUIRE(ra.next_u64() == rb.next_u64());
}

TEST_CASE("labels follow the conditional probabilities") {
  const FiniteDistribution dist({0.5, 0.5}, {1.0, 0.0});
  RngStream rng = make_stream(3);
  const LabeledSample s = sample(dist, 4000, rng);
  for (const auto& it : s.items()) REQUIRE(it.y == (it.x == 0 ? 1 : 0));
}

TEST_CASE("seed derivation separates substreams deterministically") {
  REQUIRE(derive_seed(42, 1, 2) == derive_seed(42, 1, 2));
  REQUIRE(derive_seed(42, 1, 2) != derive_seed(42, 1, 3));
  REQUIRE(derive_seed(42, 1, 2) != derive_seed(42, 2, 2));
  REQUIRE(derive_seed(42, 1, 2) != derive_seed(43, 1, 2));

  RngStream s1 = make_stream(5, 0, 1);
  RngStream s2 = make_stream(5, 0, 1);
  for (int k = 0; k < 16; ++k) REQUIRE(s1.next_u64() == s2.next_u64());
}

TEST_CASE("uniform01 lands in the half-open unit interval") {
  RngStream rng = make_stream(123);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include "rejectlab/rejectlab.hpp"
#include "test_util.hpp"

using namespace rejectlab;
using Catch::Matchers::WithinAbs;

namespace {

LearningCurve synthetic(const std::vector<std::pair<std::size_t, double>>& points) {
  LearningCurve curve;
  for (const auto& [n, v] : points) {
    CurveRow row;
    row.n = n;
    row.mean_excess = v;
    row.stderr_excess = v / 10.0;
    row.mean_abstain_mass = 8.0 / static_cast<double>(n);
    row.reps = 2;
    curve.rows.push_back(row);
  }
  return curve;
}

bool rows_equal(const CurveRow& a, const CurveRow& b) {
  return a.n == b.n && a.mean_excess == b.mean_excess && a.stderr_excess == b.stderr_excess &&
         a.mean_abstain_mass == b.mean_abstain_mass && a.reps == b.reps;
}

}  // namespace

TEST_CASE("the oracle learner has exactly zero excess") {
  const Construction con = make_two_function_construction(0.2, 0.05, 1, 1, 3, 1.0);
  LearnerSpec spec;
  spec.kind = LearnerKind::oracle;
  const LearningCurve curve = monte_carlo_curve(con, spec, {1, 10, 100}, 2, RiskTag::standard, 99);
  REQUIRE(curve.learner == std::string("oracle"));
  REQUIRE(curve.risk == std::string("R"));
  REQUIRE(curve.seed == 99);
  REQUIRE(curve.rows.size() == 3);
  for (const CurveRow& row : curve.rows) {
    REQUIRE(row.mean_excess == 0.0);
    REQUIRE(row.stderr_excess == 0.0);
    REQUIRE(row.mean_abstain_mass == 0.0);
    REQUIRE(row.reps == 2);
  }
}

TEST_CASE("replication streams make curves reproducible and thread-invariant") {
  const Construction con = make_two_function_construction(0.2, 0.1, 1, 1, 3, 1.0);
  LearnerSpec spec;
  spec.kind = LearnerKind::abstain;
  spec.p = 0.2;
  const std::vector<std::size_t> grid{4, 10, 24};
  const LearningCurve a = monte_carlo_curve(con, spec, grid, 30, RiskTag::reject, 1234, 1);
  const LearningCurve b = monte_carlo_curve(con, spec, grid, 30, RiskTag::reject, 1234, 1);
  const LearningCurve c = monte_carlo_curve(con, spec, grid, 30, RiskTag::reject, 1234, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(rows_equal(a.rows[i], b.rows[i]));
    REQUIRE(rows_equal(a.rows[i], c.rows[i]));
  }
  // extending the grid preserves the rows already computed
  const LearningCurve d = monte_carlo_curve(con, spec, {4, 10, 24, 50}, 30, RiskTag::reject, 1234, 2);
  for (std::size_t i = 0; i < grid.size(); ++i) REQUIRE(rows_equal(a.rows[i], d.rows[i]));
  // a different seed genuinely changes the draw
  const LearningCurve e = monte_carlo_curve(con, spec, grid, 30, RiskTag::reject, 4321, 1);
  REQUIRE(a.rows[0].mean_excess != e.rows[0].mean_excess);
}

TEST_CASE("empirical-minimizer curves match the exact random-walk computation") {
  LearnerSpec spec;  // defaults to the empirical minimizer
  const double tau = 0.2, h = 1.0;

  // fixed construction: one epsilon across the grid
  const Construction con = make_two_function_construction(tau, 0.1, 1, 1, 3, h);
  const LearningCurve fixed = monte_carlo_curve(con, spec, {5, 10, 20}, 3000, RiskTag::standard, 501, 4);
  for (const CurveRow& row : fixed.rows) {
    const double exact = oracle::two_function_erm_mean_excess(tau, 0.1, h, row.n);
    REQUIRE_THAT(row.mean_excess, WithinAbs(exact, 3.0 * row.stderr_excess + 1e-12));
  }

  // scaled family: the hard alternative tightens as n grows
  const ConstructionFamily family = [&](std::size_t n) {
    return make_two_function_construction(tau, 0.5 / std::sqrt(static_cast<double>(n)), 1, 1, 3, h);
  };
  const LearningCurve scaled = monte_carlo_curve(family, spec, {4, 16}, 2000, RiskTag::standard, 502, 4);
  for (const CurveRow& row : scaled.rows) {
    const double eps = 0.5 / std::sqrt(static_cast<double>(row.n));
    const double exact = oracle::two_function_erm_mean_excess(tau, eps, h, row.n);
    REQUIRE_THAT(row.mean_excess, WithinAbs(exact, 3.0 * row.stderr_excess + 1e-12));
  }
}

TEST_CASE("the memorizer is improper: it can beat the best in class") {
  const Construction con = make_two_function_construction(0.2, 0.05, 1, 1, 3, 1.0);
  LearnerSpec spec;
  spec.kind = LearnerKind::memorize;
  const LearningCurve curve = monte_carlo_curve(con, spec, {10, 100, 400}, 50, RiskTag::standard, 77);
  REQUIRE(curve.rows.back().mean_excess < -0.15);  // approaches Bayes, 0.2 below the class best
  for (const CurveRow& row : curve.rows) REQUIRE(row.mean_excess >= -con.meta.fstar_risk - 1e-12);
}

TEST_CASE("zero-price evaluation dominates the priced rejection risk") {
  const Construction con =
      make_wellspecified_massart(make_sparse_class(1, 4), 2, 0.5, std::vector<double>(4, 0.25));
  LearnerSpec spec;
  spec.kind = LearnerKind::abstain;
  spec.p = 0.25;
  const LearningCurve zero = monte_carlo_curve(con, spec, {4, 16}, 40, RiskTag::zero_reject, 88);
  const LearningCurve priced = monte_carlo_curve(con, spec, {4, 16}, 40, RiskTag::reject, 88);
  REQUIRE(zero.risk == std::string("R^0"));
  REQUIRE(priced.risk == std::string("R^p"));
  for (std::size_t i = 0; i < 2; ++i) {
    REQUIRE(zero.rows[i].mean_excess >= priced.rows[i].mean_excess - 1e-15);
    REQUIRE(zero.rows[i].mean_abstain_mass == priced.rows[i].mean_abstain_mass);
  }
}

TEST_CASE("curve preconditions: risks, margins, grids, and replication counts") {
  const Construction con = make_two_function_construction(0.2, 0.05, 1, 1, 3, 0.8);
  LearnerSpec abst;
  abst.kind = LearnerKind::abstain;
  try {
    monte_carlo_curve(con, abst, {4}, 5, RiskTag::standard, 1);
    FAIL("expected the plain risk to be rejected for abstaining learners");
  } catch (const validation_error& e) {
    REQUIRE(std::string(e.what()).find("plain risk is undefined") != std::string::npos);
  }

  LearnerSpec mem;
  mem.kind = LearnerKind::memorize;
  try {
    monte_carlo_curve(con, mem, {4}, 5, RiskTag::standard, 1);
    FAIL("expected noisy labels to be rejected for the memorizer");
  } catch (const validation_error& e) {
    REQUIRE(std::string(e.what()).find("noiseless labels") != std::string::npos);
  }

  LearnerSpec spec;
  REQUIRE_THROWS_AS(monte_carlo_curve(con, spec, {4}, 1, RiskTag::standard, 1), validation_error);
  REQUIRE_THROWS_AS(monte_carlo_curve(con, spec, {}, 5, RiskTag::standard, 1), validation_error);
  REQUIRE_THROWS_AS(monte_carlo_curve(con, spec, {4, 4}, 5, RiskTag::standard, 1), validation_error);
  REQUIRE_THROWS_AS(monte_carlo_curve(con, spec, {8, 4}, 5, RiskTag::standard, 1), validation_error);
  REQUIRE_THROWS_AS(monte_carlo_curve(con, spec, {0, 4}, 5, RiskTag::standard, 1), validation_error);
  LearnerSpec bad_p;
  bad_p.p = 0.6;
  REQUIRE_THROWS_AS(monte_carlo_curve(con, bad_p, {4}, 5, RiskTag::standard, 1), validation_error);
}

TEST_CASE("rate-slope fits recover exact power laws") {
  REQUIRE_THAT(fit_rate_slope(synthetic({{10, 0.3}, {100, 0.03}, {1000, 0.003}})),
               WithinAbs(-1.0, 1e-12));
  REQUIRE_THAT(fit_rate_slope(synthetic({{4, 1.5}, {16, 0.75}, {64, 0.375}})), WithinAbs(-0.5, 1e-12));
  REQUIRE_THAT(fit_rate_slope(synthetic({{4, 0.7}, {16, 0.7}, {64, 0.7}})), WithinAbs(0.0, 1e-12));
  // weights scale both sums of an exact fit identically
  REQUIRE_THAT(fit_rate_slope(synthetic({{10, 0.3}, {100, 0.03}, {1000, 0.003}}), CurveField::excess, true),
               WithinAbs(-1.0, 1e-12));
  // the abstention-mass column fits through the same projection
  REQUIRE_THAT(fit_rate_slope(synthetic({{4, 0.7}, {16, 0.7}, {64, 0.7}}), CurveField::abstain_mass),
               WithinAbs(-1.0, 1e-12));

  REQUIRE_THROWS_AS(fit_rate_slope(synthetic({{10, 0.3}, {100, 0.03}})), validation_error);
  try {
    fit_rate_slope(synthetic({{10, 0.3}, {100, 0.0}, {1000, 0.003}}));
    FAIL("expected a zero mean to be rejected");
  } catch (const validation_error& e) {
    REQUIRE(std::string(e.what()).find("rate degenerate") != std::string::npos);
  }
  REQUIRE_THROWS_AS(fit_rate_slope(synthetic({{10, 0.3}, {100, -0.1}, {1000, 0.003}})), validation_error);

  LearningCurve no_err = synthetic({{10, 0.3}, {100, 0.03}, {1000, 0.003}});
  for (CurveRow& row : no_err.rows) row.stderr_excess = 0.0;
  REQUIRE_THROWS_AS(fit_rate_slope(no_err, CurveField::excess, true), validation_error);
}

TEST_CASE("the scaled bound statistic normalizes means to the theoretical unit") {
  const std::size_t d = 2;
  const double delta = 0.1, p = 0.25;
  LearningCurve curve;
  for (const std::size_t n : {50, 200}) {
    CurveRow row;
    row.n = n;
    const double denom =
        static_cast<double>(d) * clamped_log(static_cast<double>(n) / static_cast<double>(d)) +
        clamped_log(1.0 / delta);
    row.mean_excess = denom / (static_cast<double>(n) * p);
    curve.rows.push_back(row);
  }
  const std::vector<double> stat = scaled_theorem_statistic(curve, d, delta, p);
  REQUIRE(stat.size() == 2);
  REQUIRE_THAT(stat[0], WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(stat[1], WithinAbs(1.0, 1e-12));

  for (CurveRow& row : curve.rows) row.mean_excess *= 0.5;
  const std::vector<double> half = scaled_theorem_statistic(curve, d, delta, p);
  REQUIRE_THAT(half[0], WithinAbs(0.5, 1e-12));

  REQUIRE_THROWS_AS(scaled_theorem_statistic(curve, d, delta, 0.0), validation_error);
  REQUIRE_THROWS_AS(scaled_theorem_statistic(curve, 0, delta, p), validation_error);
  REQUIRE_THROWS_AS(scaled_theorem_statistic(curve, d, 1.0, p), validation_error);
}

TEST_CASE("abstention mass fades as the sample grows on a margin fixture") {
  const Construction con =
      make_wellspecified_massart(make_sparse_class(1, 4), 2, 0.5, std::vector<double>(4, 0.25));
  LearnerSpec spec;
  spec.kind = LearnerKind::abstain;
  // rejection price 0.4 strictly exceeds the 0.25 conditional error rate, so
  // committing wins whenever the almost-minimizer set has settled
  spec.p = 0.1;
  const LearningCurve curve = monte_carlo_curve(con, spec, {4, 32, 256}, 200, RiskTag::reject, 91, 4);
  REQUIRE(curve.rows.front().mean_abstain_mass >= curve.rows.back().mean_abstain_mass - 0.02);
  REQUIRE(curve.rows.back().mean_abstain_mass < 0.2);
}

// Command-line front end: learn / experiment / diameter / verify over JSON
// class and distribution files, with a JSON config file plus flag overrides
// (flags win), deterministic output naming, and exit codes 0 (ok),
// 2 (validation), 3 (budget).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rejectlab/rejectlab.hpp"

namespace rl = rejectlab;

namespace {

constexpr const char* kVersion = "rejectlab-1.0.0";

struct Options {
  std::string config_file;
  std::string class_file;
  std::string dist_file;
  std::string out;
  std::string learner = "erm";
  std::string risk = "Rp";
  std::string family = "files";
  std::string eps_scale = "none";
  std::string check = "ratio";
  double p = 0.25;
  double q = 1.5;
  double h = 1.0;
  double c = 1.0;
  double c1 = 1.0 / 128.0;
  double c2 = 128.0;
  double delta = 0.05;
  double tau = 0.2;
  double eps = 0.0;
  double beta = 1.0;
  std::size_t n = 100;
  std::vector<std::size_t> n_grid{64, 128, 256};
  std::size_t reps = 100;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  std::size_t atoms_b = 4;
  std::size_t atoms_c = 4;
  std::size_t m = 16;
  std::size_t fstar_index = 0;
  std::size_t workers = 1;
  std::size_t cover_budget = rl::kDefaultCoverAtomBudget;
};

void apply_config(Options& o, const rl::json& j) {
  const auto set_str = [&](const char* k, std::string& v) {
    if (j.contains(k)) v = rl::detail::get_field<std::string>(j, k);
  };
  const auto set_real = [&](const char* k, double& v) {
    if (j.contains(k)) v = rl::detail::get_field<double>(j, k);
  };
  const auto set_count = [&](const char* k, std::size_t& v) {
    if (j.contains(k)) v = rl::detail::get_field<std::size_t>(j, k);
  };
  set_str("class_file", o.class_file);
  set_str("dist_file", o.dist_file);
  set_str("out", o.out);
  set_str("learner", o.learner);
  set_str("risk", o.risk);
  set_str("family", o.family);
  set_str("eps_scale", o.eps_scale);
  set_str("check", o.check);
  set_real("p", o.p);
  set_real("q", o.q);
  set_real("h", o.h);
  set_real("c", o.c);
  set_real("c1", o.c1);
  set_real("c2", o.c2);
  set_real("delta", o.delta);
  set_real("tau", o.tau);
  set_real("eps", o.eps);
  set_real("beta", o.beta);
  set_count("n", o.n);
  set_count("reps", o.reps);
  set_count("trials", o.trials);
  set_count("atoms_b", o.atoms_b);
  set_count("atoms_c", o.atoms_c);
  set_count("m", o.m);
  set_count("fstar_index", o.fstar_index);
  set_count("workers", o.workers);
  set_count("cover_budget", o.cover_budget);
  if (j.contains("seed")) o.seed = rl::detail::get_field<std::uint64_t>(j, "seed");
  if (j.contains("n_grid")) o.n_grid = rl::detail::get_field<std::vector<std::size_t>>(j, "n_grid");
}

rl::json resolved_config(const std::string& command, const Options& o) {
  rl::json j;
  j["command"] = command;
  j["class_file"] = o.class_file;
  j["dist_file"] = o.dist_file;
  j["learner"] = o.learner;
  j["risk"] = o.risk;
  j["family"] = o.family;
  j["eps_scale"] = o.eps_scale;
  j["check"] = o.check;
  j["p"] = o.p;
  j["q"] = o.q;
  j["h"] = o.h;
  j["c"] = o.c;
  j["c1"] = o.c1;
  j["c2"] = o.c2;
  j["delta"] = o.delta;
  j["tau"] = o.tau;
  j["eps"] = o.eps;
  j["beta"] = o.beta;
  j["n"] = o.n;
  j["n_grid"] = o.n_grid;
  j["reps"] = o.reps;
  j["trials"] = o.trials;
  j["seed"] = o.seed;
  j["atoms_b"] = o.atoms_b;
  j["atoms_c"] = o.atoms_c;
  j["m"] = o.m;
  j["fstar_index"] = o.fstar_index;
  j["cover_budget"] = o.cover_budget;
  return j;
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tmultc{};
  gmtime_r(&now, &tmultc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tmultc);
  return buf;
}

std::size_t effective_workers(std::size_t requested) {
  if (const char* cap = std::getenv("REJECTLAB_WORKERS")) {
    const unsigned long v = std::strtoul(cap, nullptr, 10);
    if (v >= 1) return std::min<std::size_t>(requested, v);
  }
  return requested;
}

rl::LearnerKind parse_learner(const std::string& tag) {
  if (tag == "erm") return rl::LearnerKind::erm;
  if (tag == "abstain") return rl::LearnerKind::abstain;
  if (tag == "finite_diameter") return rl::LearnerKind::finite_diameter;
  if (tag == "dist_dependent") return rl::LearnerKind::dist_dependent;
  if (tag == "memorize") return rl::LearnerKind::memorize;
  if (tag == "oracle") return rl::LearnerKind::oracle;
  throw rl::validation_error("unknown learner tag \"" + tag + "\"");
}

rl::RiskTag parse_risk(const std::string& tag) {
  if (tag == "R") return rl::RiskTag::standard;
  if (tag == "Rp" || tag == "R^p") return rl::RiskTag::reject;
  if (tag == "R0" || tag == "R^0") return rl::RiskTag::zero_reject;
  throw rl::validation_error("unknown risk tag \"" + tag + "\"");
}

rl::HypothesisClass load_class(const Options& o) {
  rl::require(!o.class_file.empty(), "a class file is required (--class-file)");
  return rl::class_from_json(rl::json_from_file(o.class_file));
}

rl::FiniteDistribution load_dist(const Options& o) {
  rl::require(!o.dist_file.empty(), "a distribution file is required (--dist-file)");
  return rl::distribution_from_json(rl::json_from_file(o.dist_file));
}

std::string out_base(const std::string& command, const Options& o) {
  if (!o.out.empty()) return o.out;
  return command + "-" + rl::config_hash(resolved_config(command, o));
}

rl::ConstructionFamily construction_family(const Options& o) {
  if (o.family == "files") {
    auto con = std::make_shared<rl::Construction>(
        rl::Construction::compute(load_class(o), load_dist(o), "files", {}));
    return [con](std::size_t) { return *con; };
  }
  if (o.family == "two_function") {
    const Options opts = o;
    rl::require(opts.eps_scale == "none" || opts.eps_scale == "sqrt_tau_over_n",
                "unknown eps_scale (use none or sqrt_tau_over_n)");
    return [opts](std::size_t n) {
      const double eps_n = opts.eps_scale == "sqrt_tau_over_n"
                               ? std::sqrt(opts.tau / static_cast<double>(n))
                               : opts.eps;
      return rl::make_two_function_construction(opts.tau, eps_n, opts.atoms_b, opts.atoms_c, opts.m, opts.h);
    };
  }
  if (o.family == "massart") {
    const rl::HypothesisClass cls = load_class(o);
    std::vector<double> weights;
    if (!o.dist_file.empty()) {
      const rl::FiniteDistribution d = load_dist(o);
      for (std::size_t x = 0; x < d.domain_size(); ++x) weights.push_back(d.weight(x));
    } else {
      weights.assign(cls.domain_size(), 1.0 / static_cast<double>(cls.domain_size()));
    }
    auto con = std::make_shared<rl::Construction>(
        rl::make_wellspecified_massart(cls, o.fstar_index, o.h, weights));
    return [con](std::size_t) { return *con; };
  }
  throw rl::validation_error("unknown construction family \"" + o.family + "\"");
}

int cmd_learn(const Options& o) {
  const rl::HypothesisClass F = load_class(o);
  const rl::FiniteDistribution dist = load_dist(o);
  rl::RngStream rng = rl::make_stream(o.seed, 0, 0);
  const rl::LabeledSample s = rl::sample(dist, o.n, rng);

  rl::json model;
  if (o.learner == "erm") {
    const std::size_t idx = rl::erm_index(F, s);
    model["kind"] = "erm";
    model["index"] = idx;
    model["hypothesis"] = F[idx].to_string();
    model["almost_erm"] = rl::almost_erm_to_json(rl::almost_erm_set(F, s, o.delta, o.c));
  } else if (o.learner == "abstain") {
    model = rl::abstainer_to_json(rl::abstaining_learner(F, s, o.delta, o.p, o.c));
    model["kind"] = "abstain";
  } else if (o.learner == "lq") {
    model = rl::abstainer_to_json(rl::aggregate_lq(F, s, o.delta, o.q, o.c));
    model["kind"] = "lq";
    model["q"] = o.q;
  } else if (o.learner == "finite_diameter") {
    const rl::FiniteDiameterModel fd = rl::finite_diameter_learner(F, s, o.delta, o.h, o.c);
    model["kind"] = "finite_diameter";
    model["h"] = fd.h;
    model["stage_one"] = rl::abstaining_to_string(fd.stage_one);
    model["output"] = fd.output.to_string();
    model["abstainer"] = rl::abstainer_to_json(fd.abstainer);
  } else if (o.learner == "dist_dependent") {
    const rl::DistDependentModel dd =
        rl::distribution_dependent_learner(F, s, o.delta, dist, o.c1, o.c2, o.c, o.cover_budget);
    model["kind"] = "dist_dependent";
    model["radius"] = dd.radius;
    model["dpx"] = dd.dpx;
    model["dpx_exact"] = dd.dpx_exact;
    model["degenerate"] = dd.degenerate;
    model["cover_size"] = dd.cover.centers.size();
    model["center_index"] = dd.center_index;
    model["output"] = dd.output.to_string();
    model["abstainer"] = rl::abstainer_to_json(dd.abstainer);
  } else if (o.learner == "memorize") {
    const rl::Hypothesis f = rl::memorizing_learner(s, F[0]);
    model["kind"] = "memorize";
    model["output"] = f.to_string();
    model["loo"] = rl::loo_error(s, F[0]);
  } else {
    throw rl::validation_error("unknown learner tag \"" + o.learner + "\" for learn");
  }
  model["constants"] = {{"c", o.c}, {"c1", o.c1}, {"c2", o.c2}, {"delta", o.delta}};
  model["seed"] = o.seed;
  model["n"] = o.n;

  const std::string path = out_base("learn", o) + ".json";
  rl::write_text_atomic(path, model.dump(2) + "\n");
  std::cout << path << "\n";
  return 0;
}

int cmd_experiment(const Options& o) {
  const rl::ConstructionFamily family = construction_family(o);
  rl::LearnerSpec spec;
  spec.kind = parse_learner(o.learner);
  spec.p = o.p;
  spec.h = o.h;
  spec.c = o.c;
  spec.c1 = o.c1;
  spec.c2 = o.c2;
  spec.delta = o.delta;
  spec.cover_budget = o.cover_budget;
  const rl::RiskTag risk = parse_risk(o.risk);

  const rl::LearningCurve curve = rl::monte_carlo_curve(family, spec, o.n_grid, o.reps, risk, o.seed,
                                                        effective_workers(o.workers));

  rl::json sidecar;
  sidecar["command"] = "experiment";
  sidecar["config"] = resolved_config("experiment", o);
  sidecar["curve"] = rl::curve_to_json(curve);
  rl::json metas = rl::json::array();
  for (const std::size_t n : o.n_grid) metas.push_back(rl::construction_meta_to_json(family(n).meta));
  sidecar["constructions"] = metas;
  sidecar["generated_at"] = timestamp_utc();
  sidecar["version"] = kVersion;

  const std::string base = out_base("experiment", o);
  rl::write_text_atomic(base + ".csv", rl::curve_to_csv(curve));
  rl::write_text_atomic(base + ".json", sidecar.dump(2) + "\n");
  std::cout << base << ".csv\n" << base << ".json\n";
  return 0;
}

int cmd_diameter(const Options& o) {
  const rl::HypothesisClass F = load_class(o);
  rl::json j;
  j["d"] = rl::vc_dimension(F);
  j["D"] = rl::combinatorial_diameter(F);
  std::string line = "{\"d\":" + j["d"].dump() + ",\"D\":" + j["D"].dump();
  if (!o.dist_file.empty()) {
    const rl::FiniteDistribution dist = load_dist(o);
    const rl::DpxResult dpx = rl::dpx_diameter(F, dist, o.n, o.c1, o.cover_budget);
    j["D_PX"] = dpx.value;
    j["D_PX_exact"] = dpx.exact;
    line += ",\"D_PX\":" + j["D_PX"].dump();
  }
  line += "}";
  std::cout << line << "\n";
  if (!o.out.empty()) rl::write_text_atomic(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_verify(const Options& o) {
  const rl::HypothesisClass F = load_class(o);
  const rl::FiniteDistribution dist = load_dist(o);
  const rl::json params = resolved_config("verify", o);
  rl::json report;

  if (o.check == "ratio") {
    const rl::DeviationStatistic stat = rl::ratio_bound_check(F, dist, o.n, o.delta, o.trials, o.seed);
    report = rl::deviation_to_json(stat, "ratio", params);
  } else if (o.check == "excess_loss") {
    const rl::DeviationStatistic stat =
        rl::excess_loss_deviation_check(F, dist, o.n, o.delta, o.q, o.trials, o.seed);
    report = rl::deviation_to_json(stat, "excess_loss", params);
  } else if (o.check == "membership") {
    const double freq = rl::target_membership_check(F, dist, o.n, o.delta, o.c, o.trials, o.seed);
    const rl::PopulationMinimizer fstar = rl::population_minimizer(F, dist);
    report["check"] = "membership";
    report["params"] = params;
    report["trials"] = o.trials;
    report["frequency"] = freq;
    report["best_index"] = fstar.index;
    report["best_risk_ties"] = fstar.tie_count;
  } else if (o.check == "bernstein") {
    const double b = rl::bernstein_estimate(F, dist, o.beta);
    report["check"] = "bernstein";
    report["params"] = params;
    if (std::isinf(b))
      report["B"] = "infinite";
    else
      report["B"] = b;
  } else if (o.check == "identity") {
    const rl::PopulationMinimizer fstar = rl::population_minimizer(F, dist);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      rl::RngStream rng = rl::make_stream(o.seed, t, 0);
      const rl::LabeledSample s = rl::sample(dist, o.n, rng);
      const rl::AbstainerModel model = rl::abstaining_learner(F, s, o.delta, o.p, o.c);
      worst = std::max(worst, rl::identity_check_rp_lq(model, dist, fstar.risk, std::min(o.p, 0.25)));
    }
    report["check"] = "identity";
    report["params"] = params;
    report["trials"] = o.trials;
    report["max_discrepancy"] = worst;
    report["pass"] = worst <= 1e-12;
  } else {
    throw rl::validation_error("unknown check \"" + o.check +
                               "\" (use ratio, excess_loss, membership, bernstein, or identity)");
  }

  const std::string path = out_base("verify", o) + ".json";
  rl::write_text_atomic(path, report.dump(2) + "\n");
  std::cout << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  try {
    // first pass: honor a config file so that explicit flags override it
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") apply_config(o, rl::json_from_file(argv[i + 1]));

    CLI::App app{"fast-rate classification with a reject option"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);
    auto* learn = app.add_subcommand("learn", "fit one model on a drawn sample and write it as JSON");
    auto* experiment = app.add_subcommand("experiment", "Monte Carlo learning-curve run (CSV + JSON sidecar)");
    auto* diameter = app.add_subcommand("diameter", "print class dimensions {d, D[, D_PX]}");
    auto* verify = app.add_subcommand("verify", "run a statistical or exact identity check");
    for (CLI::App* sub : {learn, experiment, diameter, verify}) {
      sub->set_help_flag("--help", "print help and exit");
      sub->add_option("--config", o.config_file, "JSON config file; explicit flags win");
      sub->add_option("--class-file", o.class_file, "hypothesis class JSON");
      sub->add_option("--dist-file", o.dist_file, "distribution JSON");
      sub->add_option("--out", o.out, "output path base (default: <command>-<config hash>)");
      sub->add_option("--learner", o.learner, "erm|abstain|lq|finite_diameter|dist_dependent|memorize|oracle");
      sub->add_option("--risk", o.risk, "R|Rp|R0");
      sub->add_option("--family", o.family, "files|two_function|massart");
      sub->add_option("--eps-scale", o.eps_scale, "none|sqrt_tau_over_n");
      sub->add_option("--check", o.check, "ratio|excess_loss|membership|bernstein|identity");
      sub->add_option("--p", o.p, "rejection parameter in [0, 1/2]");
      sub->add_option("--q", o.q, "power-loss exponent in (1, 2]");
      sub->add_option("--h", o.h, "margin level in (0, 1]");
      sub->add_option("--c", o.c, "almost-ERM slack constant");
      sub->add_option("--c1", o.c1, "diameter fixed-point constant");
      sub->add_option("--c2", o.c2, "cover radius constant");
      sub->add_option("--delta", o.delta, "confidence parameter in (0, 1)");
      sub->add_option("--tau", o.tau, "two-function construction: shared disagreement mass");
      sub->add_option("--eps", o.eps, "two-function construction: excess mass");
      sub->add_option("--beta", o.beta, "Bernstein exponent in [0, 1]");
      sub->add_option("--n", o.n, "sample size (learn/verify) or diameter phase size");
      sub->add_option("--n-grid", o.n_grid, "experiment phase sizes")->delimiter(',');
      sub->add_option("--reps", o.reps, "replications per grid point");
      sub->add_option("--trials", o.trials, "verify trials");
      sub->add_option("--seed", o.seed, "master seed");
      sub->add_option("--atoms-b", o.atoms_b, "two-function construction: atoms in region B");
      sub->add_option("--atoms-c", o.atoms_c, "two-function construction: atoms in region C");
      sub->add_option("--m", o.m, "two-function construction: domain size");
      sub->add_option("--fstar-index", o.fstar_index, "massart construction: target member index");
      sub->add_option("--workers", o.workers, "worker threads (capped by REJECTLAB_WORKERS)");
      sub->add_option("--cover-budget", o.cover_budget, "max support atoms for covering computations");
    }
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    if (learn->parsed()) return cmd_learn(o);
    if (experiment->parsed()) return cmd_experiment(o);
    if (diameter->parsed()) return cmd_diameter(o);
    if (verify->parsed()) return cmd_verify(o);
    throw rl::validation_error("no subcommand given");
  } catch (const rl::budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const rl::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

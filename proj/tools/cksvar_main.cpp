// Command-line front end: simulate paths, test common-trend hypotheses on
// CSV data, tabulate critical values, and run the Monte Carlo study.
//
// Exit codes: 0 ok, 2 usage, 3 validation / missing critical value, 4 I/O,
// 5 degenerate data, 6 insufficient accepted draws.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cksvar/csv.hpp"
#include "cksvar/error.hpp"
#include "cksvar/limitdist.hpp"
#include "cksvar/montecarlo.hpp"
#include "cksvar/ranktest.hpp"
#include "cksvar/simulate.hpp"

namespace {

using namespace cksvar;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Error::Code::invalid_argument:
    case Error::Code::dimension_mismatch:
      return 2;
    case Error::Code::io_error:
      return 4;
    case Error::Code::parse_error:
      return 4;
    case Error::Code::degenerate_data:
    case Error::Code::not_positive_definite:
      return 5;
    case Error::Code::insufficient_accepted_draws:
      return 6;
    default:
      return 3;  // model validation, missing table rows, coherency, ...
  }
}

std::vector<double> parse_double_list(const std::string& csv, const std::string& flag) {
  std::vector<double> out;
  std::string tok;
  std::istringstream in(csv);
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(Error::Code::invalid_argument, "bad value '" + tok + "' for " + flag);
    }
  }
  if (out.empty())
    throw Error(Error::Code::invalid_argument, flag + " needs at least one value");
  return out;
}

std::vector<int> parse_int_list(const std::string& csv, const std::string& flag) {
  std::vector<int> out;
  for (double v : parse_double_list(csv, flag)) out.push_back(static_cast<int>(v));
  return out;
}

// fail on unwritable output paths before any heavy work starts
void probe_writable(const std::string& path) {
  std::ofstream probe(path, std::ios::app);
  if (!probe) throw Error(Error::Code::io_error, "cannot write " + path);
}

struct SimulateArgs {
  std::string design, params_file, out;
  int n = 0;
  std::uint64_t seed = 0;
  int burn_in = 0;
};

int cmd_simulate(const SimulateArgs& a) {
  if (a.design.empty() == a.params_file.empty())
    throw Error(Error::Code::invalid_argument,
                "simulate: give exactly one of --design and --params");
  probe_writable(a.out);
  CksvarParams params =
      a.design.empty() ? read_params_file(a.params_file) : mc_design(design_from_name(a.design)).params;
  Rng rng(a.seed);
  const SimulatedPath sim = simulate_path(params, a.n, {}, rng, a.burn_in);
  write_series_csv(a.out, sim.path);
  const OccupationStats occ = occupation(sim.path.column(0));
  std::printf("wrote %d observations to %s\n", sim.path.n, a.out.c_str());
  std::printf("occupation: plus %d (%.4f)  minus %d (%.4f)\n", occ.count_plus, occ.frac_plus,
              occ.count_minus, occ.frac_minus);
  return 0;
}

struct TestArgs {
  std::string input, critvals, variant = "mb", format = "text";
  int q0 = 1;
  double alpha = 0.10;
  double tau = -1.0;  // default depends on variant
  std::optional<double> y0;
  int lrv_lags = 0;
  std::string kernel = "bartlett";
};

int cmd_test(const TestArgs& a) {
  if (a.format != "text" && a.format != "csv")
    throw Error(Error::Code::invalid_argument, "test: --format must be text or csv");
  const Variant variant = variant_from_name(a.variant);
  const double tau = a.tau >= 0.0 ? a.tau : (variant == Variant::mb ? 0.15 : 0.0);
  const SeriesMatrix z = read_series_csv(a.input);
  const CritValTable table = read_critval_csv(a.critvals);
  LrvSettings lrv;
  lrv.lags = a.lrv_lags;
  lrv.kernel = a.kernel;
  const TestOutcome outcome = run_test(z, a.q0, variant, table, a.alpha, tau, a.y0, lrv);
  if (a.format == "csv") {
    std::printf("%s\n%s\n", test_outcome_csv_header().c_str(),
                test_outcome_csv_row(outcome).c_str());
  } else {
    std::printf("variant        %s\n", variant_name(outcome.variant));
    std::printf("q0             %d\n", outcome.q0);
    std::printf("lambda         %s\n", format_short(outcome.lambda_stat).c_str());
    std::printf("critical value %s (alpha %s, tau %s, w0 %s)\n",
                format_short(outcome.crit_value).c_str(), format_short(outcome.alpha).c_str(),
                format_short(outcome.tau).c_str(), format_short(outcome.w0_used).c_str());
    std::printf("occupation     plus %.4f / minus %.4f\n", outcome.occupation.frac_plus,
                outcome.occupation.frac_minus);
    std::printf("decision       %s\n", outcome.reject ? "reject" : "fail to reject");
  }
  return 0;
}

struct CritvalArgs {
  std::string variant = "mb", taus = "0", alphas = "0.1", w0s = "0", out;
  int q0 = 1, grid = 2000, threads = 0;
  long reps = 100000;
  std::uint64_t seed = 0;
};

int cmd_critvals(const CritvalArgs& a) {
  LimitSimConfig cfg;
  cfg.variant = variant_from_name(a.variant);
  cfg.q0 = a.q0;
  cfg.grid = a.grid;
  cfg.reps = a.reps;
  cfg.seed = a.seed;
  cfg.taus = parse_double_list(a.taus, "--taus");
  cfg.alphas = parse_double_list(a.alphas, "--alphas");
  cfg.threads = a.threads;
  for (double alpha : cfg.alphas)
    if (alpha <= 0.0 || alpha >= 1.0)
      throw Error(Error::Code::invalid_argument, "critvals: alphas must lie in (0, 1)");
  cfg.validate();
  probe_writable(a.out);
  CritValTable table;
  for (double w0 : parse_double_list(a.w0s, "--w0")) {
    cfg.w0_init = w0;
    table.append(make_table(cfg));
  }
  table.sort_rows();
  write_critval_csv(a.out, table);
  std::printf("wrote %zu rows to %s\n", table.rows.size(), a.out.c_str());
  return 0;
}

struct McArgs {
  std::string design = "both", sizes = "200,500,1000,1500", critvals_mb, critvals_sb, out;
  int reps = 10000, threads = 0;
  std::uint64_t seed = 0;
  double alpha = 0.10, tau = 0.15, retention = 0.15;
};

int cmd_mc(const McArgs& a) {
  McConfig cfg;
  cfg.sample_sizes = parse_int_list(a.sizes, "--sizes");
  cfg.reps = a.reps;
  cfg.base_seed = a.seed;
  cfg.alpha = a.alpha;
  cfg.tau = a.tau;
  cfg.retention_threshold = a.retention;
  cfg.threads = a.threads;
  cfg.crit_mb = read_critval_csv(a.critvals_mb);
  cfg.crit_sb = read_critval_csv(a.critvals_sb);
  probe_writable(a.out);

  std::vector<McCell> cells;
  if (a.design == "both") {
    cells = run_table(cfg);
  } else {
    cfg.design = design_from_name(a.design);
    for (int n : cfg.sample_sizes)
      for (int q0 : {1, 2})
        for (Variant variant : {Variant::sb, Variant::mb})
          cells.push_back(run_cell(cfg, n, q0, variant));
  }
  write_mc_csv(a.out, cells);
  double discards = 0.0;
  for (const McCell& c : cells) discards = std::max(discards, c.mean_discards_per_rep);
  std::printf("wrote %zu cells to %s (max mean discards/rep %.3f)\n", cells.size(), a.out.c_str(),
              discards);
  return 0;
}

struct LlnArgs {
  std::string design = "nonlinear";
  int n = 20000;
  std::uint64_t seed = 0;
};

int cmd_verify_lln(const LlnArgs& a) {
  const LlnReport r = verify_lln(design_from_name(a.design), a.n, a.seed);
  std::printf("target mean          %s\n", format_short(r.mu_target).c_str());
  std::printf("full-sample mean     %s\n", format_short(r.mean_full).c_str());
  std::printf("plus-regime mean     %s  (count %d)\n", format_short(r.mean_plus).c_str(),
              r.count_plus);
  std::printf("minus-regime mean    %s  (count %d)\n", format_short(r.mean_minus).c_str(),
              r.count_minus);
  std::printf("second-moment eigs   plus %s / minus %s\n", format_short(r.min_eig_plus).c_str(),
              format_short(r.min_eig_minus).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-linear cointegration toolkit: simulation and common-trend tests"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "simulate a sample path to CSV");
  c_sim->add_option("--design", sim.design, "built-in design: linear | nonlinear");
  c_sim->add_option("--params", sim.params_file, "model parameter file");
  c_sim->add_option("--n", sim.n, "observations")->required();
  c_sim->add_option("--seed", sim.seed, "random seed")->default_val(0);
  c_sim->add_option("--out", sim.out, "output CSV path")->required();
  c_sim->add_option("--burn-in", sim.burn_in, "discarded leading steps")->default_val(0);

  TestArgs test;
  auto* c_test = app.add_subcommand("test", "run a common-trends test on a CSV path");
  c_test->add_option("--input", test.input, "path CSV")->required();
  c_test->add_option("--q0", test.q0, "hypothesized number of common trends")->required();
  c_test->add_option("--variant", test.variant, "mb | sb")->default_val("mb");
  c_test->add_option("--alpha", test.alpha, "nominal level")->default_val(0.10);
  c_test->add_option("--tau", test.tau, "occupation conditioning threshold (default 0.15 mb / 0 sb)");
  c_test->add_option("--critvals", test.critvals, "critical-value table CSV")->required();
  c_test->add_option("--format", test.format, "text | csv")->default_val("text");
  double y0_val = 0.0;
  auto* y0_opt = c_test->add_option("--y0", y0_val, "initial level of the first series");
  c_test->add_option("--lrv-lags", test.lrv_lags, "kernel lag truncation (0 = automatic)")
      ->default_val(0);
  c_test->add_option("--kernel", test.kernel, "long-run variance kernel")->default_val("bartlett");

  CritvalArgs cv;
  auto* c_cv = app.add_subcommand("critvals", "simulate limiting-distribution critical values");
  c_cv->add_option("--variant", cv.variant, "mb | sb")->required();
  c_cv->add_option("--q0", cv.q0, "hypothesized number of common trends")->required();
  c_cv->add_option("--taus", cv.taus, "comma list of conditioning thresholds")->default_val("0");
  c_cv->add_option("--alphas", cv.alphas, "comma list of levels")->default_val("0.1");
  c_cv->add_option("--reps", cv.reps, "draw budget")->default_val(100000);
  c_cv->add_option("--grid", cv.grid, "discretization grid")->default_val(2000);
  c_cv->add_option("--seed", cv.seed, "random seed")->default_val(0);
  c_cv->add_option("--w0", cv.w0s, "comma list of initialization values")->default_val("0");
  c_cv->add_option("--out", cv.out, "output table CSV")->required();
  c_cv->add_option("--threads", cv.threads, "worker threads (0 = all)")->default_val(0);

  McArgs mc;
  auto* c_mc = app.add_subcommand("mc", "run the rejection-rate study");
  c_mc->add_option("--design", mc.design, "linear | nonlinear | both")->default_val("both");
  c_mc->add_option("--sizes", mc.sizes, "comma list of sample sizes")
      ->default_val("200,500,1000,1500");
  c_mc->add_option("--reps", mc.reps, "replications per cell")->default_val(10000);
  c_mc->add_option("--seed", mc.seed, "base seed")->default_val(0);
  c_mc->add_option("--threads", mc.threads, "worker threads (0 = all)")->default_val(0);
  c_mc->add_option("--critvals-mb", mc.critvals_mb, "MB critical-value table")->required();
  c_mc->add_option("--critvals-sb", mc.critvals_sb, "SB critical-value table")->required();
  c_mc->add_option("--out", mc.out, "output CSV")->required();
  c_mc->add_option("--alpha", mc.alpha, "nominal level")->default_val(0.10);
  c_mc->add_option("--tau", mc.tau, "MB conditioning threshold")->default_val(0.15);
  c_mc->add_option("--retention", mc.retention, "occupation retention threshold")
      ->default_val(0.15);

  LlnArgs lln;
  auto* c_lln = app.add_subcommand("verify-lln", "long-path equilibrium-error averages");
  c_lln->add_option("--design", lln.design, "linear | nonlinear")->default_val("nonlinear");
  c_lln->add_option("--n", lln.n, "path length")->default_val(20000);
  c_lln->add_option("--seed", lln.seed, "random seed")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c_sim) return cmd_simulate(sim);
    if (*c_test) {
      if (y0_opt->count() > 0) test.y0 = y0_val;
      return cmd_test(test);
    }
    if (*c_cv) return cmd_critvals(cv);
    if (*c_mc) return cmd_mc(mc);
    if (*c_lln) return cmd_verify_lln(lln);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}

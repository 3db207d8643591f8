#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "cksvar/csv.hpp"
#include "cksvar/error.hpp"
#include "cksvar/limitdist.hpp"
#include "cksvar/montecarlo.hpp"
#include "doctest.h"

using namespace cksvar;

namespace {

// coarse but adequate tables for smoke-level runs
CritValTable small_tables(Variant variant) {
  CritValTable out;
  for (int q0 : {1, 2}) {
    LimitSimConfig cfg;
    cfg.variant = variant;
    cfg.q0 = q0;
    cfg.grid = 200;
    cfg.reps = 4000;
    cfg.seed = 1000 + q0;
    cfg.taus = variant == Variant::mb ? std::vector<double>{0.15} : std::vector<double>{0.0};
    cfg.alphas = {0.10};
    out.append(make_table(cfg));
  }
  out.sort_rows();
  return out;
}

McConfig smoke_config() {
  McConfig cfg;
  cfg.reps = 40;
  cfg.sample_sizes = {120, 200};
  cfg.base_seed = 7;
  cfg.crit_mb = small_tables(Variant::mb);
  cfg.crit_sb = small_tables(Variant::sb);
  return cfg;
}

}  // namespace

TEST_CASE("replication seeds separate designs, sizes and reps") {
  const std::uint64_t a = replication_seed(1, McDesign::linear, 500, 3);
  CHECK(a != replication_seed(1, McDesign::nonlinear, 500, 3));
  CHECK(a != replication_seed(1, McDesign::linear, 1000, 3));
  CHECK(a != replication_seed(1, McDesign::linear, 500, 4));
  CHECK(a == replication_seed(1, McDesign::linear, 500, 3));
}

TEST_CASE("retained paths satisfy the occupation bound") {
  const CksvarParams params = mc_design(McDesign::nonlinear).params;
  for (int rep = 0; rep < 25; ++rep) {
    const RetainedDraw draw =
        draw_retained_path(params, 99, McDesign::nonlinear, 200, rep, 0.15, 10000);
    const OccupationStats occ = occupation(draw.path.column(0));
    CHECK(std::min(occ.count_plus, occ.count_minus) >= 30);
    CHECK(draw.discards >= 0);
  }
}

TEST_CASE("retention exhaustion raises after the attempt cap") {
  const CksvarParams params = mc_design(McDesign::linear).params;
  try {
    // threshold 0.499 at n = 1000 demands a near-exact occupation split
    draw_retained_path(params, 5, McDesign::linear, 1000, 0, 0.499, 3);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::retention_exhausted);
  }
}

TEST_CASE("smoke run completes with rates in the unit interval") {
  McConfig cfg = smoke_config();
  cfg.reps = 1;
  const std::vector<McCell> cells = run_table(cfg);
  CHECK(cells.size() == 16);  // 2 designs x 2 sizes x 2 hypotheses x 2 variants
  for (const McCell& c : cells) {
    CHECK(c.rejection_rate >= 0.0);
    CHECK(c.rejection_rate <= 1.0);
    CHECK(c.reps_used == 1);
  }
}

TEST_CASE("results are independent of the worker count") {
  McConfig cfg = smoke_config();
  cfg.threads = 1;
  const std::vector<McCell> one = run_table(cfg);
  cfg.threads = 8;
  const std::vector<McCell> eight = run_table(cfg);
  REQUIRE(one.size() == eight.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].rejection_rate == eight[i].rejection_rate);
    CHECK(one[i].mean_discards_per_rep == eight[i].mean_discards_per_rep);
  }
  CHECK(mc_cells_to_csv(one) == mc_cells_to_csv(eight));
}

TEST_CASE("run_cell agrees with the fused table run") {
  McConfig cfg = smoke_config();
  cfg.design = McDesign::nonlinear;
  const McCell cell = run_cell(cfg, 200, 2, Variant::mb);
  const std::vector<McCell> table = run_table(cfg);
  for (const McCell& c : table)
    if (c.design == McDesign::nonlinear && c.n == 200 && c.q0 == 2 && c.variant == Variant::mb)
      CHECK(c.rejection_rate == cell.rejection_rate);
}

TEST_CASE("missing critical values are reported") {
  McConfig cfg = smoke_config();
  cfg.crit_sb = CritValTable{};
  try {
    run_table(cfg);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::missing_critical_value);
  }
}

TEST_CASE("lln check on the nonlinear design") {
  const LlnReport r = verify_lln(McDesign::nonlinear, 20000, 2);
  CHECK(r.mu_target == doctest::Approx(-2.0));
  CHECK(std::abs(r.mean_full - (-2.0)) <= 0.1);
  CHECK(std::abs(r.mean_plus - (-2.0)) <= 0.15);
  CHECK(std::abs(r.mean_minus - (-2.0)) <= 0.15);
  CHECK(r.count_plus + r.count_minus == 20000);
  CHECK(r.min_eig_plus > 0.0);
  CHECK(r.min_eig_minus > 0.0);
}

TEST_CASE("mc csv layout") {
  McCell cell;
  cell.design = McDesign::nonlinear;
  cell.n = 500;
  cell.q0 = 2;
  cell.variant = Variant::mb;
  cell.rejection_rate = 0.75;
  cell.reps_used = 100;
  cell.mean_discards_per_rep = 1.25;
  const std::string csv = mc_cells_to_csv({cell});
  CHECK(csv == "design,n,q0,variant,rejection_rate,reps,mean_discards\n"
               "nonlinear,500,2,mb,0.75,100,1.25\n");
}

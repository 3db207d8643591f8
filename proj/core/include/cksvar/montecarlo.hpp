#pragma once

#include <cstdint>
#include <vector>

#include "cksvar/limitdist_types.hpp"
#include "cksvar/ranktest.hpp"
#include "cksvar/simulate.hpp"

namespace cksvar {

struct McConfig {
  McDesign design = McDesign::linear;
  std::vector<int> sample_sizes{200, 500, 1000, 1500};
  int reps = 10000;
  std::uint64_t base_seed = 0;
  double retention_threshold = 0.15;
  double alpha = 0.10;
  double tau = 0.15;  // conditioning threshold for the MB critical value
  CritValTable crit_mb;
  CritValTable crit_sb;
  int max_redraws_per_rep = 10000;
  int threads = 0;

  void validate() const;
};

struct McCell {
  McDesign design = McDesign::linear;
  int n = 0;
  int q0 = 0;
  Variant variant = Variant::mb;
  double rejection_rate = 0.0;
  int reps_used = 0;
  double mean_discards_per_rep = 0.0;
};

/// Replication seeds are derived by folding (design id, n, rep) into the base
/// seed; non-retained paths are redrawn with the attempt index folded in as
/// well, up to max_redraws_per_rep (retention_exhausted beyond). The result
/// is therefore independent of scheduling and worker count.
std::uint64_t replication_seed(std::uint64_t base_seed, McDesign design, int n, int rep);

struct RetainedDraw {
  SeriesMatrix path;
  int discards = 0;
};

RetainedDraw draw_retained_path(const CksvarParams& params, std::uint64_t base_seed,
                                McDesign design, int n, int rep, double retention_threshold,
                                int max_redraws_per_rep);

/// One Table-1 cell: rejection rate of the requested (variant, q0) test.
McCell run_cell(const McConfig& cfg, int n, int q0, Variant variant);

/// The full study grid: both designs x sample sizes x q0 in {1, 2} x {SB, MB},
/// sharing one simulated path per (design, n, rep). Row order: design, n,
/// q0, then SB before MB.
std::vector<McCell> run_table(const McConfig& cfg);

struct LlnReport {
  double mu_target = 0.0;       // equilibrium-error mean implied by the intercept
  double mean_full = 0.0;       // sample mean of beta*' z*_t (r = 1 designs)
  double mean_plus = 0.0;       // regime sum / regime count
  double mean_minus = 0.0;
  int count_plus = 0;
  int count_minus = 0;
  Mat second_moment_plus;       // regime second moments about the full-sample mean
  Mat second_moment_minus;
  double min_eig_plus = 0.0;
  double min_eig_minus = 0.0;
};

/// Long-path check of the regime-switching law of large numbers on a
/// benchmark design: full-sample and regime-conditional means of the
/// equilibrium error, plus regime second-moment matrices.
LlnReport verify_lln(McDesign design, int n, std::uint64_t seed);

}  // namespace cksvar

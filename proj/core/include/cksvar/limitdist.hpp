#pragma once

#include <cstdint>
#include <vector>

#include "cksvar/limitdist_types.hpp"
#include "cksvar/rng.hpp"
#include "cksvar/series.hpp"

namespace cksvar {

/// Discretized Brownian path on lambda_i = i/G, i = 0..G (q coordinates per
/// point, row-major). The first coordinate starts at w0_init, the rest at 0.
struct BrownianPath {
  int q = 0;
  int grid = 0;
  std::vector<double> values;  // (grid+1) * q

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * q + j]; }
};

struct LimitDraw {
  double lambda_value = 0.0;
  double occupation_min = 0.0;  // min of the first coordinate's regime fractions
  double w0_init = 0.0;
};

struct LimitSimConfig {
  Variant variant = Variant::mb;
  int q0 = 1;
  int grid = 2000;
  long reps = 100000;
  std::uint64_t seed = 0;
  std::vector<double> taus{0.0};
  std::vector<double> alphas{0.10};
  double w0_init = 0.0;
  int threads = 0;  // <= 0: hardware concurrency

  void validate() const;
};

/// q-dimensional Brownian motion with independent N(0, 1/G) increments and
/// first coordinate initialized at w0_init.
BrownianPath draw_w0_path(int q, int grid, double w0_init, Rng& rng);

/// Sign-split of the first coordinate: rows i = 1..G of ([w1]+, [w1]-, w_-1),
/// a (q+1)-column series.
SeriesMatrix build_w0star(const BrownianPath& path);

/// Left-Riemann trace functional of a discretized limit path (rows i = 1..G):
/// demean over the grid, cumulate, and evaluate trace(S_W S_V^-1) through the
/// pencil. With split_first = true (a build_w0star path) the underlying first
/// coordinate is the sum of the first two columns; otherwise it is column 0.
/// Throws singular_limit when S_V is not positive definite (e.g. the path
/// never changes sign).
LimitDraw lambda_limit_draw(const SeriesMatrix& path_points, double w0_init = 0.0,
                            bool split_first = true);

/// One draw of the plain (no sign-split) limit: the trace functional of a
/// demeaned q0-dimensional standard Brownian motion.
LimitDraw sb_limit_draw(int q0, int grid, Rng& rng);

/// One draw of the split (q0+1)-dimensional limit at the given initialization.
LimitDraw mb_limit_draw(int q0, int grid, double w0_init, Rng& rng);

/// Simulate cfg.reps draws (per-draw seeds derived from cfg.seed, so the
/// result is independent of the worker count) and tabulate the empirical
/// (1 - alpha) order-statistic quantiles conditional on occupation_min >= tau
/// for each requested tau. Singular draws are discarded and counted out of
/// the accepted totals. Throws insufficient_accepted_draws when a tau bucket
/// retains fewer than 1000 draws.
CritValTable make_table(const LimitSimConfig& cfg);

}  // namespace cksvar

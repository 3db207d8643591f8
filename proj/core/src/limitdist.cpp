#include "cksvar/limitdist.hpp"

#include <algorithm>
#include <cmath>

#include "cksvar/error.hpp"
#include "cksvar/parallel.hpp"
#include "cksvar/pencil.hpp"
#include "cksvar/ranktest.hpp"

namespace cksvar {

const char* variant_name(Variant v) { return v == Variant::mb ? "mb" : "sb"; }

Variant variant_from_name(const std::string& name) {
  if (name == "mb" || name == "MB") return Variant::mb;
  if (name == "sb" || name == "SB") return Variant::sb;
  throw Error(Error::Code::invalid_argument, "unknown variant: " + name);
}

void CritValTable::sort_rows() {
  std::sort(rows.begin(), rows.end(), [](const CritValRow& a, const CritValRow& b) {
    if (a.variant != b.variant) return a.variant < b.variant;
    if (a.q0 != b.q0) return a.q0 < b.q0;
    if (a.tau != b.tau) return a.tau < b.tau;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.w0_init < b.w0_init;
  });
}

void LimitSimConfig::validate() const {
  if (q0 < 1) throw Error(Error::Code::invalid_argument, "limit sim: q0 >= 1 required");
  if (grid < 100) throw Error(Error::Code::invalid_argument, "limit sim: grid >= 100 required");
  if (reps < 1000) throw Error(Error::Code::invalid_argument, "limit sim: reps >= 1000 required");
  if (taus.empty() || alphas.empty())
    throw Error(Error::Code::invalid_argument, "limit sim: need at least one tau and alpha");
  for (double t : taus)
    if (t < 0.0 || t >= 0.5)
      throw Error(Error::Code::invalid_argument, "limit sim: taus must lie in [0, 0.5)");
  for (double a : alphas)
    if (a <= 0.0 || a > 1.0)
      throw Error(Error::Code::invalid_argument, "limit sim: alphas must lie in (0, 1]");
}

BrownianPath draw_w0_path(int q, int grid, double w0_init, Rng& rng) {
  if (q < 1 || grid < 1)
    throw Error(Error::Code::invalid_argument, "draw_w0_path: q >= 1 and grid >= 1 required");
  BrownianPath path;
  path.q = q;
  path.grid = grid;
  path.values.assign(static_cast<std::size_t>(grid + 1) * q, 0.0);
  path.values[0] = w0_init;
  const double sd = 1.0 / std::sqrt(static_cast<double>(grid));
  for (int i = 1; i <= grid; ++i)
    for (int j = 0; j < q; ++j)
      path.values[static_cast<std::size_t>(i) * q + j] =
          path.values[static_cast<std::size_t>(i - 1) * q + j] + sd * rng.next_normal();
  return path;
}

SeriesMatrix build_w0star(const BrownianPath& path) {
  SeriesMatrix out(path.grid, path.q + 1);
  for (int i = 1; i <= path.grid; ++i) {
    const double w1 = path.at(i, 0);
    if (w1 >= 0.0)
      out(i - 1, 0) = w1;
    else
      out(i - 1, 1) = w1;
    for (int j = 1; j < path.q; ++j) out(i - 1, 2 + j - 1) = path.at(i, j);
  }
  return out;
}

LimitDraw lambda_limit_draw(const SeriesMatrix& path_points, double w0_init, bool split_first) {
  const int g = path_points.n;
  const int d = path_points.d;
  if (g < 2 || d < 1)
    throw Error(Error::Code::invalid_argument, "lambda_limit_draw: degenerate path");
  if (split_first && d < 2)
    throw Error(Error::Code::invalid_argument, "lambda_limit_draw: split path needs >= 2 columns");

  // occupation of the underlying first coordinate: columns 0 and 1 partition
  // it on split paths
  int plus = 0;
  for (int i = 0; i < g; ++i) {
    const double w1 = split_first ? path_points(i, 0) + path_points(i, 1) : path_points(i, 0);
    if (w1 >= 0.0) ++plus;
  }
  LimitDraw draw;
  draw.w0_init = w0_init;
  const double frac = static_cast<double>(plus) / g;
  draw.occupation_min = std::min(frac, 1.0 - frac);

  std::vector<double> mean(d, 0.0);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < d; ++j) mean[j] += path_points(i, j);
  for (double& m : mean) m /= g;

  Mat sw(d, d), sv(d, d);
  std::vector<double> cum(d, 0.0);
  std::vector<double> w(d), v(d);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < d; ++j) {
      w[j] = path_points(i, j) - mean[j];
      cum[j] += w[j];
      v[j] = cum[j] / g;
    }
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        sw(a, b) += w[a] * w[b];
        sv(a, b) += v[a] * v[b];
      }
  }
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      sw(a, b) /= g;
      sv(a, b) /= g;
      sw(b, a) = sw(a, b);
      sv(b, a) = sv(a, b);
    }

  try {
    const PencilResult pencil = gen_eig_pencil(sw, sv);
    double sum = 0.0;
    for (double lam : pencil.eigenvalues) sum += lam;
    draw.lambda_value = sum;
  } catch (const Error& e) {
    if (e.code() == Error::Code::not_positive_definite)
      throw Error(Error::Code::singular_limit,
                  "lambda_limit_draw: cumulated moment matrix not positive definite");
    throw;
  }
  return draw;
}

LimitDraw mb_limit_draw(int q0, int grid, double w0_init, Rng& rng) {
  const BrownianPath path = draw_w0_path(q0, grid, w0_init, rng);
  return lambda_limit_draw(build_w0star(path), w0_init);
}

LimitDraw sb_limit_draw(int q0, int grid, Rng& rng) {
  const BrownianPath path = draw_w0_path(q0, grid, 0.0, rng);
  SeriesMatrix points(grid, q0);
  for (int i = 1; i <= grid; ++i)
    for (int j = 0; j < q0; ++j) points(i - 1, j) = path.at(i, j);
  return lambda_limit_draw(points, 0.0, /*split_first=*/false);
}

CritValTable make_table(const LimitSimConfig& cfg) {
  cfg.validate();
  const long reps = cfg.reps;
  std::vector<double> lambdas(reps, 0.0);
  std::vector<double> occ(reps, 0.0);
  std::vector<char> singular(reps, 0);

  parallel_for(static_cast<std::size_t>(reps), cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    try {
      const LimitDraw draw = cfg.variant == Variant::mb
                                 ? mb_limit_draw(cfg.q0, cfg.grid, cfg.w0_init, rng)
                                 : sb_limit_draw(cfg.q0, cfg.grid, rng);
      lambdas[i] = draw.lambda_value;
      occ[i] = draw.occupation_min;
    } catch (const Error& e) {
      if (e.code() != Error::Code::singular_limit) throw;
      singular[i] = 1;
    }
  });

  std::vector<double> taus = cfg.taus;
  std::vector<double> alphas = cfg.alphas;
  std::sort(taus.begin(), taus.end());
  std::sort(alphas.begin(), alphas.end());

  CritValTable table;
  for (double tau : taus) {
    std::vector<double> accepted;
    accepted.reserve(reps);
    for (long i = 0; i < reps; ++i)
      if (!singular[i] && occ[i] >= tau) accepted.push_back(lambdas[i]);
    if (static_cast<long>(accepted.size()) < 1000)
      throw Error(Error::Code::insufficient_accepted_draws,
                  "make_table: only " + std::to_string(accepted.size()) +
                      " accepted draws at tau = " + std::to_string(tau) +
                      "; raise the draw budget");
    std::sort(accepted.begin(), accepted.end());
    const long m = static_cast<long>(accepted.size());
    for (double alpha : alphas) {
      // order statistic at ceil((1 - alpha) m), 1-indexed; no interpolation
      long idx = static_cast<long>(std::ceil((1.0 - alpha) * m - 1e-12));
      idx = std::clamp(idx, 1L, m);
      CritValRow row;
      row.variant = cfg.variant;
      row.q0 = cfg.q0;
      row.tau = tau;
      row.alpha = alpha;
      row.w0_init = cfg.w0_init;
      row.crit_value = accepted[idx - 1];
      row.accepted_draws = m;
      row.total_draws = reps;
      row.grid = cfg.grid;
      row.seed = cfg.seed;
      table.rows.push_back(row);
    }
  }
  table.sort_rows();
  return table;
}

}  // namespace cksvar

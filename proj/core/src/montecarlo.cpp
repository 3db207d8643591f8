#include "cksvar/montecarlo.hpp"

#include <cmath>

#include "cksvar/error.hpp"
#include "cksvar/parallel.hpp"
#include "cksvar/pencil.hpp"

namespace cksvar {

void McConfig::validate() const {
  if (reps < 1) throw Error(Error::Code::invalid_argument, "mc: reps >= 1 required");
  if (retention_threshold < 0.0 || retention_threshold >= 0.5)
    throw Error(Error::Code::invalid_argument, "mc: retention threshold must lie in [0, 0.5)");
  if (sample_sizes.empty())
    throw Error(Error::Code::invalid_argument, "mc: need at least one sample size");
  for (int n : sample_sizes)
    if (n < 10) throw Error(Error::Code::invalid_argument, "mc: sample sizes must be >= 10");
  if (max_redraws_per_rep < 0)
    throw Error(Error::Code::invalid_argument, "mc: max_redraws_per_rep >= 0 required");
}

std::uint64_t replication_seed(std::uint64_t base_seed, McDesign design, int n, int rep) {
  std::uint64_t s = derive_seed(base_seed, design == McDesign::linear ? 0 : 1);
  s = derive_seed(s, static_cast<std::uint64_t>(n));
  return derive_seed(s, static_cast<std::uint64_t>(rep));
}

RetainedDraw draw_retained_path(const CksvarParams& params, std::uint64_t base_seed,
                                McDesign design, int n, int rep, double retention_threshold,
                                int max_redraws_per_rep) {
  const std::uint64_t rep_seed = replication_seed(base_seed, design, n, rep);
  for (int attempt = 0; attempt <= max_redraws_per_rep; ++attempt) {
    Rng rng(attempt == 0 ? rep_seed : derive_seed(rep_seed, static_cast<std::uint64_t>(attempt)));
    SimulatedPath sim = simulate_path(params, n, {}, rng);
    if (retained(occupation(sim.path.column(0)), retention_threshold))
      return {std::move(sim.path), attempt};
  }
  throw Error(Error::Code::retention_exhausted,
              "mc: retention filter rejected " + std::to_string(max_redraws_per_rep + 1) +
                  " consecutive draws (design " + design_name(design) + ", n = " +
                  std::to_string(n) + ", rep " + std::to_string(rep) + ")");
}

namespace {

struct CellCrit {
  int q0;
  Variant variant;
  double crit;
};

// rejection indicators for all requested cells on one path, via one pencil
// per variant dimension
void decide_path(const SeriesMatrix& path, const std::vector<CellCrit>& cells,
                 std::vector<char>& out) {
  std::vector<double> ev_mb, ev_sb;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    const std::vector<double>* ev;
    if (cell.variant == Variant::mb) {
      if (ev_mb.empty()) ev_mb = series_pencil_eigenvalues(build_zstar(path));
      ev = &ev_mb;
    } else {
      if (ev_sb.empty()) ev_sb = series_pencil_eigenvalues(path);
      ev = &ev_sb;
    }
    const int take = cell.variant == Variant::mb ? cell.q0 + 1 : cell.q0;
    double stat = 0.0;
    for (int i = 0; i < take; ++i) stat += (*ev)[i];
    out[c] = stat > cell.crit ? 1 : 0;
  }
}

std::vector<McCell> run_cells(const McConfig& cfg, McDesign design, int n,
                              const std::vector<CellCrit>& cells) {
  const CksvarParams params = mc_design(design).params;
  const int reps = cfg.reps;
  std::vector<char> rejections(static_cast<std::size_t>(reps) * cells.size(), 0);
  std::vector<int> discards(reps, 0);

  parallel_for(static_cast<std::size_t>(reps), cfg.threads, [&](std::size_t rep) {
    const RetainedDraw draw =
        draw_retained_path(params, cfg.base_seed, design, n, static_cast<int>(rep),
                           cfg.retention_threshold, cfg.max_redraws_per_rep);
    discards[rep] = draw.discards;
    std::vector<char> row(cells.size(), 0);
    decide_path(draw.path, cells, row);
    for (std::size_t c = 0; c < cells.size(); ++c)
      rejections[rep * cells.size() + c] = row[c];
  });

  double mean_discards = 0.0;
  for (int d : discards) mean_discards += d;
  mean_discards /= reps;

  std::vector<McCell> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    long count = 0;
    for (int rep = 0; rep < reps; ++rep) count += rejections[static_cast<std::size_t>(rep) * cells.size() + c];
    McCell cell;
    cell.design = design;
    cell.n = n;
    cell.q0 = cells[c].q0;
    cell.variant = cells[c].variant;
    cell.rejection_rate = static_cast<double>(count) / reps;
    cell.reps_used = reps;
    cell.mean_discards_per_rep = mean_discards;
    out.push_back(cell);
  }
  return out;
}

double cell_critical_value(const McConfig& cfg, int q0, Variant variant) {
  // SB decisions use the unconditional (tau = 0) rows; MB uses cfg.tau
  const CritValTable& table = variant == Variant::mb ? cfg.crit_mb : cfg.crit_sb;
  const double tau = variant == Variant::mb ? cfg.tau : 0.0;
  return lookup_critical_value(table, variant, q0, tau, cfg.alpha, 0.0);
}

}  // namespace

McCell run_cell(const McConfig& cfg, int n, int q0, Variant variant) {
  cfg.validate();
  const std::vector<CellCrit> cells{{q0, variant, cell_critical_value(cfg, q0, variant)}};
  return run_cells(cfg, cfg.design, n, cells)[0];
}

std::vector<McCell> run_table(const McConfig& cfg) {
  cfg.validate();
  std::vector<CellCrit> cells;
  for (int q0 : {1, 2})
    for (Variant variant : {Variant::sb, Variant::mb})
      cells.push_back({q0, variant, cell_critical_value(cfg, q0, variant)});

  std::vector<McCell> out;
  for (McDesign design : {McDesign::linear, McDesign::nonlinear})
    for (int n : cfg.sample_sizes)
      for (McCell& cell : run_cells(cfg, design, n, cells)) out.push_back(cell);
  return out;
}

LlnReport verify_lln(McDesign design, int n, std::uint64_t seed) {
  if (n < 10000)
    throw Error(Error::Code::invalid_argument, "verify_lln: n >= 10^4 required");
  const DesignSpec design_spec = mc_design(design);
  Rng rng(seed);
  const SimulatedPath sim = simulate_path(design_spec.params, n, {}, rng);
  const SeriesMatrix zstar = build_zstar(sim.path);
  const Mat& beta_star = design_spec.beta_star;  // (p+1) x r
  const int r = beta_star.cols;

  LlnReport report;
  // mean forced by the intercept: c = -alpha mu  =>  mu = -(a'a)^-1 a'c
  const Mat alpha = design_spec.coint.alpha;
  const Mat mu = -1.0 * (inverse(transpose(alpha) * alpha) *
                         (transpose(alpha) * design_spec.params.c));
  report.mu_target = mu(0, 0);

  SeriesMatrix xi(sim.path.n, r);
  for (int t = 0; t < sim.path.n; ++t)
    for (int j = 0; j < r; ++j) {
      double s = 0.0;
      for (int i = 0; i < zstar.d; ++i) s += beta_star(i, j) * zstar(t, i);
      xi(t, j) = s;
    }

  double full = 0.0, plus = 0.0, minus = 0.0;
  for (int t = 0; t < xi.n; ++t) {
    full += xi(t, 0);
    if (sim.path(t, 0) >= 0.0) {
      plus += xi(t, 0);
      ++report.count_plus;
    } else {
      minus += xi(t, 0);
      ++report.count_minus;
    }
  }
  report.mean_full = full / xi.n;
  report.mean_plus = report.count_plus ? plus / report.count_plus : 0.0;
  report.mean_minus = report.count_minus ? minus / report.count_minus : 0.0;

  Mat sec_plus(r, r), sec_minus(r, r);
  for (int t = 0; t < xi.n; ++t) {
    Mat& target = sim.path(t, 0) >= 0.0 ? sec_plus : sec_minus;
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        target(a, b) += (xi(t, a) - report.mean_full) * (xi(t, b) - report.mean_full);
  }
  if (report.count_plus) sec_plus = (1.0 / report.count_plus) * sec_plus;
  if (report.count_minus) sec_minus = (1.0 / report.count_minus) * sec_minus;
  report.second_moment_plus = sec_plus;
  report.second_moment_minus = sec_minus;
  report.min_eig_plus = report.count_plus ? sym_eig(sec_plus).values.front() : 0.0;
  report.min_eig_minus = report.count_minus ? sym_eig(sec_minus).values.front() : 0.0;
  return report;
}

}  // namespace cksvar

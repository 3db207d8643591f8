#pragma once

#include <string>
#include <vector>

#include "cksvar/limitdist_types.hpp"
#include "cksvar/montecarlo.hpp"
#include "cksvar/ranktest.hpp"
#include "cksvar/series.hpp"

namespace cksvar {

/// 17 significant digits, enough to round-trip any double.
std::string format_full(double v);
/// Shortest representation that still round-trips.
std::string format_short(double v);

/// Path files: header `y,x1,...`, one row per observation, 17 significant
/// digits.
std::string series_to_csv(const SeriesMatrix& m);
SeriesMatrix series_from_csv(const std::string& text);
void write_series_csv(const std::string& path, const SeriesMatrix& m);
SeriesMatrix read_series_csv(const std::string& path);

/// Critical-value tables: header
/// `variant,q0,tau,alpha,w0_init,crit,accepted,total,grid,seed`,
/// rows ordered by (variant, q0, tau, alpha, w0).
std::string critval_table_to_csv(const CritValTable& table);
CritValTable critval_table_from_csv(const std::string& text);
void write_critval_csv(const std::string& path, const CritValTable& table);
CritValTable read_critval_csv(const std::string& path);

/// Single-row machine output for a test outcome:
/// `variant,q0,lambda,crit,alpha,tau,frac_plus,reject`.
std::string test_outcome_csv_header();
std::string test_outcome_csv_row(const TestOutcome& outcome);

/// Study output: `design,n,q0,variant,rejection_rate,reps,mean_discards`.
std::string mc_cells_to_csv(const std::vector<McCell>& cells);
void write_mc_csv(const std::string& path, const std::vector<McCell>& cells);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cksvar

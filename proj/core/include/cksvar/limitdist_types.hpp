#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cksvar {

enum class Variant { mb, sb };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct CritValRow {
  Variant variant = Variant::mb;
  int q0 = 0;
  double tau = 0.0;
  double alpha = 0.0;
  double w0_init = 0.0;
  double crit_value = 0.0;
  long accepted_draws = 0;
  long total_draws = 0;
  int grid = 0;
  std::uint64_t seed = 0;
};

struct CritValTable {
  std::vector<CritValRow> rows;

  void append(const CritValTable& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  }
  /// Canonical row order: variant, q0, tau, alpha, w0 ascending.
  void sort_rows();
};

}  // namespace cksvar

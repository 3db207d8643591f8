#pragma once

#include <stdexcept>
#include <string>

namespace cksvar {

/// Library-wide error with a machine-readable code, so callers (and the CLI)
/// can map failures to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  enum class Code {
    invalid_argument,
    dimension_mismatch,
    not_positive_definite,
    no_convergence,
    coherency_violated,
    coherency_paradox,
    rank_mismatch,
    sign_condition,
    product_budget_exceeded,
    degenerate_data,
    singular_limit,
    missing_critical_value,
    insufficient_accepted_draws,
    empty_regime,
    too_few_observations,
    zero_lrv,
    retention_exhausted,
    io_error,
    parse_error,
  };

  Error(Code code, const std::string& msg) : std::runtime_error(msg), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

}  // namespace cksvar

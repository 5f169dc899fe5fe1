#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spinchain::app {

struct OracleCheck {
  std::string name;
  double error;
  double tolerance;
  bool passed() const noexcept { return error < tolerance; }
};

/// Built-in analytic and cross-solver checks. `corrupt_free_hamiltonian` flips the sign of
/// H0(0,0) in every model first; the closed-form checks must then fail.
std::vector<OracleCheck> run_oracle_suite(bool corrupt_free_hamiltonian = false);

/// Prints the pass/fail table. Returns 0 when every check passes, 1 otherwise.
int cmd_verify(std::ostream& report, bool corrupt_free_hamiltonian = false);

}  // namespace spinchain::app

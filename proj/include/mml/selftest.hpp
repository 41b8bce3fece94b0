#pragma once

#include <string>
#include <vector>

namespace mml {

struct SelfCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;  // pass when residual > tolerance instead of <=
  bool pass = false;
  std::string detail;
};

/// Small-system oracle-equivalence checks: free-fermion vs dense evolution,
/// RK4 vs the infinite-temperature closed form, parity conservation and its
/// violation by an injected fermionic jump, logical Pauli algebra.
std::vector<SelfCheck> run_selftest();

std::string format_selftest(const std::vector<SelfCheck>& checks);

}  // namespace mml

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kkscatter {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitConvergenceError = 3;

/// Entry point of the kkscatter tool. Tables go to `out` unless an output
/// path is configured, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast structural invariants (unimodularity, slab symmetry and Airy
/// agreement, passivity, coherent conditions, mirror swap, SIMD agreement).
std::vector<SelftestCheck> run_selftest();

}  // namespace kkscatter

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xxz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Entry point behind xxz_sim; testable with string streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Fast invariant checks: sign conventions, conservation, equilibrium model,
// gap law, effective-Ising shift, fitting.
std::vector<SelftestLine> run_selftest();

}  // namespace xxz::cli

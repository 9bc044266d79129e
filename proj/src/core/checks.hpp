// Built-in verification battery behind the `check` command: fast versions of
// the invariants the library is designed around.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spdml {

struct CheckResult {
  std::string name;
  double measured;
  double threshold;
  bool pass;
};

// Runs every check with data drawn from the seed. Never throws for a mere
// failed check; failures come back with pass == false.
std::vector<CheckResult> run_verification_suite(std::uint64_t seed);

}  // namespace spdml

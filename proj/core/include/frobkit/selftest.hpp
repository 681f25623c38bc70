#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace frobkit {

struct PropertyResult {
  std::string name;
  int draws = 0;
  double worst = 0.0;  // largest residual over the draws
  double tolerance = 0.0;
  bool pass = false;
};

/// Random-ensemble identities of the exterior algebra and the differential
/// operators, seeded and single-threaded.
std::vector<PropertyResult> run_selftest(std::uint64_t seed = 42);

}  // namespace frobkit

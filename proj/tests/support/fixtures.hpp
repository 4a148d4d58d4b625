#pragma once

// Single definition of every regenerable fixture: the regeneration tool
// writes these to disk and the integrity test compares the committed files
// byte for byte. Solver solution files (.sol) are recorded separately via
// tools/solve_lp.py and validated semantically, not regenerated.

#include <string>
#include <vector>

namespace dagsched::testing::fixtures {

inline constexpr std::uint64_t kOracleSeed = 90210;
inline constexpr std::uint64_t kLpSeed = 31337;
inline constexpr std::uint64_t kFig1Seed = 4242;
inline constexpr int kOracleInstances = 40;
inline constexpr int kLpInstances = 12;  // sizes 2..7, two each

// fixtures/lp instances whose recorded integer solutions exploit simultaneous
// starts (the pairwise overlap binaries cannot see a three-way tie), yielding
// model-feasible assignments whose start times overpack the capacity. Kept as
// a pinned demonstration of that formulation property.
inline const std::vector<int> kTieEvasionInstances = {11};

// (relative path, content) for every regenerable fixture file.
std::vector<std::pair<std::string, std::string>> generate_all();

}  // namespace dagsched::testing::fixtures

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lsqmc/lscore.hpp"
#include "lsqmc/multidim.hpp"

namespace lsqmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitHits = 1;  // certificate falsified or sweep mismatch
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitInternal = 70;

/// Resource caps; read from a key=value file, then LSQMC_MAX_PARTITION, then
/// flags.
struct Limits {
  std::uint64_t max_partition = kDefaultPartitionCap;
  std::size_t exact_2d_cap = 4096;
  std::uint64_t max_count = 10'000'000;
  unsigned threads = 1;
};

/// Applies "key = value" lines ('#' starts a comment) on top of `limits`.
/// Keys: max_partition, exact_2d_cap, max_count, threads.
void apply_config(std::istream& in, Limits& limits);

/// "L,S"
LSParams parse_params(std::string_view text);
/// "L1,S1;L2,S2;..."; errors name the offending pair.
MultiBase parse_base(std::string_view text);

/// Runs one command line and returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lsqmc::cli

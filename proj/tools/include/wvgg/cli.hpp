#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wvgg::cli {

enum ExitCode : int { kOk = 0, kInvalidConfig = 1, kNumericFailure = 2 };

struct RunConfig {
  std::string command;
  std::string config_file;
  std::string out_prefix;  // empty: results go to stdout only
  std::optional<std::uint64_t> seed;
};

// Parses argv and dispatches. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Dispatch on an already parsed configuration.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct LemmaCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};
// Invariant suites over matrix_core and special_fn; draws use the given seed.
std::vector<LemmaCheck> lemma_suites(std::uint64_t seed, int draws = 1000);

}  // namespace wvgg::cli

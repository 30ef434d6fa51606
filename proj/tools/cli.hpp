#ifndef FASTIDS_TOOLS_CLI_HPP
#define FASTIDS_TOOLS_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fastids/alm.hpp"
#include "fastids/bench.hpp"

namespace fastids::cli {

enum ExitCode { kOk = 0, kInputError = 2, kRuntimeError = 3 };

/// Everything a config file can set. See README for the key list.
struct RunConfig {
  AlmConfig alm;
  std::string dataset = "f2";  // generator name or CSV path
  std::size_t train_size = 1000;
  std::size_t test_size = 1000;
  std::vector<Backend> backends{Backend::kFast};
  int runs = 1;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  /// Shared by every input when set; otherwise the dataset's own domains.
  std::optional<Domain> input_domain;
  SpiralParams spiral;
  RingParams ring;
};

/// Flat `key = value` lines; `#` starts a comment. Unknown keys are errors.
RunConfig parse_run_config(std::istream& in, const std::string& origin);
RunConfig load_run_config(const std::filesystem::path& path);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fastids::cli

#endif  // FASTIDS_TOOLS_CLI_HPP

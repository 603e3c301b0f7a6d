#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "onc/config.hpp"

namespace onc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "ONC_OUTPUT_DIR";

/// Runs one command line (args exclude the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct PresetEntry {
  std::string label;     // file stem, e.g. "n8_snct10"
  std::string scenario;  // sweep value, e.g. "n8" or "case2"
  SimConfig config;
};

inline constexpr std::uint64_t kPresetRuns = 100;

/// Expands fig3, fig4 or fig5. Throws ConfigError for unknown names.
std::vector<PresetEntry> preset_expand(std::string_view name, std::uint64_t seed = 1,
                                       std::uint64_t runs = kPresetRuns);

std::filesystem::path default_output_dir();

}  // namespace onc::cli

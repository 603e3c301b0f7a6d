#include <array>

#include "onc/errors.hpp"
#include "onc_cli/cli.hpp"

namespace onc::cli {

namespace {

SimConfig base_config(std::size_t n, std::vector<double> eps, std::uint64_t seed, std::uint64_t runs) {
  SimConfig c;
  c.n_receivers = n;
  c.epsilons = std::move(eps);
  c.m_packets = 100;
  c.seed = seed;
  c.runs = runs;
  return c;
}

// One entry per base algorithm (anc, snc) for the given threshold.
void add_pair(std::vector<PresetEntry>& out, const std::string& scenario, const SimConfig& base,
              std::optional<std::uint32_t> threshold) {
  for (const char* name : {"anc", "snc"}) {
    PresetEntry e{"", scenario, base};
    e.config.threshold = threshold;
    e.config.algorithm = resolve_algorithm(name, threshold);
    e.label = to_string(e.config.algorithm) + (threshold ? std::to_string(*threshold) : "");
    if (!scenario.empty()) e.label = scenario + "_" + e.label;
    out.push_back(std::move(e));
  }
}

}  // namespace

std::vector<PresetEntry> preset_expand(std::string_view name, std::uint64_t seed, std::uint64_t runs) {
  std::vector<PresetEntry> out;
  const std::array<std::optional<std::uint32_t>, 2> none_and_10{std::nullopt, 10u};

  if (name == "fig3") {
    const auto base = base_config(8, std::vector<double>(8, 0.25), seed, runs);
    for (std::optional<std::uint32_t> thr : {std::optional<std::uint32_t>{}, std::optional<std::uint32_t>{40},
                                             std::optional<std::uint32_t>{20}, std::optional<std::uint32_t>{10},
                                             std::optional<std::uint32_t>{5}, std::optional<std::uint32_t>{2}}) {
      add_pair(out, "", base, thr);
    }
  } else if (name == "fig4") {
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
      const auto base = base_config(n, std::vector<double>(n, 0.25), seed, runs);
      for (auto thr : none_and_10) add_pair(out, "n" + std::to_string(n), base, thr);
    }
  } else if (name == "fig5") {
    std::vector<double> case1(7, 0.25);
    case1.push_back(0.15);
    const std::array<std::vector<double>, 4> cases{case1,
                                                    std::vector<double>{0.25, 0.25, 0.2, 0.2, 0.15, 0.15, 0.1, 0.1},
                                                    std::vector<double>(8, 0.25), std::vector<double>(8, 0.1)};
    for (std::size_t k = 0; k < cases.size(); ++k) {
      const auto base = base_config(8, cases[k], seed, runs);
      for (auto thr : none_and_10) add_pair(out, "case" + std::to_string(k + 1), base, thr);
    }
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig3, fig4 or fig5)");
  }
  return out;
}

}  // namespace onc::cli

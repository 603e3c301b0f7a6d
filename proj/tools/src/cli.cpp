#include "onc_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "onc/chain_pmf.hpp"
#include "onc/errors.hpp"
#include "onc/metrics.hpp"
#include "onc/random_walk.hpp"
#include "onc/simulator.hpp"
#include "onc/trace.hpp"
#include "output.hpp"

namespace onc::cli {

namespace fs = std::filesystem;

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string token = text.substr(start, end - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ConfigError("not a number: '" + token + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string cdf_csv(const std::vector<double>& cdf, const char* key) {
  std::string out = std::string(key) + ",cumulative_probability\n";
  for (std::size_t d = 0; d < cdf.size(); ++d) out += std::to_string(d) + "," + format_double(cdf[d]) + "\n";
  return out;
}

std::string pmf_csv(const std::vector<double>& mass, std::size_t first, std::size_t last) {
  std::string out = "value,probability_mass\n";
  for (std::size_t v = first; v <= last; ++v) {
    out += std::to_string(v) + "," + format_double(v < mass.size() ? mass[v] : 0.0) + "\n";
  }
  return out;
}

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
  std::string config_path, dump_config, out, delays_csv;
  std::string algorithm = "anc", threshold = "none", epsilons = "0.25", feedback = "perfect", policy = "optimistic";
  std::size_t receivers = 2, packets = 100;
  std::uint32_t delta = 0, fb_delay = 0;
  int field_bits = 0;
  bool no_deferral = false, discard_expired = false;
  double fb_loss = 0.0, policy_q = 0.5;
  std::uint64_t seed = 1, runs = 1, max_slots = 0;
  unsigned threads = 0;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const { return opts.at(name)->count() > 0; }
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  auto& o = a.opts;
  o["config"] = app.add_option("--config", a.config_path, "JSON config; flags given explicitly override it");
  o["algorithm"] = app.add_option("--algorithm", a.algorithm, "anc | snc | anct | snct")
                       ->check(CLI::IsMember({"anc", "snc", "anct", "snct"}));
  o["receivers"] = app.add_option("--receivers", a.receivers, "number of receivers")->check(CLI::PositiveNumber);
  o["epsilons"] = app.add_option("--epsilons", a.epsilons, "erasure probability, or comma list of one per receiver");
  o["packets"] = app.add_option("--packets", a.packets, "packets per run")->check(CLI::PositiveNumber);
  o["threshold"] = app.add_option("--threshold", a.threshold, "delay threshold in slots, or 'none'");
  o["delta"] = app.add_option("--delta", a.delta, "danger margin in slots");
  o["field_bits"] = app.add_option("--field-bits", a.field_bits, "GF(2^m) exponent, 0 = automatic")
                        ->check(CLI::Range(0, 16));
  o["no_deferral"] = app.add_flag("--no-deferral", a.no_deferral, "disable request deferral");
  o["discard_expired"] = app.add_flag("--discard-expired", a.discard_expired, "drop packets past their deadline");
  o["feedback"] = app.add_option("--feedback", a.feedback, "perfect | lossy")
                      ->check(CLI::IsMember({"perfect", "lossy"}));
  o["fb_loss"] = app.add_option("--fb-loss", a.fb_loss, "feedback loss probability");
  o["fb_delay"] = app.add_option("--fb-delay", a.fb_delay, "feedback delay in slots");
  o["policy"] = app.add_option("--policy", a.policy, "optimistic | pessimistic | random | ignore")
                    ->check(CLI::IsMember({"optimistic", "pessimistic", "random", "ignore"}));
  o["policy_q"] = app.add_option("--policy-q", a.policy_q, "assumed reception probability for --policy random");
  o["seed"] = app.add_option("--seed", a.seed, "base seed");
  o["runs"] = app.add_option("--runs", a.runs, "independent runs")->check(CLI::PositiveNumber);
  o["max_slots"] = app.add_option("--max-slots", a.max_slots, "per-run slot guard, 0 = 200 x packets");
  app.add_option("--threads", a.threads, "worker threads, 0 = hardware count");
  app.add_option("--out", a.out, "report path (default <output dir>/report.json)");
  app.add_option("--delays-csv", a.delays_csv, "per-packet delay dump");
  app.add_option("--dump-config", a.dump_config, "write the resolved config as JSON");
}

SimConfig resolve_simulate(const SimulateArgs& a) {
  SimConfig c = a.config_path.empty() ? SimConfig{} : config_from_json(read_file(a.config_path));
  if (a.given("receivers")) c.n_receivers = a.receivers;
  if (a.given("epsilons")) {
    c.epsilons = expand_epsilons(parse_double_list(a.epsilons), c.n_receivers);
  } else if (c.epsilons.size() != c.n_receivers && !c.epsilons.empty() &&
             std::all_of(c.epsilons.begin(), c.epsilons.end(), [&](double e) { return e == c.epsilons.front(); })) {
    c.epsilons.assign(c.n_receivers, c.epsilons.front());
  }
  if (a.given("packets")) c.m_packets = a.packets;
  if (a.given("threshold")) c.threshold = parse_threshold(a.threshold);
  if (a.given("algorithm") || a.given("threshold")) {
    const std::string base = a.given("algorithm") ? a.algorithm : is_systematic(c.algorithm) ? "snc" : "anc";
    c.algorithm = resolve_algorithm(base, c.threshold);
  }
  if (a.given("delta")) c.delta = a.delta;
  if (a.given("field_bits")) c.field_bits = a.field_bits;
  if (a.given("no_deferral")) c.deferral = false;
  if (a.given("discard_expired")) c.discard_expired = true;
  if (a.given("feedback")) c.feedback.kind = parse_feedback_kind(a.feedback);
  if (a.given("fb_loss")) c.feedback.fb_loss = a.fb_loss;
  if (a.given("fb_delay")) c.feedback.fb_delay = a.fb_delay;
  if (a.given("policy")) c.feedback.policy = parse_policy(a.policy);
  if (a.given("policy_q")) c.feedback.random_q = a.policy_q;
  if (a.given("seed")) c.seed = a.seed;
  if (a.given("runs")) c.runs = a.runs;
  if (a.given("max_slots")) c.max_slots = a.max_slots;
  if (!a.delays_csv.empty()) c.keep_records = true;
  c.validate();
  return c;
}

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const SimConfig config = resolve_simulate(a);
  if (!a.dump_config.empty()) write_file(a.dump_config, config_to_json(config));
  const auto batch = run_batch(config, a.threads);
  const fs::path report_path = a.out.empty() ? default_output_dir() / "report.json" : fs::path(a.out);
  write_file(report_path, report_to_json(batch.report, &config));
  if (!a.delays_csv.empty()) {
    Json meta = base_metadata(config.seed);
    meta["runs"] = config.runs;
    meta["epsilons"] = config.epsilons;
    meta["horizon"] = config.effective_max_slots();
    meta["algorithm"] = to_string(config.algorithm);
    write_csv(a.delays_csv, delays_to_csv(batch.runs), meta);
  }
  const auto& r = batch.report;
  out << to_string(config.algorithm) << " N=" << config.n_receivers << " M=" << config.m_packets
      << " runs=" << config.runs << "\n"
      << "throughput_mean " << format_double(r.throughput_mean) << "\n"
      << "mean_delay " << format_double(r.mean_delay) << "\n"
      << "mean_max_delay " << format_double(r.mean_max_delay) << "\n"
      << "zero_delay_fraction " << format_double(r.zero_delay_fraction) << "\n"
      << "report " << report_path.string() << "\n";
}

// ---- chain-pmf ---------------------------------------------------------

struct ChainPmfArgs {
  double eps1 = 0.25, eps2 = 0.25;
  std::uint32_t tmax = 200;
  std::uint64_t mc_runs = 0, seed = 1;
  int receiver = 2;
  std::string terms = "counted", out;
};

void cmd_chain_pmf(const ChainPmfArgs& a, std::ostream& out) {
  const ChainPmfTerms terms = a.terms == "counted" ? ChainPmfTerms::kCounted : ChainPmfTerms::kSingleOrdering;
  const auto pmf = a.receiver == 2 ? chain_duration_pmf(a.eps1, a.eps2, a.tmax, terms)
                                   : chain_duration_pmf_r1(a.eps1, a.eps2, a.tmax, terms);
  const fs::path path = a.out.empty() ? default_output_dir() / "chain_pmf.csv" : fs::path(a.out);

  Json meta = base_metadata(a.seed);
  meta["epsilons"] = {a.eps1, a.eps2};
  meta["receiver"] = a.receiver;
  meta["terms"] = a.terms;
  meta["t_max"] = a.tmax;
  meta["tail_mass"] = pmf.tail();
  meta["runs"] = a.mc_runs;
  constexpr std::uint64_t kSlotCap = 1'000'000;
  meta["horizon"] = a.mc_runs ? Json(kSlotCap) : Json(nullptr);

  out << "P(1) " << format_double(pmf.at(1)) << "\n"
      << "tail_mass " << format_double(pmf.tail()) << "\n";

  if (a.mc_runs > 0) {
    Rng rng = make_rng(a.seed, 0, Stream::kAnalysis);
    const auto mc = a.receiver == 2 ? mc_chain_duration(a.eps1, a.eps2, a.mc_runs, rng, kSlotCap)
                                    : mc_chain_duration(a.eps2, a.eps1, a.mc_runs, rng, kSlotCap);
    const auto agreement = compare_pmf(pmf.dist, mc);
    meta["agreement"] = {{"bins_checked", agreement.bins_checked},
                         {"violations", agreement.violations},
                         {"violation_fraction", agreement.violation_fraction()},
                         {"max_abs_z", agreement.max_abs_z},
                         {"min_expected_count", 25},
                         {"sigmas", 3}};
    std::vector<double> empirical(a.tmax + 1, 0.0);
    for (std::uint32_t t = 1; t <= a.tmax; ++t) empirical[t] = mc.probability(t);
    auto mc_path = path;
    mc_path.replace_filename(path.stem().string() + "_mc.csv");
    Json mc_meta = meta;
    mc_meta["source"] = "monte_carlo";
    mc_meta["censored"] = mc.censored;
    write_csv(mc_path, pmf_csv(empirical, 1, a.tmax), mc_meta);

    out << "agreement bins=" << agreement.bins_checked << " violations=" << agreement.violations
        << " fraction=" << format_double(agreement.violation_fraction())
        << " max_abs_z=" << format_double(agreement.max_abs_z) << "\n";
  }
  meta["source"] = "analytic";
  write_csv(path, pmf_csv(pmf.dist.mass, 1, a.tmax), meta);
  out << "pmf " << path.string() << "\n";
}

// ---- walk --------------------------------------------------------------

struct WalkArgs {
  std::string epsilons = "0.25,0.2,0.1", out;
  std::uint64_t slots = 1000, runs = 10000, seed = 1;
  unsigned threads = 0;
};

void cmd_walk(const WalkArgs& a, std::ostream& out) {
  const auto eps = parse_double_list(a.epsilons);
  if (eps.size() < 2) throw ConfigError("walk needs at least two erasure probabilities");
  const auto cdf = rw_delay_bound_cdf(eps, a.slots, a.runs, a.seed, a.threads);
  const fs::path path = a.out.empty() ? default_output_dir() / "walk_cdf.csv" : fs::path(a.out);
  Json meta = base_metadata(a.seed);
  meta["epsilons"] = eps;
  meta["runs"] = a.runs;
  meta["horizon"] = a.slots;
  meta["t_max"] = a.slots;
  meta["tail_mass"] = cdf.cdf.empty() ? 1.0 : 1.0 - cdf.cdf.back();
  meta["samples"] = cdf.samples;
  meta["censored_samples"] = cdf.censored_samples;
  meta["censoring"] = "open excursions at the horizon contribute horizon - start";
  write_csv(path, cdf_csv(cdf.cdf, "delay"), meta);
  out << "samples " << cdf.samples << " censored " << cdf.censored_samples << "\n"
      << "cdf " << path.string() << "\n";
}

// ---- trace -------------------------------------------------------------

struct TraceArgs {
  std::string algorithm = "anc", pattern, format = "csv", out;
  int field_bits = 0;
  bool no_deferral = false;
  std::size_t packets = 0;
};

void cmd_trace(const TraceArgs& a, std::ostream& out) {
  const auto pattern = read_pattern_file(a.pattern);
  if (pattern.empty()) throw ConfigError("pattern file has no slots");
  const int bits = a.field_bits ? a.field_bits : (pattern.front().size() == 2 ? 1 : 8);
  const auto rows = golden_trace(parse_algorithm(a.algorithm), pattern, bits, !a.no_deferral, a.packets);
  const auto& field = GaloisField::of(bits);
  const std::string text = a.format == "csv" ? trace_to_csv(rows, field) : trace_to_json(rows, field);
  if (a.out.empty()) {
    out << text;
    return;
  }
  if (a.format == "csv") {
    Json meta = base_metadata(0);
    meta["seed"] = nullptr;  // replayed pattern, no randomness
    meta["pattern"] = a.pattern;
    meta["algorithm"] = a.algorithm;
    meta["field_bits"] = bits;
    meta["deferral"] = !a.no_deferral;
    meta["runs"] = 1;
    meta["horizon"] = pattern.size();
    write_csv(a.out, text, meta);
  } else {
    write_file(a.out, text);
  }
}

// ---- preset ------------------------------------------------------------

struct PresetArgs {
  std::string name, out_dir;
  std::uint64_t seed = 1, runs = kPresetRuns;
  unsigned threads = 0;
};

void cmd_preset(const PresetArgs& a, std::ostream& out) {
  const auto entries = preset_expand(a.name, a.seed, a.runs);
  const fs::path dir = (a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir)) / a.name;

  std::string summary =
      "preset,scenario,algorithm,threshold,n_receivers,epsilons,runs,packets,throughput_mean,throughput_min,"
      "throughput_max,mean_delay,mean_max_delay,max_delay,zero_delay_fraction,queue_mean,queue_max,slots_mean\n";
  Json configs = Json::array();
  for (const auto& e : entries) {
    const auto& c = e.config;
    const auto batch = run_batch(c, a.threads);
    const auto& r = batch.report;
    write_file(dir / (e.label + ".json"), report_to_json(r, &c));

    Json meta = base_metadata(c.seed);
    meta["preset"] = a.name;
    meta["label"] = e.label;
    meta["epsilons"] = c.epsilons;
    meta["runs"] = c.runs;
    meta["horizon"] = c.effective_max_slots();
    meta["t_max"] = r.delay_histogram.empty() ? 0 : r.delay_histogram.size() - 1;
    const auto cdf = r.delay_cdf();
    meta["tail_mass"] = cdf.empty() ? 0.0 : 1.0 - cdf.back();
    write_csv(dir / (e.label + "_delay_cdf.csv"), cdf_csv(cdf, "delay"), meta);

    std::string eps;
    for (double v : c.epsilons) eps += (eps.empty() ? "" : ";") + format_double(v);
    summary += a.name + "," + e.scenario + "," + to_string(c.algorithm) + "," +
               (c.threshold ? std::to_string(*c.threshold) : "") + "," + std::to_string(c.n_receivers) + "," + eps +
               "," + std::to_string(c.runs) + "," + std::to_string(c.m_packets) + "," +
               format_double(r.throughput_mean) + "," + format_double(r.throughput_min) + "," +
               format_double(r.throughput_max) + "," + format_double(r.mean_delay) + "," +
               format_double(r.mean_max_delay) + "," + std::to_string(r.max_delay) + "," +
               format_double(r.zero_delay_fraction) + "," + format_double(r.queue_mean) + "," +
               std::to_string(r.queue_max) + "," + format_double(r.slots_mean) + "\n";
    configs.push_back(e.label);
    out << e.label << " throughput " << format_double(r.throughput_mean) << " mean_max_delay "
        << format_double(r.mean_max_delay) << "\n";
  }
  Json meta = base_metadata(a.seed);
  meta["preset"] = a.name;
  meta["runs"] = a.runs;
  meta["horizon"] = entries.empty() ? 0 : entries.front().config.effective_max_slots();
  meta["entries"] = configs;
  write_csv(dir / "summary.csv", summary, meta);
  out << "summary " << (dir / "summary.csv").string() << "\n";
}

int guarded(const std::function<void()>& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const std::invalid_argument& e) {  // includes ConfigError
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

fs::path default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? fs::path(env) : fs::path(".");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online network coding simulator", "onc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a seeded batch and write a JSON metrics report");
  add_simulate(*simulate, sim);

  ChainPmfArgs pmf;
  auto* chain = app.add_subcommand("chain-pmf", "chain-duration PMF, optionally checked against Monte Carlo");
  chain->add_option("--eps1", pmf.eps1, "erasure probability of receiver 1");
  chain->add_option("--eps2", pmf.eps2, "erasure probability of receiver 2");
  chain->add_option("--tmax", pmf.tmax, "largest duration tabulated")->check(CLI::PositiveNumber);
  chain->add_option("--mc-runs", pmf.mc_runs, "Monte Carlo trials, 0 = none");
  chain->add_option("--seed", pmf.seed, "base seed");
  chain->add_option("--receiver", pmf.receiver, "receiver whose chain is tabulated (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  chain->add_option("--terms", pmf.terms, "counted | single-ordering")
      ->check(CLI::IsMember({"counted", "single-ordering"}));
  chain->add_option("--out", pmf.out, "PMF CSV path");

  WalkArgs walk;
  auto* walk_cmd = app.add_subcommand("walk", "random-walk delay-bound CDF for receiver 1");
  walk_cmd->add_option("--epsilons", walk.epsilons, "comma list, one per receiver");
  walk_cmd->add_option("--slots", walk.slots, "slots per run")->check(CLI::PositiveNumber);
  walk_cmd->add_option("--runs", walk.runs, "runs")->check(CLI::PositiveNumber);
  walk_cmd->add_option("--seed", walk.seed, "base seed");
  walk_cmd->add_option("--threads", walk.threads, "worker threads, 0 = hardware count");
  walk_cmd->add_option("--out", walk.out, "CDF CSV path");

  TraceArgs trace;
  auto* trace_cmd = app.add_subcommand("trace", "replay an erasure pattern and print the per-slot trace");
  trace_cmd->add_option("--algorithm", trace.algorithm, "anc | snc")->check(CLI::IsMember({"anc", "snc"}));
  trace_cmd->add_option("--pattern", trace.pattern, "pattern file")->required();
  trace_cmd->add_option("--field-bits", trace.field_bits, "GF(2^m) exponent, 0 = automatic")
      ->check(CLI::Range(0, 16));
  trace_cmd->add_flag("--no-deferral", trace.no_deferral, "disable request deferral");
  trace_cmd->add_option("--packets", trace.packets, "packets, 0 = pattern length");
  trace_cmd->add_option("--format", trace.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  trace_cmd->add_option("--out", trace.out, "output path (default stdout)");

  PresetArgs preset;
  auto* preset_cmd = app.add_subcommand("preset", "named experiment sweep (fig3, fig4, fig5)");
  preset_cmd->add_option("name", preset.name, "preset name")->required();
  preset_cmd->add_option("--seed", preset.seed, "base seed");
  preset_cmd->add_option("--runs", preset.runs, "runs per configuration")->check(CLI::PositiveNumber);
  preset_cmd->add_option("--out-dir", preset.out_dir, "output directory");
  preset_cmd->add_option("--threads", preset.threads, "worker threads, 0 = hardware count");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (simulate->parsed()) return guarded([&] { cmd_simulate(sim, out); }, err);
  if (chain->parsed()) return guarded([&] { cmd_chain_pmf(pmf, out); }, err);
  if (walk_cmd->parsed()) return guarded([&] { cmd_walk(walk, out); }, err);
  if (trace_cmd->parsed()) return guarded([&] { cmd_trace(trace, out); }, err);
  if (preset_cmd->parsed()) return guarded([&] { cmd_preset(preset, out); }, err);
  return kExitUsage;
}

}  // namespace onc::cli

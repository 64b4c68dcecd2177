// wiser: generate channel traces, run scheduling episodes against baseline
// policies or a language-model gateway, and report the evaluation metrics.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wiser/channel.hpp"
#include "wiser/config_io.hpp"
#include "wiser/episode.hpp"
#include "wiser/metrics.hpp"
#include "wiser/phy.hpp"

namespace fs = std::filesystem;
using namespace wiser;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitGateway = 4;
constexpr int kExitValidation = 5;

struct GenArgs {
  std::string config_file;
  WlanConfig config;
  int episodes = 1;
  std::uint64_t master_seed = 1;
  std::string out_dir = "traces";
  bool export_text = false;
  bool force = false;
};

struct RunArgs {
  std::string trace_path;
  std::string policy = "greedy";
  std::string template_id = "pt1";
  std::string strategy = "ratemax";
  std::string template_dir;
  std::string mcs_table_file;
  std::string out_dir = "run";
  std::string endpoint;
  std::string model;
  std::string mock;
  double timeout_s = 60.0;
  int retries = 1;
  int max_in_flight = 4;
  bool revocation_feedback = false;
  bool force = false;
};

void ensure_writable(const fs::path& file, bool force) {
  if (fs::exists(file) && !force)
    throw IoError(file.string() + " exists; pass --force to overwrite");
}

std::string episode_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "episode_%04d.json", index);
  return buf;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& extension) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == extension)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<ChannelRealization> load_traces(const fs::path& path) {
  std::vector<ChannelRealization> traces;
  if (fs::is_directory(path)) {
    for (const fs::path& file : sorted_files(path, ".wtr")) traces.push_back(read_trace(file));
  } else if (fs::exists(path)) {
    traces.push_back(read_trace(path));
  }
  if (traces.empty()) throw IoError("no channel traces found at " + path.string());
  return traces;
}

std::vector<EpisodeRecord> load_run(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a run directory: " + dir.string());
  std::vector<EpisodeRecord> records;
  for (const fs::path& file : sorted_files(dir, ".json"))
    if (file.filename().string().rfind("episode_", 0) == 0)
      records.push_back(read_record(file));
  if (records.empty()) throw IoError("no episode records under " + dir.string());
  return records;
}

int cmd_gen_channels(const GenArgs& args, const CLI::App& cmd) {
  WlanConfig config = args.config;
  if (!args.config_file.empty()) {
    // file supplies the base, explicit flags win
    const WlanConfig base = load_wlan_config(args.config_file);
    if (!cmd.count("--stas")) config.n_stations = base.n_stations;
    if (!cmd.count("--antennas")) config.n_antennas = base.n_antennas;
    if (!cmd.count("--rus")) config.n_rus = base.n_rus;
    if (!cmd.count("--slots")) config.n_slots = base.n_slots;
    if (!cmd.count("--radius")) config.cell_radius_m = base.cell_radius_m;
    if (!cmd.count("--noise")) config.noise_power = base.noise_power;
    if (!cmd.count("--power")) config.total_power = base.total_power;
    if (!cmd.count("--ru-bandwidth")) config.ru_bandwidth_hz = base.ru_bandwidth_hz;
    if (!cmd.count("--path-loss-exponent")) config.path_loss_exponent = base.path_loss_exponent;
    if (!cmd.count("--taps")) config.n_taps = base.n_taps;
    if (!cmd.count("--delay-spread")) config.delay_spread_s = base.delay_spread_s;
  }
  config.validate();

  fs::create_directories(args.out_dir);
  for (int e = 0; e < args.episodes; ++e) {
    WlanConfig episode_config = config;
    episode_config.rng_seed = derive_seed(args.master_seed, static_cast<std::uint64_t>(e));
    char name[32];
    std::snprintf(name, sizeof(name), "ep_%04d.wtr", e);
    const fs::path file = fs::path(args.out_dir) / name;
    ensure_writable(file, args.force);
    const ChannelRealization chan = generate_channels(episode_config);
    write_trace(chan, file);
    if (args.export_text) {
      fs::path text = file;
      text.replace_extension(".json");
      ensure_writable(text, args.force);
      export_trace_text(chan, text);
    }
  }
  std::cout << "wrote " << args.episodes << " trace(s) to " << args.out_dir << " (N="
            << config.n_stations << " M=" << config.n_antennas << " R=" << config.n_rus
            << " T=" << config.n_slots << " seed=" << args.master_seed << ")\n";
  return 0;
}

int cmd_run(const RunArgs& args) {
  const PolicySpec policy = PolicySpec::parse(args.policy);

  GatewayConfig gateway;
  bool needs_gateway = policy.kind == PolicySpec::Kind::Llm;
  if (needs_gateway) {
    if (!args.endpoint.empty()) {
      gateway.backend = GatewayConfig::BackendKind::Http;
      gateway.endpoint = args.endpoint;
      gateway.model = args.model;
      if (gateway.model.empty())
        throw ConfigError("--policy llm with an endpoint also needs --model");
    } else if (!args.mock.empty()) {
      gateway.backend = GatewayConfig::BackendKind::Mock;
      gateway.mock_policy = PolicySpec::parse(args.mock);
    } else {
      throw ConfigError("--policy llm needs --endpoint/--model or --mock");
    }
    gateway.timeout_s = args.timeout_s;
    gateway.retries = args.retries;
    gateway.max_in_flight = args.max_in_flight;
  }

  EpisodeOptions options;
  options.template_id = template_id_from_string(args.template_id);
  if (args.strategy == "ratemax")
    options.strategy = StrategySpec::rate_max();
  else if (args.strategy.rfind("bcq:", 0) == 0)
    options.strategy = StrategySpec::bcq(PolicySpec::parse(args.strategy).k);
  else
    throw ConfigError("unknown strategy: " + args.strategy + " (expected ratemax or bcq:K)");
  if (!args.template_dir.empty()) options.templates = PromptTemplates::load_dir(args.template_dir);
  options.revocation_feedback = args.revocation_feedback;

  const McsTable table =
      args.mcs_table_file.empty() ? McsTable::default_table() : load_mcs_table(args.mcs_table_file);

  const std::vector<ChannelRealization> traces = load_traces(args.trace_path);

  fs::create_directories(args.out_dir);
  const fs::path results_file = fs::path(args.out_dir) / "results.csv";
  ensure_writable(results_file, args.force);

  std::ofstream response_log;
  if (needs_gateway) {
    const fs::path log_file = fs::path(args.out_dir) / "responses.jsonl";
    ensure_writable(log_file, args.force);
    response_log.open(log_file);
    options.response_log = &response_log;
  }

  const std::vector<EpisodeRecord> records = run_batch(traces, policy, table, options,
                                                       needs_gateway ? &gateway : nullptr);
  if (records.empty()) throw ValidationError("no episode completed");

  for (const EpisodeRecord& record : records) {
    const fs::path file = fs::path(args.out_dir) / episode_file_name(record.episode_index);
    ensure_writable(file, args.force);
    write_record(record, file);
  }
  write_results_csv(records, results_file);

  nlohmann::json manifest = {{"policy", policy.str()},
                             {"template", args.template_id},
                             {"strategy", args.strategy},
                             {"trace", args.trace_path},
                             {"out", args.out_dir},
                             {"episodes", records.size()},
                             {"mcs_table", args.mcs_table_file.empty() ? "builtin"
                                                                       : args.mcs_table_file}};
  if (needs_gateway)
    manifest["gateway"] = {{"backend", gateway.backend == GatewayConfig::BackendKind::Http
                                           ? "http"
                                           : "mock"},
                           {"endpoint", gateway.endpoint},
                           {"model", gateway.model},
                           {"mock_policy", gateway.mock_policy.str()},
                           {"timeout_s", gateway.timeout_s},
                           {"retries", gateway.retries},
                           {"max_in_flight", gateway.max_in_flight}};
  std::ofstream manifest_out(fs::path(args.out_dir) / "run_manifest.json");
  manifest_out << manifest.dump(2) << '\n';

  double total_rate = 0.0;
  int total_slots = 0;
  int parse_errors = 0;
  for (const EpisodeRecord& record : records)
    for (const SlotLog& slot : record.slots) {
      total_rate += slot.rate_sum;
      ++total_slots;
      for (const FeedbackStatus& status : slot.feedback)
        if (status.kind == FeedbackStatus::Kind::ParseError) ++parse_errors;
    }
  std::cout << "ran " << records.size() << " episode(s), " << total_slots << " slots; mean "
            << "rate-sum " << format_double(total_rate / total_slots / 1e6) << " Mbit/s, "
            << parse_errors << " parse error(s); results in " << args.out_dir << "\n";
  return 0;
}

int cmd_report_error(const std::string& inferred_dir, const std::string& actual_dir,
                     const std::string& out_file) {
  const auto inferred = load_run(inferred_dir);
  const auto actual = load_run(actual_dir);
  if (inferred.size() != actual.size())
    throw ValidationError("run directories hold different episode counts");

  std::vector<AssignmentMatrix> a, b;
  for (std::size_t e = 0; e < inferred.size(); ++e) {
    const auto ra = inferred[e].raw_assignments();
    const auto rb = actual[e].raw_assignments();
    a.insert(a.end(), ra.begin(), ra.end());
    b.insert(b.end(), rb.begin(), rb.end());
  }
  const ErrorReport report = assignment_error(a, b, inferred.front().config);
  if (!out_file.empty()) write_error_csv(report, out_file);
  std::cout << "assignment error: " << format_double(100.0 * report.error_rate) << "% (fp="
            << report.fp << " fn=" << report.fn << " over " << a.size() << " slots)\n";
  return 0;
}

int cmd_report_gain(const std::string& policy_dir, const std::string& baseline_dir,
                    const std::string& out_file) {
  const GainReport report = performance_gain(load_run(policy_dir), load_run(baseline_dir));
  if (!out_file.empty()) write_gain_csv(report, out_file);
  std::cout << "gain: " << format_double(report.gain_percent) << "% (policy "
            << format_double(report.policy_sum / 1e6) << " Mbit vs baseline "
            << format_double(report.baseline_sum / 1e6) << " Mbit)\n";
  return 0;
}

int cmd_report_cdf(const std::string& run_dir, const std::string& out_file) {
  const auto cdf = rate_cdf(load_run(run_dir));
  if (!out_file.empty()) write_cdf_csv(cdf, out_file);
  std::cout << "cdf over " << cdf.size() << " slots: min " << format_double(cdf.front().first)
            << ", median " << format_double(cdf[cdf.size() / 2].first) << ", max "
            << format_double(cdf.back().first) << " bit/s\n";
  return 0;
}

int cmd_report_groupsize(const std::string& run_dir, const std::string& out_file) {
  const auto records = load_run(run_dir);
  const GroupSizeDistribution dist = group_size_distribution(records);
  if (!out_file.empty()) write_group_size_csv(dist, out_file);
  std::cout << "group sizes over " << records.size() << " episode(s), spatial limit M = "
            << dist.spatial_limit << "\n";
  for (int l = 0; l < dist.raw.rows(); ++l) {
    std::cout << "  RU " << (l + 1) << ":";
    for (int size = 0; size < dist.raw.cols(); ++size)
      if (dist.final_(l, size) > 0) std::cout << " g=" << size << " x" << dist.final_(l, size);
    if (dist.violations[l] > 0) std::cout << "  [" << dist.violations[l] << " violation(s)]";
    std::cout << "\n";
  }
  return 0;
}

int cmd_export_trace(const std::string& in_file, const std::string& out_file) {
  export_trace_text(read_trace(in_file), out_file);
  std::cout << "exported " << in_file << " to " << out_file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uplink MU-MIMO-OFDMA scheduling simulator"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-channels", "generate seeded channel traces");
  gen_cmd->add_option("--config", gen.config_file, "JSON config file (flags override it)");
  gen_cmd->add_option("--stas", gen.config.n_stations, "stations N")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--antennas", gen.config.n_antennas, "AP antennas M")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--rus", gen.config.n_rus, "resource units R")->check(CLI::Range(1, 9));
  gen_cmd->add_option("--slots", gen.config.n_slots, "slots per episode T")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--episodes", gen.episodes, "number of traces")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.master_seed, "master seed");
  gen_cmd->add_option("--radius", gen.config.cell_radius_m, "cell radius in meters");
  gen_cmd->add_option("--noise", gen.config.noise_power, "noise power (linear)");
  gen_cmd->add_option("--power", gen.config.total_power, "per-station power budget (linear)");
  gen_cmd->add_option("--ru-bandwidth", gen.config.ru_bandwidth_hz, "per-RU bandwidth in Hz");
  gen_cmd->add_option("--path-loss-exponent", gen.config.path_loss_exponent, "path loss exponent");
  gen_cmd->add_option("--taps", gen.config.n_taps, "delay taps");
  gen_cmd->add_option("--delay-spread", gen.config.delay_spread_s, "PDP decay constant, seconds");
  gen_cmd->add_option("--out", gen.out_dir, "output directory");
  gen_cmd->add_flag("--export-text", gen.export_text, "also write JSON exports");
  gen_cmd->add_flag("--force", gen.force, "overwrite existing files");

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "run scheduling episodes over traces");
  run_cmd->add_option("--trace", run.trace_path, "trace file or directory")->required();
  run_cmd->add_option("--policy", run.policy,
                      "bcq:K | bcq-per-ru:K | random[:density] | greedy | oracle | llm");
  run_cmd->add_option("--template", run.template_id, "prompt template: pt1 | pt2");
  run_cmd->add_option("--strategy", run.strategy, "prompt strategy: ratemax | bcq:K");
  run_cmd->add_option("--template-dir", run.template_dir, "override prompt template files");
  run_cmd->add_option("--mcs-table", run.mcs_table_file, "MCS table JSON file");
  run_cmd->add_option("--out", run.out_dir, "output directory");
  run_cmd->add_option("--endpoint", run.endpoint, "chat endpoint URL (llm policy)")
      ->envname("WISER_ENDPOINT");
  run_cmd->add_option("--model", run.model, "model name (llm policy)")->envname("WISER_MODEL");
  run_cmd->add_option("--mock", run.mock, "mock backend policy (llm policy, offline)");
  run_cmd->add_option("--timeout", run.timeout_s, "per-request timeout, seconds");
  run_cmd->add_option("--retries", run.retries, "additional attempts per request");
  run_cmd->add_option("--max-in-flight", run.max_in_flight, "concurrent requests per slot")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--revocation-feedback", run.revocation_feedback,
                    "tell agents when their RUs were revoked");
  run_cmd->add_flag("--force", run.force, "overwrite existing outputs");

  CLI::App* report_cmd = app.add_subcommand("report", "compute metrics from run directories");
  report_cmd->require_subcommand(1);
  std::string arg_a, arg_b, arg_out;

  CLI::App* error_cmd = report_cmd->add_subcommand("error", "assignment disagreement rate");
  error_cmd->add_option("--inferred", arg_a, "run directory with inferred assignments")->required();
  error_cmd->add_option("--actual", arg_b, "run directory with reference assignments")->required();
  error_cmd->add_option("--out", arg_out, "CSV output file");

  CLI::App* gain_cmd = report_cmd->add_subcommand("gain", "paired throughput gain");
  gain_cmd->add_option("--policy-run", arg_a, "run directory of the policy")->required();
  gain_cmd->add_option("--baseline-run", arg_b, "run directory of the baseline")->required();
  gain_cmd->add_option("--out", arg_out, "CSV output file");

  CLI::App* cdf_cmd = report_cmd->add_subcommand("cdf", "rate-sum CDF");
  cdf_cmd->add_option("--run", arg_a, "run directory")->required();
  cdf_cmd->add_option("--out", arg_out, "CSV output file");

  CLI::App* groupsize_cmd = report_cmd->add_subcommand("groupsize", "MU-MIMO group sizes per RU");
  groupsize_cmd->add_option("--run", arg_a, "run directory")->required();
  groupsize_cmd->add_option("--out", arg_out, "CSV output file");

  std::string export_in, export_out;
  CLI::App* export_cmd = app.add_subcommand("export-trace", "binary trace to JSON");
  export_cmd->add_option("input", export_in, "trace file (.wtr)")->required();
  export_cmd->add_option("output", export_out, "JSON output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_channels(gen, *gen_cmd);
    if (run_cmd->parsed()) return cmd_run(run);
    if (error_cmd->parsed()) return cmd_report_error(arg_a, arg_b, arg_out);
    if (gain_cmd->parsed()) return cmd_report_gain(arg_a, arg_b, arg_out);
    if (cdf_cmd->parsed()) return cmd_report_cdf(arg_a, arg_out);
    if (groupsize_cmd->parsed()) return cmd_report_groupsize(arg_a, arg_out);
    if (export_cmd->parsed()) return cmd_export_trace(export_in, export_out);
  } catch (const GatewayError& e) {
    std::cerr << "gateway error: " << e.what() << "\n";
    return kExitGateway;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "wiser/episode.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "wiser/config_io.hpp"

namespace wiser {

namespace {

using nlohmann::json;

std::vector<int> to_one_based(const std::vector<int>& zero_based) {
  std::vector<int> out;
  out.reserve(zero_based.size());
  for (int v : zero_based) out.push_back(v + 1);
  return out;
}

json feedback_to_json(const FeedbackStatus& status) {
  json out = {{"kind", to_string(status.kind)}};
  if (!status.detail.empty()) out["detail"] = status.detail;
  if (!status.revoked_rus.empty()) out["revoked_rus"] = status.revoked_rus;
  return out;
}

FeedbackStatus feedback_from_json(const json& doc) {
  FeedbackStatus status;
  status.kind = feedback_kind_from_string(doc.at("kind").get<std::string>());
  status.detail = doc.value("detail", "");
  if (doc.contains("revoked_rus")) status.revoked_rus = doc["revoked_rus"].get<std::vector<int>>();
  return status;
}

std::vector<std::string> matrix_to_rows(const AssignmentMatrix& nu) {
  std::vector<std::string> rows;
  rows.reserve(static_cast<std::size_t>(nu.rows()));
  for (int i = 0; i < nu.rows(); ++i) rows.push_back(row_to_digits(nu, i));
  return rows;
}

}  // namespace

std::vector<double> EpisodeRecord::rate_sums() const {
  std::vector<double> out;
  out.reserve(slots.size());
  for (const SlotLog& slot : slots) out.push_back(slot.rate_sum);
  return out;
}

std::vector<AssignmentMatrix> EpisodeRecord::raw_assignments() const {
  std::vector<AssignmentMatrix> out;
  out.reserve(slots.size());
  for (const SlotLog& slot : slots) out.push_back(slot.raw_assignment);
  return out;
}

EpisodeRecord run_episode(const ChannelRealization& chan, const PolicySpec& policy,
                          const WlanConfig& config, const McsTable& table,
                          const EpisodeOptions& options, const GatewayConfig* gateway) {
  config.validate();
  if (chan.n_slots() < config.n_slots)
    throw ValidationError("run_episode: channel covers " + std::to_string(chan.n_slots()) +
                          " slots, config needs " + std::to_string(config.n_slots));
  if (policy.kind == PolicySpec::Kind::Llm && gateway == nullptr)
    throw GatewayError("run_episode: llm policy requires a gateway config");

  const int n = config.n_stations;
  std::unique_ptr<Backend> owned_backend;
  Backend* backend = options.backend_override;
  if (policy.kind == PolicySpec::Kind::Llm && backend == nullptr) {
    owned_backend = make_backend(*gateway, config);
    backend = owned_backend.get();
  }

  EpisodeRecord record;
  record.config = config;
  record.policy = policy;
  record.slots.reserve(static_cast<std::size_t>(config.n_slots));

  std::vector<FeedbackStatus> feedback(static_cast<std::size_t>(n), FeedbackStatus::initial());
  for (int t = 0; t < config.n_slots; ++t) {
    const auto started = std::chrono::steady_clock::now();

    const GainMatrix zeta = compute_gains(chan, t);
    const ImpactMatrix impact = impact_factors(zeta, config);
    const std::vector<AgentObservation> observations = make_observations(zeta, impact, feedback);

    SlotLog log;
    log.slot = t;
    log.feedback.assign(static_cast<std::size_t>(n), FeedbackStatus::success());

    switch (policy.kind) {
      case PolicySpec::Kind::Bcq:
        log.raw_assignment = policy.per_ru ? bcq_assign_per_ru(zeta, policy.k, config)
                                           : bcq_assign(zeta, policy.k, config);
        break;
      case PolicySpec::Kind::Greedy:
        log.raw_assignment = greedy_assign(zeta, impact, config);
        break;
      case PolicySpec::Kind::Random:
        log.raw_assignment = random_assign(
            derive_seed(config.rng_seed, static_cast<std::uint64_t>(t)), config, policy.density);
        break;
      case PolicySpec::Kind::Oracle:
        log.raw_assignment =
            oracle_assign(chan, t, config, table, policy.oracle_budget_bits).assignment;
        break;
      case PolicySpec::Kind::Llm: {
        const PromptBundle bundle = build_prompts(observations, options.template_id,
                                                  options.strategy, config, t, options.templates);
        const std::vector<IntentResponse> responses = dispatch(bundle, *backend, *gateway);
        log.raw_assignment = AssignmentMatrix::Zero(n, config.n_rus);
        log.raw_intents.reserve(responses.size());
        for (const IntentResponse& response : responses) {
          if (response.status.ok()) log.raw_assignment.row(response.agent_index) = response.row;
          log.feedback[static_cast<std::size_t>(response.agent_index)] = response.status;
          log.raw_intents.push_back(response.raw);
        }
        if (options.response_log) log_responses(*options.response_log, t, bundle, responses);
        break;
      }
    }

    auto [corrected, violating] = self_correct(log.raw_assignment, config);
    log.assignment = std::move(corrected);
    log.corrected_rus = std::move(violating);
    log.groups_raw = group_sizes(log.raw_assignment);
    log.groups = group_sizes(log.assignment);

    if (options.revocation_feedback && !log.corrected_rus.empty()) {
      for (int i = 0; i < n; ++i) {
        std::vector<int> lost;
        for (int l : log.corrected_rus)
          if (log.raw_assignment(i, l) != 0) lost.push_back(l + 1);
        if (!lost.empty() && log.feedback[static_cast<std::size_t>(i)].ok())
          log.feedback[static_cast<std::size_t>(i)] = FeedbackStatus::corrected(std::move(lost));
      }
    }

    const LinkMetrics metrics = evaluate_slot(chan, t, log.assignment, config, table);
    log.rate_per_sta = metrics.rate_per_sta;
    log.rate_sum = metrics.rate_sum();
    log.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();

    feedback = log.feedback;
    record.slots.push_back(std::move(log));
  }
  return record;
}

std::vector<EpisodeRecord> run_batch(const WlanConfig& config, int episodes,
                                     std::uint64_t master_seed, const PolicySpec& policy,
                                     const McsTable& table, const EpisodeOptions& options,
                                     const GatewayConfig* gateway) {
  std::vector<EpisodeRecord> records;
  records.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    WlanConfig episode_config = config;
    episode_config.rng_seed = derive_seed(master_seed, static_cast<std::uint64_t>(e));
    try {
      const ChannelRealization chan = generate_channels(episode_config);
      EpisodeRecord record = run_episode(chan, policy, episode_config, table, options, gateway);
      record.episode_index = e;
      records.push_back(std::move(record));
    } catch (const std::exception& ex) {
      std::cerr << "episode " << e << " failed: " << ex.what() << '\n';
    }
  }
  return records;
}

std::vector<EpisodeRecord> run_batch(const std::vector<ChannelRealization>& traces,
                                     const PolicySpec& policy, const McsTable& table,
                                     const EpisodeOptions& options, const GatewayConfig* gateway) {
  std::vector<EpisodeRecord> records;
  records.reserve(traces.size());
  for (std::size_t e = 0; e < traces.size(); ++e) {
    try {
      EpisodeRecord record =
          run_episode(traces[e], policy, traces[e].config, table, options, gateway);
      record.episode_index = static_cast<int>(e);
      records.push_back(std::move(record));
    } catch (const std::exception& ex) {
      std::cerr << "episode " << e << " failed: " << ex.what() << '\n';
    }
  }
  return records;
}

void write_record(const EpisodeRecord& record, const std::filesystem::path& file,
                  bool include_timing) {
  json doc;
  doc["config"] = wlan_config_to_json(record.config);
  doc["policy"] = record.policy.str();
  doc["episode_index"] = record.episode_index;
  json slots = json::array();
  for (const SlotLog& slot : record.slots) {
    json entry;
    entry["slot"] = slot.slot;
    entry["raw_assignment"] = matrix_to_rows(slot.raw_assignment);
    entry["assignment"] = matrix_to_rows(slot.assignment);
    entry["corrected_rus"] = to_one_based(slot.corrected_rus);
    entry["groups_raw"] = std::vector<int>(slot.groups_raw.data(),
                                           slot.groups_raw.data() + slot.groups_raw.size());
    entry["groups"] =
        std::vector<int>(slot.groups.data(), slot.groups.data() + slot.groups.size());
    entry["rate_per_sta"] = std::vector<double>(slot.rate_per_sta.data(),
                                                slot.rate_per_sta.data() + slot.rate_per_sta.size());
    entry["rate_sum"] = slot.rate_sum;
    json feedback = json::array();
    for (const FeedbackStatus& status : slot.feedback) feedback.push_back(feedback_to_json(status));
    entry["feedback"] = std::move(feedback);
    if (!slot.raw_intents.empty()) entry["raw_intents"] = slot.raw_intents;
    if (include_timing) entry["wall_ms"] = slot.wall_ms;
    slots.push_back(std::move(entry));
  }
  doc["slots"] = std::move(slots);

  std::ofstream out(file);
  if (!out) throw IoError("cannot write episode record: " + file.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("short write on episode record: " + file.string());
}

EpisodeRecord read_record(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open episode record: " + file.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw IoError("episode record " + file.string() + ": " + e.what());
  }

  EpisodeRecord record;
  record.config = wlan_config_from_json(doc.at("config"));
  record.policy = PolicySpec::parse(doc.at("policy").get<std::string>());
  record.episode_index = doc.at("episode_index");
  for (const json& entry : doc.at("slots")) {
    SlotLog slot;
    slot.slot = entry.at("slot");
    slot.raw_assignment = assignment_from_digits(entry.at("raw_assignment"));
    slot.assignment = assignment_from_digits(entry.at("assignment"));
    for (int ru : entry.at("corrected_rus").get<std::vector<int>>())
      slot.corrected_rus.push_back(ru - 1);
    const auto groups_raw = entry.at("groups_raw").get<std::vector<int>>();
    const auto groups = entry.at("groups").get<std::vector<int>>();
    slot.groups_raw = Eigen::Map<const GroupSizes>(groups_raw.data(),
                                                   static_cast<Eigen::Index>(groups_raw.size()));
    slot.groups =
        Eigen::Map<const GroupSizes>(groups.data(), static_cast<Eigen::Index>(groups.size()));
    const auto rates = entry.at("rate_per_sta").get<std::vector<double>>();
    slot.rate_per_sta =
        Eigen::Map<const Eigen::VectorXd>(rates.data(), static_cast<Eigen::Index>(rates.size()));
    slot.rate_sum = entry.at("rate_sum");
    for (const json& status : entry.at("feedback")) slot.feedback.push_back(feedback_from_json(status));
    if (entry.contains("raw_intents"))
      slot.raw_intents = entry["raw_intents"].get<std::vector<std::string>>();
    slot.wall_ms = entry.value("wall_ms", 0.0);
    record.slots.push_back(std::move(slot));
  }
  return record;
}

void write_results_csv(const std::vector<EpisodeRecord>& records,
                       const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write results csv: " + file.string());
  out << "episode,slot,rate_sum,parse_errors,corrected_rus\n";
  for (const EpisodeRecord& record : records) {
    for (const SlotLog& slot : record.slots) {
      int parse_errors = 0;
      for (const FeedbackStatus& status : slot.feedback)
        if (status.kind == FeedbackStatus::Kind::ParseError) ++parse_errors;
      out << record.episode_index << ',' << slot.slot << ',' << format_double(slot.rate_sum)
          << ',' << parse_errors << ',' << slot.corrected_rus.size() << '\n';
    }
  }
  if (!out) throw IoError("short write on results csv: " + file.string());
}

}  // namespace wiser

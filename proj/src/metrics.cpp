#include "wiser/metrics.hpp"

#include <algorithm>
#include <fstream>

namespace wiser {

ErrorReport assignment_error(const std::vector<AssignmentMatrix>& inferred,
                             const std::vector<AssignmentMatrix>& actual,
                             const WlanConfig& config) {
  if (inferred.size() != actual.size())
    throw ValidationError("assignment_error: slot counts differ");
  ErrorReport report;
  for (std::size_t t = 0; t < inferred.size(); ++t) {
    const AssignmentMatrix& a = actual[t];
    const AssignmentMatrix& b = inferred[t];
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw ValidationError("assignment_error: shape mismatch at slot " + std::to_string(t));
    report.fp += ((a.array() == 1) && (b.array() == 0)).count();
    report.fn += ((a.array() == 0) && (b.array() == 1)).count();
  }
  const double denom = static_cast<double>(config.n_rus) * config.n_stations *
                       static_cast<double>(inferred.size());
  report.error_rate = denom > 0 ? static_cast<double>(report.fp + report.fn) / denom : 0.0;
  return report;
}

GainReport performance_gain(const std::vector<EpisodeRecord>& policy_records,
                            const std::vector<EpisodeRecord>& baseline_records) {
  GainReport report;
  for (const EpisodeRecord& record : policy_records)
    for (const SlotLog& slot : record.slots) report.policy_sum += slot.rate_sum;
  for (const EpisodeRecord& record : baseline_records)
    for (const SlotLog& slot : record.slots) report.baseline_sum += slot.rate_sum;
  if (!(report.baseline_sum > 0.0))
    throw ValidationError("performance_gain: baseline rate-sum is zero");
  report.gain_percent = 100.0 * (report.policy_sum - report.baseline_sum) / report.baseline_sum;
  return report;
}

std::vector<std::pair<double, double>> rate_cdf(const std::vector<EpisodeRecord>& records) {
  std::vector<double> rates;
  for (const EpisodeRecord& record : records)
    for (const SlotLog& slot : record.slots) rates.push_back(slot.rate_sum);
  if (rates.empty()) throw ValidationError("rate_cdf: no slots");
  std::sort(rates.begin(), rates.end());
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(rates.size());
  const double n = static_cast<double>(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i)
    cdf.emplace_back(rates[i], static_cast<double>(i + 1) / n);
  return cdf;
}

GroupSizeDistribution group_size_distribution(const std::vector<EpisodeRecord>& records) {
  if (records.empty()) throw ValidationError("group_size_distribution: no records");
  const int r = records.front().config.n_rus;
  const int n = records.front().config.n_stations;

  GroupSizeDistribution dist;
  dist.spatial_limit = records.front().config.n_antennas;
  dist.raw = Eigen::MatrixXi::Zero(r, n + 1);
  dist.final_ = Eigen::MatrixXi::Zero(r, n + 1);
  dist.violations = Eigen::VectorXi::Zero(r);

  for (const EpisodeRecord& record : records) {
    if (record.config.n_rus != r || record.config.n_stations != n)
      throw ValidationError("group_size_distribution: records have mixed dimensions");
    for (const SlotLog& slot : record.slots) {
      for (int l = 0; l < r; ++l) {
        dist.raw(l, slot.groups_raw[l]) += 1;
        dist.final_(l, slot.groups[l]) += 1;
        if (slot.groups_raw[l] > dist.spatial_limit) dist.violations[l] += 1;
      }
    }
  }
  return dist;
}

void write_error_csv(const ErrorReport& report, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write error csv: " + file.string());
  out << "fp,fn,error_rate\n";
  out << report.fp << ',' << report.fn << ',' << format_double(report.error_rate) << '\n';
}

void write_gain_csv(const GainReport& report, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write gain csv: " + file.string());
  out << "policy_sum,baseline_sum,gain_percent\n";
  out << format_double(report.policy_sum) << ',' << format_double(report.baseline_sum) << ','
      << format_double(report.gain_percent) << '\n';
}

void write_cdf_csv(const std::vector<std::pair<double, double>>& cdf,
                   const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write cdf csv: " + file.string());
  out << "rate_sum,cumulative_fraction\n";
  for (const auto& [rate, fraction] : cdf)
    out << format_double(rate) << ',' << format_double(fraction) << '\n';
}

void write_group_size_csv(const GroupSizeDistribution& dist, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write group size csv: " + file.string());
  out << "ru,group_size,count_raw,count_final,exceeds_limit\n";
  for (int l = 0; l < dist.raw.rows(); ++l)
    for (int size = 0; size < dist.raw.cols(); ++size)
      out << (l + 1) << ',' << size << ',' << dist.raw(l, size) << ',' << dist.final_(l, size)
          << ',' << (size > dist.spatial_limit ? 1 : 0) << '\n';
}

}  // namespace wiser

#include "gstree/report.hpp"

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gstree/errors.hpp"

#include "json.hpp"

namespace gstree {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec)
      throw resource_error("cannot create directory " +
                           target.parent_path().string() + ": " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw resource_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw resource_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw resource_error("rename to " + path + " failed: " + ec.message());
  }
}

std::string run_stats_csv(const RunStats& stats) {
  std::ostringstream os;
  os << "depth,mean,second_moment,half_width,replicas\n";
  for (std::size_t i = 0; i < stats.depth.size(); ++i)
    os << stats.depth[i] << ',' << format_double(stats.mean[i]) << ','
       << format_double(stats.second_moment[i]) << ','
       << format_double(stats.half_width[i]) << ',' << stats.replicas << '\n';
  return os.str();
}

std::string sandwich_csv(const SandwichTable& table) {
  std::ostringstream os;
  os << "depth,q_ref,moment_est,ratio,ratio_lo,ratio_hi,skipped\n";
  for (const SandwichRow& r : table.rows)
    os << r.depth << ',' << format_double(r.q_ref) << ','
       << format_double(r.moment_est) << ',' << format_double(r.ratio) << ','
       << format_double(r.ratio_lo) << ',' << format_double(r.ratio_hi) << ','
       << (r.skipped ? 1 : 0) << '\n';
  return os.str();
}

std::string verdict_json(const VerdictReport& report) {
  nlohmann::ordered_json j;
  j["decision"] = to_string(report.decision);
  j["criterion"] = to_string(report.criterion);
  j["evidence"] = {{"partial_sum", report.evidence.value},
                   {"status", to_string(report.evidence.status)},
                   {"tail_bound", report.evidence.tail_bound}};
  j["horizon"] = report.horizon;
  j["assumption_ok"] = report.assumption_ok;
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

std::string manifest_json(const std::string& config_json, std::uint64_t seed,
                          const std::string& timestamp) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["config"] = nlohmann::json::parse(config_json);
  j["seed"] = seed;
  j["timestamp"] = timestamp;
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_field_dump(const std::string& path, std::span<const double> values) {
  static_assert(sizeof(double) == 8);
  std::string content(8 + values.size() * 8, '\0');
  const std::uint64_t count = values.size();
  std::memcpy(content.data(), &count, 8);
  std::memcpy(content.data() + 8, values.data(), values.size() * 8);
  write_file_atomic(path, content);
}

}  // namespace gstree

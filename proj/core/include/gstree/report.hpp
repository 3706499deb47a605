#pragma once

#include <string>

#include "gstree/montecarlo.hpp"
#include "gstree/verdict.hpp"

namespace gstree {

// All writers go through a temp file plus atomic rename, so a failed run
// never leaves a partial file behind.
void write_file_atomic(const std::string& path, const std::string& content);

// Schema: depth,mean,second_moment,half_width,replicas
std::string run_stats_csv(const RunStats& stats);

// Schema: depth,q_ref,moment_est,ratio,ratio_lo,ratio_hi,skipped
std::string sandwich_csv(const SandwichTable& table);

std::string verdict_json(const VerdictReport& report);

// Run manifest: config echo, seed, schema version, timestamp.
// `config_json` must already be a serialized JSON object.
std::string manifest_json(const std::string& config_json, std::uint64_t seed,
                          const std::string& timestamp);

// RFC 3339 UTC timestamp for manifests.
std::string utc_timestamp();

// 8-byte little-endian count header followed by 64-bit doubles.
void write_field_dump(const std::string& path, std::span<const double> values);

}  // namespace gstree

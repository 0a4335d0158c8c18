#pragma once

// Versioned file formats: JSON configuration, per-slot records CSV and the
// run summary JSON. See README.md and schemas/ for the layouts.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "semcom/core.hpp"
#include "semcom/simulation.hpp"

namespace semcom {

/// Unknown keys are rejected; missing keys keep their defaults. A missing
/// "users" array selects the four default users.
SystemConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SystemConfig& cfg);
SystemConfig load_config(const std::filesystem::path& path);

/// One CSV row: one user in one slot.
struct RecordRow {
  std::int64_t t{0};
  int user{0};
  double snr_db{0.0};
  double cr{0.0};
  double rate_bps{0.0};
  double latency_ms{0.0};
  double q_true_db{0.0};
  double q_oracle_db{0.0};
  bool satisfied{false};
  double objective{0.0};

  bool operator==(const RecordRow&) const = default;
};

std::vector<RecordRow> flatten(std::span<const SlotRecord> records, std::span<const UserProfile> users);

void write_records_csv(std::ostream& out, std::span<const RecordRow> rows);
std::vector<RecordRow> read_records_csv(std::istream& in);

nlohmann::json summary_to_json(const RunSummary& summary, const SystemConfig& cfg);

/// records.csv and summary.json under `out_dir` (created if missing).
void write_outputs(std::span<const SlotRecord> records, const RunSummary& summary, const SystemConfig& cfg,
                   const std::filesystem::path& out_dir);

}  // namespace semcom

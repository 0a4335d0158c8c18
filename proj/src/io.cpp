#include "semcom/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "semcom/errors.hpp"

namespace semcom {

using nlohmann::json;

namespace {

constexpr const char* kCsvHeader = "t,user,snr_db,cr,rate_bps,latency_ms,q_true_db,q_oracle_db,satisfied,objective";

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& target, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

Trajectory trajectory_from_json(const json& j, Trajectory t, const std::string& where) {
  reject_unknown(j, {"center", "length", "width", "height", "period"}, where);
  if (j.contains("center")) {
    const auto c = j.at("center");
    if (!c.is_array() || c.size() != 2) throw ConfigError(where + ".center: expected [x, y]");
    t.center = {c[0].get<double>(), c[1].get<double>()};
  }
  read_if(j, "length", t.length, where);
  read_if(j, "width", t.width, where);
  read_if(j, "height", t.height, where);
  read_if(j, "period", t.period, where);
  return t;
}

QualityModel quality_from_json(const json& j, QualityModel m, const std::string& where) {
  reject_unknown(j,
                 {"q_floor", "q_ceil_min_cr", "q_ceil_max_cr", "snr_mid", "snr_slope", "cr_sat", "content_noise_std",
                  "oracle_error_bound", "cr_min", "cr_max"},
                 where);
  read_if(j, "q_floor", m.q_floor, where);
  read_if(j, "q_ceil_min_cr", m.q_ceil_min_cr, where);
  read_if(j, "q_ceil_max_cr", m.q_ceil_max_cr, where);
  read_if(j, "snr_mid", m.snr_mid, where);
  read_if(j, "snr_slope", m.snr_slope, where);
  read_if(j, "cr_sat", m.cr_sat, where);
  read_if(j, "content_noise_std", m.content_noise_std, where);
  read_if(j, "oracle_error_bound", m.oracle_error_bound, where);
  read_if(j, "cr_min", m.cr_min, where);
  read_if(j, "cr_max", m.cr_max, where);
  return m;
}

UserProfile user_from_json(const json& j, std::size_t index) {
  const std::string where = "users[" + std::to_string(index) + "]";
  reject_unknown(j,
                 {"user_id", "dataset", "source_dim", "cr_min", "cr_max", "q_min", "confidence", "safety_margin",
                  "noise_power", "trajectory", "quality_model"},
                 where);
  UserProfile u = template_user(index);
  read_if(j, "user_id", u.user_id, where);
  if (j.contains("dataset")) {
    read_if(j, "dataset", u.dataset, where);
    try {
      u.quality_model = calibrate_default(u.dataset);
    } catch (const InvalidArgument& e) {
      throw ConfigError(where + ".dataset: " + e.what());
    }
    u.cr_min = u.quality_model.cr_min;
    u.cr_max = u.quality_model.cr_max;
  }
  read_if(j, "source_dim", u.source_dim, where);
  read_if(j, "cr_min", u.cr_min, where);
  read_if(j, "cr_max", u.cr_max, where);
  read_if(j, "q_min", u.q_min, where);
  read_if(j, "confidence", u.confidence, where);
  read_if(j, "safety_margin", u.safety_margin, where);
  if (j.contains("noise_power") && !j.at("noise_power").is_null()) u.noise_power = j.at("noise_power").get<double>();
  if (j.contains("trajectory")) u.trajectory = trajectory_from_json(j.at("trajectory"), u.trajectory, where + ".trajectory");
  if (j.contains("quality_model")) {
    u.quality_model = quality_from_json(j.at("quality_model"), u.quality_model, where + ".quality_model");
  }
  return u;
}

json user_to_json(const UserProfile& u) {
  const auto& m = u.quality_model;
  json j{{"user_id", u.user_id},
         {"dataset", u.dataset},
         {"source_dim", u.source_dim},
         {"cr_min", u.cr_min},
         {"cr_max", u.cr_max},
         {"q_min", u.q_min},
         {"confidence", u.confidence},
         {"safety_margin", u.safety_margin},
         {"noise_power", u.noise_power ? json(*u.noise_power) : json(nullptr)},
         {"trajectory",
          {{"center", {u.trajectory.center.x(), u.trajectory.center.y()}},
           {"length", u.trajectory.length},
           {"width", u.trajectory.width},
           {"height", u.trajectory.height},
           {"period", u.trajectory.period}}},
         {"quality_model",
          {{"q_floor", m.q_floor},
           {"q_ceil_min_cr", m.q_ceil_min_cr},
           {"q_ceil_max_cr", m.q_ceil_max_cr},
           {"snr_mid", m.snr_mid},
           {"snr_slope", m.snr_slope},
           {"cr_sat", m.cr_sat},
           {"content_noise_std", m.content_noise_std},
           {"oracle_error_bound", m.oracle_error_bound},
           {"cr_min", m.cr_min},
           {"cr_max", m.cr_max}}}};
  return j;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SystemConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"schema_version", "total_rate_bps", "bits_per_symbol", "alpha", "window_size", "update_interval",
                  "mc_samples", "learning_rate", "slots", "seed", "target_snr_db", "channel", "gp", "users"},
                 "config");
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion) {
    throw ConfigError("config: unsupported schema_version " + j.at("schema_version").dump());
  }
  SystemConfig cfg;
  read_if(j, "total_rate_bps", cfg.total_rate, "config");
  read_if(j, "bits_per_symbol", cfg.bits_per_symbol, "config");
  read_if(j, "alpha", cfg.alpha, "config");
  read_if(j, "window_size", cfg.window_size, "config");
  read_if(j, "update_interval", cfg.update_interval, "config");
  read_if(j, "mc_samples", cfg.mc_samples, "config");
  read_if(j, "learning_rate", cfg.learning_rate, "config");
  read_if(j, "slots", cfg.slots, "config");
  read_if(j, "seed", cfg.seed, "config");
  read_if(j, "target_snr_db", cfg.target_snr_db, "config");

  if (j.contains("channel")) {
    const auto& c = j.at("channel");
    reject_unknown(c, {"antenna_gain", "carrier_freq_hz", "pathloss_exp", "noise_power", "es_position", "fading"},
                   "config.channel");
    read_if(c, "antenna_gain", cfg.channel.antenna_gain, "config.channel");
    read_if(c, "carrier_freq_hz", cfg.channel.carrier_freq_hz, "config.channel");
    read_if(c, "pathloss_exp", cfg.channel.pathloss_exp, "config.channel");
    read_if(c, "noise_power", cfg.channel.noise_power, "config.channel");
    if (c.contains("es_position")) {
      const auto p = c.at("es_position");
      if (!p.is_array() || p.size() != 3) throw ConfigError("config.channel.es_position: expected [x, y, z]");
      cfg.channel.es_position = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
    }
    if (c.contains("fading")) {
      const auto mode = c.at("fading").get<std::string>();
      if (mode == "power") {
        cfg.channel.fading = FadingMode::kPower;
      } else if (mode == "amplitude") {
        cfg.channel.fading = FadingMode::kAmplitude;
      } else {
        throw ConfigError("config.channel.fading: expected 'power' or 'amplitude'");
      }
    }
  }

  if (j.contains("gp")) {
    const auto& g = j.at("gp");
    reject_unknown(g,
                   {"psi1_init", "psi2_init", "sigma_init", "sigma_floor", "n_steps", "cold_start_slots", "snr_min_db",
                    "snr_max_db", "log_cr", "log_step"},
                   "config.gp");
    read_if(g, "psi1_init", cfg.gp.psi1_init, "config.gp");
    read_if(g, "psi2_init", cfg.gp.psi2_init, "config.gp");
    read_if(g, "sigma_init", cfg.gp.sigma_init, "config.gp");
    read_if(g, "sigma_floor", cfg.gp.sigma_floor, "config.gp");
    read_if(g, "n_steps", cfg.gp.n_steps, "config.gp");
    read_if(g, "cold_start_slots", cfg.gp.cold_start_slots, "config.gp");
    read_if(g, "snr_min_db", cfg.gp.snr_min_db, "config.gp");
    read_if(g, "snr_max_db", cfg.gp.snr_max_db, "config.gp");
    read_if(g, "log_cr", cfg.gp.log_cr, "config.gp");
    read_if(g, "log_step", cfg.gp.log_step, "config.gp");
  }

  if (j.contains("users")) {
    const auto& users = j.at("users");
    if (!users.is_array()) throw ConfigError("config.users: expected an array");
    for (std::size_t i = 0; i < users.size(); ++i) cfg.users.push_back(user_from_json(users[i], i));
  } else {
    cfg.users = default_config().users;
  }

  try {
    validate(cfg);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

json config_to_json(const SystemConfig& cfg) {
  json users = json::array();
  for (const auto& u : cfg.users) users.push_back(user_to_json(u));
  return {{"schema_version", kSchemaVersion},
          {"total_rate_bps", cfg.total_rate},
          {"bits_per_symbol", cfg.bits_per_symbol},
          {"alpha", cfg.alpha},
          {"window_size", cfg.window_size},
          {"update_interval", cfg.update_interval},
          {"mc_samples", cfg.mc_samples},
          {"learning_rate", cfg.learning_rate},
          {"slots", cfg.slots},
          {"seed", cfg.seed},
          {"target_snr_db", cfg.target_snr_db},
          {"channel",
           {{"antenna_gain", cfg.channel.antenna_gain},
            {"carrier_freq_hz", cfg.channel.carrier_freq_hz},
            {"pathloss_exp", cfg.channel.pathloss_exp},
            {"noise_power", cfg.channel.noise_power},
            {"es_position", {cfg.channel.es_position.x(), cfg.channel.es_position.y(), cfg.channel.es_position.z()}},
            {"fading", cfg.channel.fading == FadingMode::kPower ? "power" : "amplitude"}}},
          {"gp",
           {{"psi1_init", cfg.gp.psi1_init},
            {"psi2_init", cfg.gp.psi2_init},
            {"sigma_init", cfg.gp.sigma_init},
            {"sigma_floor", cfg.gp.sigma_floor},
            {"n_steps", cfg.gp.n_steps},
            {"cold_start_slots", cfg.gp.cold_start_slots},
            {"snr_min_db", cfg.gp.snr_min_db},
            {"snr_max_db", cfg.gp.snr_max_db},
            {"log_cr", cfg.gp.log_cr},
            {"log_step", cfg.gp.log_step}}},
          {"users", users}};
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::vector<RecordRow> flatten(std::span<const SlotRecord> records, std::span<const UserProfile> users) {
  std::vector<RecordRow> rows;
  for (const auto& r : records) {
    for (std::size_t n = 0; n < r.snr_db.size(); ++n) {
      rows.push_back({r.t, users[n].user_id, r.snr_db[n], r.decision.cr[n], r.decision.rate[n],
                      1e3 * r.decision.latency[n], r.true_quality[n], r.oracle_quality[n],
                      static_cast<bool>(r.satisfied[n]), r.objective});
    }
  }
  return rows;
}

void write_records_csv(std::ostream& out, std::span<const RecordRow> rows) {
  out << "# schema_version=" << kSchemaVersion << '\n' << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.t << ',' << r.user << ',' << format_double(r.snr_db) << ',' << format_double(r.cr) << ','
        << format_double(r.rate_bps) << ',' << format_double(r.latency_ms) << ',' << format_double(r.q_true_db) << ','
        << format_double(r.q_oracle_db) << ',' << (r.satisfied ? 1 : 0) << ',' << format_double(r.objective) << '\n';
  }
}

std::vector<RecordRow> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# schema_version=" + std::to_string(kSchemaVersion)) {
    throw Error("records csv: missing or unsupported schema_version line");
  }
  if (!std::getline(in, line) || line != kCsvHeader) throw Error("records csv: unexpected header");

  std::vector<RecordRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> f;
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 10) throw Error("records csv: expected 10 fields in '" + line + "'");
    rows.push_back({std::stoll(f[0]), std::stoi(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4]),
                    std::stod(f[5]), std::stod(f[6]), std::stod(f[7]), f[8] == "1", std::stod(f[9])});
  }
  return rows;
}

json summary_to_json(const RunSummary& s, const SystemConfig& cfg) {
  const auto metrics = [](const UserMetrics& m) {
    return json{{"satisfaction_pct", m.satisfaction_pct},
                {"mean_psnr_db", m.mean_psnr_db},
                {"mean_latency_ms", m.mean_latency_ms}};
  };
  const auto timing = [](const TimingStats& t) {
    return json{{"mean_ms", t.mean_ms}, {"std_ms", t.std_ms}, {"count", t.count}};
  };
  json users = json::array();
  for (std::size_t n = 0; n < s.users.size(); ++n) {
    json u = metrics(s.users[n]);
    u["user_id"] = n < cfg.users.size() ? cfg.users[n].user_id : static_cast<int>(n) + 1;
    users.push_back(u);
  }
  return {{"schema_version", kSchemaVersion},
          {"policy", s.policy},
          {"seed", cfg.seed},
          {"slots", s.slots},
          {"users", users},
          {"average", metrics(s.average)},
          {"total_objective", s.total_objective},
          {"timing", {{"update", timing(s.update)}, {"inference", timing(s.inference)}}},
          {"config", config_to_json(cfg)}};
}

void write_outputs(std::span<const SlotRecord> records, const RunSummary& summary, const SystemConfig& cfg,
                   const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  const auto csv_path = out_dir / "records.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw Error("cannot write " + csv_path.string());
  write_records_csv(csv, flatten(records, cfg.users));
  if (!csv) throw Error("failed writing " + csv_path.string());

  const auto json_path = out_dir / "summary.json";
  std::ofstream js(json_path);
  if (!js) throw Error("cannot write " + json_path.string());
  js << summary_to_json(summary, cfg).dump(2) << '\n';
  if (!js) throw Error("failed writing " + json_path.string());
}

}  // namespace semcom

// semcom: run the online CR-selection simulator.
//
//   semcom simulate [--config PATH] [--seed U64] [--slots N] [--policy TAG] [--out DIR]
//   semcom bench    [--config PATH] [--seed U64] [--slots N] [--out DIR]
//   semcom sweep    --param {alpha|q_min_vector|n_users} --values V1 V2 ... [common flags]
//
// Exit codes: 0 success, 2 configuration error, 1 runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semcom/errors.hpp"
#include "semcom/io.hpp"
#include "semcom/simulation.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> slots;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file (defaults to the built-in 4-user experiment)");
  cmd->add_option("--seed", o.seed, "Run seed");
  cmd->add_option("--slots", o.slots, "Number of slots");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

semcom::SystemConfig resolve_config(const CommonOptions& o) {
  semcom::SystemConfig cfg = o.config_path.empty() ? semcom::default_config() : semcom::load_config(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.slots) cfg.slots = *o.slots;
  try {
    semcom::validate(cfg);
  } catch (const semcom::InvalidArgument& e) {
    throw semcom::ConfigError(e.what());
  }
  return cfg;
}

void print_summary_row(const semcom::RunSummary& s) {
  std::printf("%-14s", s.policy.c_str());
  for (const auto& u : s.users) std::printf(" %7.2f", u.satisfaction_pct);
  std::printf(" %7.2f |", s.average.satisfaction_pct);
  for (const auto& u : s.users) std::printf(" %6.2f", u.mean_psnr_db);
  std::printf(" %6.2f |", s.average.mean_psnr_db);
  for (const auto& u : s.users) std::printf(" %7.2f", u.mean_latency_ms);
  std::printf(" %7.2f | %8.2f\n", s.average.mean_latency_ms, s.total_objective);
}

void print_header(std::size_t n_users) {
  std::printf("%-14s %*s | %*s | %*s | %8s\n", "policy", static_cast<int>(8 * (n_users + 1) - 1), "satisfaction %",
              static_cast<int>(7 * (n_users + 1) - 1), "PSNR dB", static_cast<int>(8 * (n_users + 1) - 1), "latency ms",
              "obj");
}

void write_summary_csv(const std::filesystem::path& path, const std::string& key_name,
                       const std::vector<std::pair<std::string, semcom::RunSummary>>& rows) {
  std::ofstream out(path);
  if (!out) throw semcom::Error("cannot write " + path.string());
  out << "# schema_version=" << semcom::kSchemaVersion << '\n';
  out << key_name << ",satisfaction_pct,mean_psnr_db,mean_latency_ms,objective,inference_ms,update_ms\n";
  for (const auto& [key, s] : rows) {
    out << key << ',' << s.average.satisfaction_pct << ',' << s.average.mean_psnr_db << ','
        << s.average.mean_latency_ms << ',' << s.total_objective << ',' << s.inference.mean_ms << ','
        << s.update.mean_ms << '\n';
  }
}

semcom::PolicyTag parse_policy(const std::string& name) {
  try {
    return semcom::parse_policy_tag(name);
  } catch (const semcom::InvalidArgument& e) {
    throw semcom::ConfigError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online compression-ratio selection and rate allocation simulator"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  std::string policy_name = "proposed";
  auto* simulate = app.add_subcommand("simulate", "Run one policy and write records.csv and summary.json");
  add_common(simulate, sim_opts);
  simulate->add_option("--policy", policy_name, "proposed | psnr_max | latency_min | psnr_feasible");

  CommonOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Run every policy on the same realizations and compare");
  add_common(bench, bench_opts);

  CommonOptions sweep_opts;
  std::string sweep_policy = "proposed";
  std::string param_name;
  std::vector<std::string> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Re-run one policy over values of a parameter");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--policy", sweep_policy, "Policy to sweep");
  sweep_cmd->add_option("--param", param_name, "alpha | q_min_vector | n_users")->required();
  sweep_cmd->add_option("--values", values, "Values; q_min vectors are comma-separated")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) {
      const auto cfg = resolve_config(sim_opts);
      const auto tag = parse_policy(policy_name);
      const auto result = semcom::run_simulation(cfg, tag);
      print_header(cfg.users.size());
      print_summary_row(result.summary);
      if (!sim_opts.out_dir.empty()) semcom::write_outputs(result.records, result.summary, cfg, sim_opts.out_dir);
    } else if (*bench) {
      const auto cfg = resolve_config(bench_opts);
      std::vector<std::pair<std::string, semcom::RunSummary>> rows;
      print_header(cfg.users.size());
      for (auto tag : semcom::all_policies()) {
        auto result = semcom::run_simulation(cfg, tag);
        print_summary_row(result.summary);
        if (!bench_opts.out_dir.empty()) {
          semcom::write_outputs(result.records, result.summary, cfg,
                                std::filesystem::path(bench_opts.out_dir) / std::string(semcom::to_string(tag)));
        }
        rows.emplace_back(result.summary.policy, result.summary);
      }
      std::printf("%-14s (not implemented)\n", "drl_sac");
      if (!bench_opts.out_dir.empty()) {
        write_summary_csv(std::filesystem::path(bench_opts.out_dir) / "bench.csv", "policy", rows);
      }
    } else if (*sweep_cmd) {
      const auto cfg = resolve_config(sweep_opts);
      const auto tag = parse_policy(sweep_policy);
      semcom::SweepParameter param;
      try {
        param = semcom::parse_sweep_parameter(param_name);
      } catch (const semcom::InvalidArgument& e) {
        throw semcom::ConfigError(e.what());
      }
      std::vector<std::pair<std::string, semcom::RunSummary>> rows;
      for (const auto& v : values) {
        semcom::SystemConfig run_cfg;
        try {
          run_cfg = semcom::apply_sweep_value(cfg, param, v);
        } catch (const semcom::InvalidArgument& e) {
          throw semcom::ConfigError(e.what());
        }
        auto summary = semcom::run_simulation(run_cfg, tag).summary;
        std::printf("%s=%-12s sat %6.2f%%  psnr %6.2f dB  latency %7.2f ms  obj %8.2f  infer %.3f ms\n",
                    param_name.c_str(), v.c_str(), summary.average.satisfaction_pct, summary.average.mean_psnr_db,
                    summary.average.mean_latency_ms, summary.total_objective, summary.inference.mean_ms);
        rows.emplace_back(v, std::move(summary));
      }
      if (!sweep_opts.out_dir.empty()) {
        std::filesystem::create_directories(sweep_opts.out_dir);
        write_summary_csv(std::filesystem::path(sweep_opts.out_dir) / "sweep.csv", param_name, rows);
      }
    }
  } catch (const semcom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

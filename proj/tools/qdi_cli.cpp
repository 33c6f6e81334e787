// qdi command line front end: discord indicators, coincidence-experiment
// simulation, throughput curves and source-mismatch sweeps, emitted as
// plotter-ready CSV/JSON.  Every run with a fixed seed writes byte-identical
// data files; each output set is accompanied by a manifest that is written
// last, so a present manifest marks a complete run.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdi.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidState = 3;
constexpr int kExitInsufficientStats = 4;

int exit_code_for(int status) {
  switch (status) {
    case QDI_OK: return 0;
    case QDI_ERR_PARSE: return kExitUsage;
    case QDI_ERR_INVALID_STATE: return kExitInvalidState;
    case QDI_ERR_INSUFFICIENT_STATISTICS: return kExitInsufficientStats;
    case QDI_ERR_INVALID_ARGUMENT: return kExitUsage;
    default: return kExitFailure;
  }
}

[[noreturn]] void fail(int status) {
  std::fprintf(stderr, "error: %s\n", qdi_last_error());
  std::exit(exit_code_for(status));
}

[[noreturn]] void fail_msg(int code, const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  std::exit(code);
}

#define QDI_CHECK(call)                  \
  do {                                   \
    const int qdi_status = (call);       \
    if (qdi_status != QDI_OK) fail(qdi_status); \
  } while (0)

// up to 17 significant digits, locale independent, reproducible bytes
std::string fmt(double v) {
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_msg(kExitUsage, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_msg(kExitFailure, "cannot write " + path);
  out << content;
  if (!out) fail_msg(kExitFailure, "write failed for " + path);
}

// manifest sidecar; written after every listed output exists
class Manifest {
public:
  Manifest(std::string command, std::uint64_t seed)
      : command_(std::move(command)),
        seed_(seed),
        start_(std::chrono::steady_clock::now()) {}

  void set_config_json(std::string json) { config_json_ = std::move(json); }
  void add_output(const std::string& path) { outputs_.push_back(path); }

  void write(const std::string& primary_output) const {
    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    std::string m = "{";
    m += "\"command\":\"" + json_escape(command_) + "\"";
    m += ",\"version\":\"" + std::string(qdi_version()) + "\"";
    m += ",\"seed\":" + std::to_string(seed_);
    m += ",\"config\":" + (config_json_.empty() ? "{}" : config_json_);
    m += ",\"outputs\":[";
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
      if (i) m += ",";
      m += "\"" + json_escape(outputs_[i]) + "\"";
    }
    m += "]";
    m += ",\"duration_seconds\":" + fmt(duration);
    m += "}\n";
    write_file(primary_output + ".manifest.json", m);
  }

private:
  std::string command_;
  std::string config_json_;
  std::uint64_t seed_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

std::string config_to_json(const qdi_expconfig* cfg) {
  size_t need = 0;
  QDI_CHECK(qdi_expconfig_to_json(cfg, nullptr, 0, &need));
  std::string out(need, '\0');
  QDI_CHECK(qdi_expconfig_to_json(cfg, out.data(), out.size(), &need));
  out.resize(need - 1);  // drop the terminator
  return out;
}

std::string discord_json(const qdi_discord_report& rep) {
  auto opt = [](double v, int defined) {
    return defined ? fmt(v) : std::string("null");
  };
  std::string out = "{";
  out += "\"d_a\":" + fmt(rep.d_a);
  out += ",\"d_b\":" + fmt(rep.d_b);
  out += ",\"q_a\":" + fmt(rep.q_a);
  out += ",\"q_b\":" + fmt(rep.q_b);
  out += ",\"v_a\":" + opt(rep.v_a, rep.v_a_defined);
  out += ",\"v_b\":" + opt(rep.v_b, rep.v_b_defined);
  out += ",\"q_s\":" + fmt(rep.q_s);
  out += "}\n";
  return out;
}

std::string moment_summary_json(const char* name, const qdi_moment_estimate& est,
                                const std::string& config_json) {
  std::string out = "{";
  out += "\"moment\":\"" + std::string(name) + "\"";
  out += ",\"value\":" + fmt(est.value);
  out += ",\"std_error\":" + fmt(est.std_error);
  out += ",\"n_success\":" + fmt(est.n_success);
  out += ",\"n_total\":" + fmt(est.n_total);
  out += ",\"wall_config\":" + config_json;
  out += "}";
  return out;
}

struct AnalyzeArgs {
  std::string state_file;
  std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
  qdi_state* state = nullptr;
  QDI_CHECK(qdi_state_from_json(read_file(args.state_file).c_str(), &state));
  qdi_discord_report rep;
  QDI_CHECK(qdi_discord(state, &rep));
  qdi_state_free(state);

  const std::string json = discord_json(rep);
  std::fputs(json.c_str(), stdout);
  if (!args.out.empty()) {
    Manifest manifest("analyze", 0);
    manifest.set_config_json("{\"state_file\":\"" + json_escape(args.state_file) +
                             "\"}");
    write_file(args.out, json);
    manifest.add_output(args.out);
    manifest.write(args.out);
  }
  return 0;
}

struct SweepArgs {
  std::uint64_t count = 100000;
  std::uint64_t seed = 1;
  std::string out;
};

int run_sweep(const SweepArgs& args) {
  Manifest manifest("sweep", args.seed);
  manifest.set_config_json("{\"count\":" + fmt(args.count) +
                           ",\"seed\":" + fmt(args.seed) + "}");
  std::string csv = "d_a,q_a,v_a,d_b,q_b,purity\n";
  for (std::uint64_t i = 0; i < args.count; ++i) {
    qdi_state* state = nullptr;
    QDI_CHECK(qdi_random_state(args.seed, i, QDI_MEASURE_HILBERT_SCHMIDT, &state));
    qdi_discord_report rep;
    QDI_CHECK(qdi_discord(state, &rep));
    double purity = 0.0;
    QDI_CHECK(qdi_state_purity(state, &purity));
    qdi_state_free(state);
    csv += fmt(rep.d_a) + "," + fmt(rep.q_a) + ",";
    if (rep.v_a_defined) csv += fmt(rep.v_a);
    csv += "," + fmt(rep.d_b) + "," + fmt(rep.q_b) + "," + fmt(purity) + "\n";
  }
  write_file(args.out, csv);
  manifest.add_output(args.out);
  manifest.write(args.out);
  return 0;
}

struct SimulateArgs {
  std::string state_file;
  std::string config_file;
  std::string out;
  double eta = -1.0;
  double tau_ns = -1.0;
  std::string scheme;
  std::uint64_t iterations = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int run_simulate(const SimulateArgs& args) {
  qdi_state* state = nullptr;
  QDI_CHECK(qdi_state_from_json(read_file(args.state_file).c_str(), &state));

  qdi_expconfig* cfg = nullptr;
  if (!args.config_file.empty())
    QDI_CHECK(qdi_expconfig_from_json(read_file(args.config_file).c_str(), &cfg));
  else
    QDI_CHECK(qdi_expconfig_create(&cfg));
  if (args.eta >= 0.0) QDI_CHECK(qdi_expconfig_set_eta(cfg, args.eta));
  if (args.tau_ns >= 0.0) QDI_CHECK(qdi_expconfig_set_tau_ns(cfg, args.tau_ns));
  if (!args.scheme.empty())
    QDI_CHECK(qdi_expconfig_set_scheme(cfg, args.scheme == "det"
                                                ? QDI_SCHEME_DETERMINISTIC
                                                : QDI_SCHEME_PROBABILISTIC));
  if (args.iterations > 0)
    QDI_CHECK(qdi_expconfig_set_iterations(cfg, args.iterations));
  if (args.seed_set) QDI_CHECK(qdi_expconfig_set_seed(cfg, args.seed));

  const std::string config_json = config_to_json(cfg);
  Manifest manifest("simulate", args.seed_set ? args.seed : 0);
  manifest.set_config_json(config_json);

  double q = 0.0, q_err = 0.0;
  qdi_moment_estimate m1, m2;
  QDI_CHECK(qdi_estimate_q(state, cfg, &q, &q_err, &m1, &m2));
  qdi_expconfig_free(cfg);
  qdi_state_free(state);

  std::string json = "{";
  json += "\"m1\":" + moment_summary_json("m1", m1, config_json);
  json += ",\"m2\":" + moment_summary_json("m2", m2, config_json);
  json += ",\"q\":{\"value\":" + fmt(q) + ",\"std_error\":" + fmt(q_err) + "}";
  json += "}\n";
  std::fputs(json.c_str(), stdout);
  if (!args.out.empty()) {
    write_file(args.out, json);
    manifest.add_output(args.out);
    manifest.write(args.out);
  }
  return 0;
}

struct ThroughputArgs {
  std::vector<double> etas;
  std::uint64_t n_target = 1000;
  double tau_ns = -1.0;
  std::string scheme;
  bool strict = false;
  std::string out;
};

int run_throughput(const ThroughputArgs& args) {
  std::vector<double> grid = args.etas;
  if (grid.empty())
    for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
  for (double eta : grid)
    if (!(eta > 0.0 && eta <= 1.0))
      fail_msg(kExitUsage, "eta grid values must lie in (0, 1]");

  qdi_expconfig* cfg = nullptr;
  QDI_CHECK(qdi_expconfig_create(&cfg));
  if (args.tau_ns >= 0.0) QDI_CHECK(qdi_expconfig_set_tau_ns(cfg, args.tau_ns));
  if (!args.scheme.empty())
    QDI_CHECK(qdi_expconfig_set_scheme(cfg, args.scheme == "det"
                                                ? QDI_SCHEME_DETERMINISTIC
                                                : QDI_SCHEME_PROBABILISTIC));

  std::string csv =
      "eta,rate_m1_hz,rate_m2_hz_prob,rate_m2_hz_det,t_units_tau_m1,"
      "t_units_tau_m2\n";
  for (double eta : grid) {
    QDI_CHECK(qdi_expconfig_set_eta(cfg, eta));
    qdi_throughput_report rep;
    QDI_CHECK(qdi_throughput(cfg, args.n_target, args.strict ? 1 : 0, &rep));
    csv += fmt(eta) + "," + fmt(rep.rate_m1_hz) + "," + fmt(rep.rate_m2_hz_prob) +
           "," + fmt(rep.rate_m2_hz_det) + "," + fmt(rep.t_m1_tau) + "," +
           fmt(rep.t_m2_tau) + "\n";
  }

  std::string grid_json = "[";
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid_json += (i ? "," : "") + fmt(grid[i]);
  grid_json += "]";
  std::string config_json = config_to_json(cfg);
  qdi_expconfig_free(cfg);

  Manifest manifest("throughput", 0);
  manifest.set_config_json("{\"eta_grid\":" + grid_json +
                           ",\"n_target\":" + fmt(args.n_target) +
                           ",\"strict_delay_factor\":" +
                           (args.strict ? "true" : "false") +
                           ",\"experiment\":" + config_json + "}");
  write_file(args.out, csv);
  manifest.add_output(args.out);
  manifest.write(args.out);
  return 0;
}

struct RobustnessArgs {
  std::uint64_t n_pairs = 10000;
  double f_min = 0.90;
  std::uint64_t seed = 1;
  std::string out;
  std::string summary_out;
};

int run_robustness(const RobustnessArgs& args) {
  qdi_robustness_result* result = nullptr;
  QDI_CHECK(qdi_robustness_sweep(args.n_pairs, args.f_min, args.seed, &result));

  std::string csv = "q_exact,q_prime,fidelity\n";
  for (std::uint64_t i = 0; i < args.n_pairs; ++i) {
    double q_exact = 0.0, q_prime = 0.0, f = 0.0;
    QDI_CHECK(qdi_robustness_row(result, i, &q_exact, &q_prime, &f));
    csv += fmt(q_exact) + "," + fmt(q_prime) + "," + fmt(f) + "\n";
  }
  std::uint64_t n_pairs = 0, clamped = 0;
  double f_min = 0.0, max_delta = 0.0;
  QDI_CHECK(qdi_robustness_summary(result, &n_pairs, &f_min, &max_delta, &clamped));
  qdi_robustness_free(result);

  std::string summary = "{";
  summary += "\"n_pairs\":" + fmt(n_pairs);
  summary += ",\"f_min\":" + fmt(f_min);
  summary += ",\"max_delta\":" + fmt(max_delta);
  summary += ",\"clamped_count\":" + fmt(clamped);
  summary += "}\n";

  const std::string summary_path =
      args.summary_out.empty() ? args.out + ".summary.json" : args.summary_out;

  Manifest manifest("robustness", args.seed);
  manifest.set_config_json("{\"n_pairs\":" + fmt(args.n_pairs) +
                           ",\"f_min\":" + fmt(args.f_min) +
                           ",\"seed\":" + fmt(args.seed) + "}");
  write_file(args.out, csv);
  manifest.add_output(args.out);
  write_file(summary_path, summary);
  manifest.add_output(summary_path);
  manifest.write(args.out);
  std::fputs(summary.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-qubit discord indicators and coincidence-experiment "
               "simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qdi_version()));

  AnalyzeArgs analyze;
  auto* cmd_analyze =
      app.add_subcommand("analyze", "discord report for a state file");
  cmd_analyze->add_option("state_file", analyze.state_file, "state JSON file")
      ->required();
  cmd_analyze->add_option("--out", analyze.out, "write the report JSON here");

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand(
      "sweep", "indicator scatter over random states (CSV)");
  cmd_sweep->add_option("--count", sweep.count, "number of states")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sweep->add_option("--seed", sweep.seed, "ensemble seed")
      ->capture_default_str();
  cmd_sweep->add_option("--out", sweep.out, "output CSV path")->required();

  SimulateArgs simulate;
  auto* cmd_simulate = app.add_subcommand(
      "simulate", "Monte Carlo moment and Q estimation for a state file");
  cmd_simulate->add_option("state_file", simulate.state_file, "state JSON file")
      ->required();
  cmd_simulate->add_option("--config", simulate.config_file,
                           "experiment config JSON file");
  cmd_simulate->add_option("--eta", simulate.eta, "detector efficiency override")
      ->check(CLI::Range(0.0, 1.0));
  cmd_simulate->add_option("--tau-ns", simulate.tau_ns, "pulse period override");
  cmd_simulate->add_option("--scheme", simulate.scheme,
                           "delay scheme override")
      ->check(CLI::IsMember({"det", "prob"}));
  cmd_simulate->add_option("--iterations", simulate.iterations,
                           "iteration count override")
      ->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--seed", simulate.seed, "seed override")
      ->trigger_on_parse()
      ->each([&](const std::string&) { simulate.seed_set = true; });
  cmd_simulate->add_option("--out", simulate.out, "write the summary JSON here");

  ThroughputArgs throughput;
  auto* cmd_throughput = app.add_subcommand(
      "throughput", "analytic event-rate curve over a detector-efficiency grid");
  cmd_throughput->add_option("--etas", throughput.etas,
                             "efficiency grid (default 0.05..1.00)");
  cmd_throughput->add_option("--n-target", throughput.n_target,
                             "events for the time columns")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_throughput->add_option("--tau-ns", throughput.tau_ns, "pulse period");
  cmd_throughput->add_option("--scheme", throughput.scheme,
                             "delay scheme for the time columns")
      ->check(CLI::IsMember({"det", "prob"}));
  cmd_throughput->add_flag("--strict-delay-factor", throughput.strict,
                           "include the passive-delay success factor in the "
                           "probabilistic four-copy rate");
  cmd_throughput->add_option("--out", throughput.out, "output CSV path")
      ->required();

  RobustnessArgs robustness;
  auto* cmd_robustness = app.add_subcommand(
      "robustness", "source-mismatch sweep (scatter CSV + summary JSON)");
  cmd_robustness->add_option("--n-pairs", robustness.n_pairs, "pair count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_robustness->add_option("--f-min", robustness.f_min,
                             "fidelity floor of the sampled pairs")
      ->capture_default_str();
  cmd_robustness->add_option("--seed", robustness.seed, "ensemble seed")
      ->capture_default_str();
  cmd_robustness->add_option("--out", robustness.out, "scatter CSV path")
      ->required();
  cmd_robustness->add_option("--summary", robustness.summary_out,
                             "summary JSON path (default <out>.summary.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (cmd_analyze->parsed()) return run_analyze(analyze);
  if (cmd_sweep->parsed()) return run_sweep(sweep);
  if (cmd_simulate->parsed()) return run_simulate(simulate);
  if (cmd_throughput->parsed()) return run_throughput(throughput);
  if (cmd_robustness->parsed()) return run_robustness(robustness);
  return kExitUsage;
}

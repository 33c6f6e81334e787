#include "qdi/serialize.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

#include "qdi/errors.hpp"

namespace qdi {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  raise(ErrorKind::Parse, what);
}

json parse_object(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) parse_fail(std::string(what) + ": malformed JSON");
  if (!j.is_object()) parse_fail(std::string(what) + ": expected a JSON object");
  return j;
}

double number_field(const json& j, const char* key) {
  if (!j.is_number()) parse_fail(std::string(key) + " must be a number");
  return j.get<double>();
}

template <int N>
void read_vector(const json& j, const char* key, Eigen::Matrix<double, N, 1>& out) {
  if (!j.is_array() || j.size() != N)
    parse_fail(std::string(key) + " must be an array of " + std::to_string(N) +
               " numbers");
  for (int i = 0; i < N; ++i) out(i) = number_field(j[static_cast<std::size_t>(i)], key);
}

template <int R, int C>
void read_matrix(const json& j, const char* key,
                 Eigen::Matrix<double, R, C>& out) {
  if (!j.is_array() || j.size() != R)
    parse_fail(std::string(key) + " must be a " + std::to_string(R) + "x" +
               std::to_string(C) + " array");
  for (int r = 0; r < R; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != C)
      parse_fail(std::string(key) + " must be a " + std::to_string(R) + "x" +
                 std::to_string(C) + " array");
    for (int c = 0; c < C; ++c)
      out(r, c) = number_field(row[static_cast<std::size_t>(c)], key);
  }
}

std::string matrix_rows_json(const Eigen::Matrix4d& m) {
  std::string out = "[";
  for (int r = 0; r < 4; ++r) {
    out += (r ? ",[" : "[");
    for (int c = 0; c < 4; ++c) {
      if (c) out += ",";
      out += format_double(m(r, c));
    }
    out += "]";
  }
  out += "]";
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) raise(ErrorKind::Internal, "non-finite number in output");
  std::array<char, 40> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

TwoQubitState state_from_json(const std::string& text) {
  const json j = parse_object(text, "state file");
  const bool has_rho = j.contains("rho_re") || j.contains("rho_im");
  const bool has_bloch = j.contains("bloch");
  if (has_rho == has_bloch)
    parse_fail("state file must carry exactly one of rho_re/rho_im or bloch");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "rho_re" && key != "rho_im" && key != "bloch")
      parse_fail("unknown state file key: " + key);
  }

  if (has_rho) {
    if (!j.contains("rho_re") || !j.contains("rho_im"))
      parse_fail("rho_re and rho_im must both be present");
    Eigen::Matrix4d re, im;
    read_matrix<4, 4>(j["rho_re"], "rho_re", re);
    read_matrix<4, 4>(j["rho_im"], "rho_im", im);
    Mat4 rho;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) rho(r, c) = Complex{re(r, c), im(r, c)};
    return TwoQubitState::from_matrix(rho);
  }

  const json& b = j["bloch"];
  if (!b.is_object()) parse_fail("bloch must be an object");
  for (const auto& [key, value] : b.items()) {
    (void)value;
    if (key != "x" && key != "y" && key != "T")
      parse_fail("unknown bloch key: " + key);
  }
  if (!b.contains("x") || !b.contains("y") || !b.contains("T"))
    parse_fail("bloch must carry x, y and T");
  BlochForm form;
  read_vector<3>(b["x"], "bloch.x", form.x);
  read_vector<3>(b["y"], "bloch.y", form.y);
  read_matrix<3, 3>(b["T"], "bloch.T", form.t);
  return TwoQubitState::from_bloch(form);
}

std::string state_to_json(const TwoQubitState& s) {
  Eigen::Matrix4d re, im;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      re(r, c) = s.rho()(r, c).real();
      im(r, c) = s.rho()(r, c).imag();
    }
  }
  return "{\"rho_re\":" + matrix_rows_json(re) +
         ",\"rho_im\":" + matrix_rows_json(im) + "}\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const json j = parse_object(text, "config file");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "eta") {
      cfg.eta = number_field(value, "eta");
    } else if (key == "tau_ns") {
      cfg.tau_ns = number_field(value, "tau_ns");
    } else if (key == "delay_scheme") {
      if (!value.is_string()) parse_fail("delay_scheme must be a string");
      const std::string name = value.get<std::string>();
      if (name == "deterministic" || name == "det")
        cfg.delay_scheme = DelayScheme::Deterministic;
      else if (name == "probabilistic" || name == "prob")
        cfg.delay_scheme = DelayScheme::Probabilistic;
      else
        parse_fail("delay_scheme must be deterministic or probabilistic");
    } else if (key == "delay_success_p") {
      cfg.delay_success_p = number_field(value, "delay_success_p");
    } else if (key == "pair_gen_prob") {
      cfg.pair_gen_prob = number_field(value, "pair_gen_prob");
    } else if (key == "two_pair_prob") {
      cfg.two_pair_prob = number_field(value, "two_pair_prob");
    } else if (key == "pulse_pick_factor") {
      cfg.pulse_pick_factor = number_field(value, "pulse_pick_factor");
    } else if (key == "iterations") {
      if (!value.is_number_unsigned())
        parse_fail("iterations must be a non-negative integer");
      cfg.iterations = value.get<std::uint64_t>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned())
        parse_fail("seed must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else {
      parse_fail("unknown config key: " + key);
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    parse_fail(std::string("config file: ") + e.what());
  }
  return cfg;
}

std::string delay_scheme_name(DelayScheme scheme) {
  return scheme == DelayScheme::Deterministic ? "deterministic"
                                              : "probabilistic";
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  std::string out = "{";
  out += "\"eta\":" + format_double(cfg.eta);
  out += ",\"tau_ns\":" + format_double(cfg.tau_ns);
  out += ",\"delay_scheme\":\"" + delay_scheme_name(cfg.delay_scheme) + "\"";
  out += ",\"delay_success_p\":" + format_double(cfg.delay_success_p);
  out += ",\"pair_gen_prob\":" + format_double(cfg.pair_gen_prob);
  out += ",\"two_pair_prob\":" + format_double(cfg.two_pair_prob);
  out += ",\"pulse_pick_factor\":" + format_double(cfg.pulse_pick_factor);
  out += ",\"iterations\":" + std::to_string(cfg.iterations);
  out += ",\"seed\":" + std::to_string(cfg.seed);
  out += "}";
  return out;
}

std::string discord_report_to_json(const DiscordReport& rep) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("null");
  };
  std::string out = "{";
  out += "\"d_a\":" + format_double(rep.d_a);
  out += ",\"d_b\":" + format_double(rep.d_b);
  out += ",\"q_a\":" + format_double(rep.q_a);
  out += ",\"q_b\":" + format_double(rep.q_b);
  out += ",\"v_a\":" + opt(rep.v_a);
  out += ",\"v_b\":" + opt(rep.v_b);
  out += ",\"q_s\":" + format_double(rep.q_s);
  out += "}";
  return out;
}

}  // namespace qdi

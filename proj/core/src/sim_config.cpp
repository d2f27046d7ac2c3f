#include "pnc/error.hpp"
#include "pnc/harness.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifndef PNC_DEFAULT_CODES_DIR
#define PNC_DEFAULT_CODES_DIR "."
#endif

namespace pnc {

namespace {

using json = nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_object(const std::string& text, const std::set<std::string>& known) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown config key: " + item.key());
    }
  }
  return j;
}

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) {
    return;
  }
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for ") + key + ": " + e.what());
  }
}

}  // namespace

std::string to_string(ReceiverKind kind) {
  switch (kind) {
    case ReceiverKind::fg: return "fg";
    case ReceiverKind::vb: return "vb";
    case ReceiverKind::bps: return "bps";
    case ReceiverKind::ideal: return "ideal";
  }
  return "?";
}

ReceiverKind parse_receiver(const std::string& name) {
  if (name == "fg") return ReceiverKind::fg;
  if (name == "vb") return ReceiverKind::vb;
  if (name == "bps") return ReceiverKind::bps;
  if (name == "ideal") return ReceiverKind::ideal;
  throw ConfigError("unknown receiver: " + name);
}

void SimConfig::validate() const {
  if (channels < 1) throw ConfigError("channels must be positive");
  if (codewords_per_channel < 1) throw ConfigError("codewords_per_channel must be positive");
  if (!(pilot_rate >= 0.0 && pilot_rate < 1.0)) throw InvalidRate("pilot_rate must lie in [0, 1)");
  if (linewidth_symbol < 0.0 || drift_ratio < 0.0) {
    throw ConfigError("linewidth_symbol and drift_ratio must be nonnegative");
  }
  if (ebn0_db.empty()) throw ConfigError("ebn0_db must list at least one point");
  if (outer_iterations < 1 || decoder_iterations < 1 || min_frame_errors < 1 || max_frames < 1) {
    throw ConfigError("iteration and frame counts must be positive");
  }
  if (threads < 1) throw ConfigError("threads must be positive");
  if (bps_test_phases < 0 || bps_window_half_length < 0) {
    throw ConfigError("BPS parameters must be nonnegative");
  }
  if (order != 4 && order != 16 && order != 64 && order != 256) {
    throw UnsupportedOrder("order must be 4, 16, 64 or 256");
  }
}

SimConfig parse_sim_config(const std::string& json_text) {
  static const std::set<std::string> known = {
      "channels", "order", "pilot_rate", "code", "codewords_per_channel", "linewidth_symbol", "drift_ratio", "ebn0_db",
      "receiver", "outer_iterations", "decoder_iterations", "min_frame_errors", "max_frames",
      "seed", "joint", "threads", "report_wall_time", "bps_test_phases", "bps_window_half_length"};
  const json j = parse_object(json_text, known);
  SimConfig cfg;
  read(j, "channels", cfg.channels);
  read(j, "order", cfg.order);
  read(j, "pilot_rate", cfg.pilot_rate);
  read(j, "code", cfg.code);
  read(j, "codewords_per_channel", cfg.codewords_per_channel);
  read(j, "linewidth_symbol", cfg.linewidth_symbol);
  read(j, "drift_ratio", cfg.drift_ratio);
  read(j, "ebn0_db", cfg.ebn0_db);
  std::string receiver = to_string(cfg.receiver);
  read(j, "receiver", receiver);
  cfg.receiver = parse_receiver(receiver);
  read(j, "outer_iterations", cfg.outer_iterations);
  read(j, "decoder_iterations", cfg.decoder_iterations);
  read(j, "min_frame_errors", cfg.min_frame_errors);
  read(j, "max_frames", cfg.max_frames);
  read(j, "seed", cfg.master_seed);
  read(j, "joint", cfg.joint);
  read(j, "threads", cfg.threads);
  read(j, "report_wall_time", cfg.report_wall_time);
  read(j, "bps_test_phases", cfg.bps_test_phases);
  read(j, "bps_window_half_length", cfg.bps_window_half_length);
  cfg.validate();
  return cfg;
}

SimConfig load_sim_config(const std::string& path) { return parse_sim_config(slurp(path)); }

MseStudy parse_mse_study(const std::string& json_text) {
  static const std::set<std::string> known = {"linewidths_hz", "baud",      "ebn0_db",
                                              "samples",       "order",     "code_rate",
                                              "pilot_rate",    "seed"};
  const json j = parse_object(json_text, known);
  MseStudy study;
  read(j, "linewidths_hz", study.linewidths_hz);
  read(j, "baud", study.baud);
  if (j.contains("ebn0_db")) {
    study.ebn0_db.clear();
    if (!j["ebn0_db"].is_array()) {
      throw ConfigError("ebn0_db must be an array (null entries mean no AWGN)");
    }
    for (const auto& v : j["ebn0_db"]) {
      if (v.is_null()) {
        study.ebn0_db.emplace_back(std::nullopt);
      } else if (v.is_number()) {
        study.ebn0_db.emplace_back(v.get<double>());
      } else {
        throw ConfigError("ebn0_db entries must be numbers or null");
      }
    }
  }
  read(j, "samples", study.samples);
  read(j, "order", study.order);
  read(j, "code_rate", study.code_rate);
  read(j, "pilot_rate", study.pilot_rate);
  read(j, "seed", study.seed);
  if (study.linewidths_hz.empty() || study.ebn0_db.empty()) {
    throw ConfigError("linewidths_hz and ebn0_db must be nonempty");
  }
  if (study.samples < 1 || !(study.baud > 0.0)) {
    throw ConfigError("samples and baud must be positive");
  }
  return study;
}

MseStudy load_mse_study(const std::string& path) { return parse_mse_study(slurp(path)); }

std::string codes_directory() {
  if (const char* env = std::getenv("PNC_CODES_DIR"); env && *env) {
    return env;
  }
  return PNC_DEFAULT_CODES_DIR;
}

LdpcCode load_code(const std::string& id) {
  namespace fs = std::filesystem;
  if (id == "hamming_7_4") {
    return hamming_7_4();
  }
  if (id == "hamming_7_4_full") {
    return hamming_7_4_full();
  }
  if (fs::exists(id) && fs::is_regular_file(id)) {
    return LdpcCode::from_alist_file(id);
  }
  const fs::path dir = codes_directory();
  for (const fs::path& candidate : {dir / id, dir / (id + ".alist")}) {
    if (fs::exists(candidate)) {
      return LdpcCode::from_alist_file(candidate.string());
    }
  }
  throw ConfigError("unknown code: " + id + " (looked in " + dir.string() + ")");
}

}  // namespace pnc

#pragma once

#include "pnc/framing.hpp"
#include "pnc/ldpc.hpp"
#include "pnc/llr.hpp"
#include "pnc/model.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pnc {

enum class ReceiverKind { fg, vb, bps, ideal };

std::string to_string(ReceiverKind kind);
ReceiverKind parse_receiver(const std::string& name);

struct SimConfig {
  int channels = 4;
  int order = 16;
  double pilot_rate = 0.01;
  std::string code = "peg_1008_3_6";
  int codewords_per_channel = 1;  // codewords carried back to back in each channel's frame
  double linewidth_symbol = 5e-5;  // laser linewidth times symbol duration
  double drift_ratio = 1e-3;       // var_drift / var_lpn
  std::vector<double> ebn0_db;
  ReceiverKind receiver = ReceiverKind::fg;
  int outer_iterations = 2;
  int decoder_iterations = 50;
  int min_frame_errors = 100;
  int max_frames = 10000;
  std::uint64_t master_seed = 1;
  bool joint = true;
  int threads = 1;
  bool report_wall_time = true;
  int bps_test_phases = 0;  // 0 picks the default for the constellation
  int bps_window_half_length = 40;

  void validate() const;
};

SimConfig load_sim_config(const std::string& path);
SimConfig parse_sim_config(const std::string& json_text);

/// Resolves a code id: "hamming_7_4", a file name under the codes directory
/// (with or without .alist), or a path to an alist file.
LdpcCode load_code(const std::string& id);
std::string codes_directory();

double ebn0_to_noise_variance(double ebn0_db, const Constellation& c, double code_rate,
                              double pilot_rate);
double noise_variance_to_ebn0(double sigma2, const Constellation& c, double code_rate,
                              double pilot_rate);

/// Everything a trial needs that does not change between trials.
struct TrialSetup {
  SimConfig config;
  Constellation constellation;
  LdpcCode code;
  FrameLayout layout;
  SymMatrix q;

  explicit TrialSetup(const SimConfig& cfg);
  TrialSetup(const SimConfig& cfg, LdpcCode code);
  double noise_variance(double ebn0_db) const;
};

struct TrialResult {
  long long bits = 0;
  long long bit_errors = 0;
  int frame_errors = 0;      // 0 or 1
  int codeword_errors = 0;   // out of D
};

/// LLRs handed back to the phase estimator after a decode: extrinsic for
/// FG-PNC, a-posteriori for VB-PNC, clamped to +-kLlrClamp.
std::vector<double> decoder_feedback(ReceiverKind kind, const LlrFrame& frame);

/// One frame: D codewords through phase noise and AWGN, then the configured
/// receiver. Channel realizations depend only on the seed and the layout.
TrialResult run_coded_trial(const TrialSetup& setup, double ebn0_db, std::uint64_t seed);

struct PointResult {
  double ebn0_db = 0.0;
  long long frames = 0;
  long long bits = 0;
  long long bit_errors = 0;
  long long frame_errors = 0;
  long long codeword_errors = 0;
  double seconds = 0.0;
  bool hit_max_frames = false;
  bool interrupted = false;

  double ber() const { return bits > 0 ? static_cast<double>(bit_errors) / bits : 0.0; }
  double ber_ci() const;
};

struct SweepResult {
  std::string receiver;
  int outer_iterations = 0;
  std::vector<PointResult> points;
};

/// Asks running sweeps to stop after the current batch. Safe to call from a
/// signal handler.
void request_stop();
bool stop_requested();

/// Seed of trial t at Eb/N0 point p.
std::uint64_t trial_seed(std::uint64_t master, std::size_t point, std::uint64_t trial);

/// Runs trials in index order until min_frame_errors or max_frames. The
/// result does not depend on the thread count.
PointResult run_point(const TrialSetup& setup, std::size_t point_index, int threads);

SweepResult run_sweep(const SimConfig& config);
/// on_point is called after each completed point, e.g. to flush CSV rows.
SweepResult run_sweep(const TrialSetup& setup, const std::string& label = "",
                      const std::function<void(const SweepResult&)>& on_point = {});

/// Joint and per-channel processing on identical trials.
std::vector<SweepResult> run_comparison(
    const SimConfig& config, const std::function<void(const SweepResult&)>& on_point = {});

void write_sweep_header(std::ostream& out);
void write_sweep_rows(std::ostream& out, const SweepResult& result, bool wall_time = true);
void write_point_row(std::ostream& out, const SweepResult& result, const PointResult& point,
                     bool wall_time = true);

struct MseStudy {
  std::vector<double> linewidths_hz;
  double baud = 20e9;
  std::vector<std::optional<double>> ebn0_db;  // nullopt: no AWGN
  long long samples = 1000000;
  int order = 16;
  double code_rate = 1.0;
  double pilot_rate = 0.0;
  std::uint64_t seed = 1;
};

struct MseRow {
  double linewidth_hz = 0.0;
  std::optional<double> ebn0_db;
  long long samples = 0;
  double mse = 0.0;
};

std::vector<MseRow> run_linearization_mse(const MseStudy& study);
MseStudy load_mse_study(const std::string& path);
MseStudy parse_mse_study(const std::string& json_text);

void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows);

}  // namespace pnc

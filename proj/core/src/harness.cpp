#include "pnc/harness.hpp"

#include "pnc/channel.hpp"
#include "pnc/eks.hpp"
#include "pnc/error.hpp"
#include "pnc/llr.hpp"
#include "pnc/receiver_bps.hpp"
#include "pnc/receiver_fg.hpp"
#include "pnc/receiver_vb.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <ostream>
#include <thread>

namespace pnc {

namespace {

std::atomic<bool> g_stop{false};

void check_rates(double code_rate, double pilot_rate) {
  if (!(code_rate > 0.0 && code_rate <= 1.0)) {
    throw InvalidRate("code rate must lie in (0, 1]");
  }
  if (!(pilot_rate >= 0.0 && pilot_rate < 1.0)) {
    throw InvalidRate("pilot rate must lie in [0, 1)");
  }
}

LdpcCode checked_code(const SimConfig& cfg) {
  cfg.validate();
  return load_code(cfg.code);
}

}  // namespace

double ebn0_to_noise_variance(double ebn0_db, const Constellation& c, double code_rate,
                              double pilot_rate) {
  check_rates(code_rate, pilot_rate);
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  return c.energy() / (2.0 * ebn0 * code_rate * c.bits_per_symbol() * (1.0 - pilot_rate));
}

double noise_variance_to_ebn0(double sigma2, const Constellation& c, double code_rate,
                              double pilot_rate) {
  check_rates(code_rate, pilot_rate);
  const double ebn0 =
      c.energy() / (2.0 * sigma2 * code_rate * c.bits_per_symbol() * (1.0 - pilot_rate));
  return 10.0 * std::log10(ebn0);
}

TrialSetup::TrialSetup(const SimConfig& cfg) : TrialSetup(cfg, checked_code(cfg)) {}

TrialSetup::TrialSetup(const SimConfig& cfg, LdpcCode code_)
    : config(cfg), constellation(make_qam(cfg.order)), code(std::move(code_)) {
  config.validate();
  const int rm = constellation.bits_per_symbol();
  if (code.length() % rm != 0) {
    throw LengthMismatch("code length is not a multiple of the bits per symbol");
  }
  // The genie receiver needs no pilots; its frame carries data only.
  const double rp = config.receiver == ReceiverKind::ideal ? 0.0 : config.pilot_rate;
  layout = make_frame_layout(config.channels, config.codewords_per_channel * code.length() / rm, rp);
  const double var_lpn = laser_phase_variance(config.linewidth_symbol);
  q = build_covariance(var_lpn, var_lpn * config.drift_ratio, config.channels);
}

double TrialSetup::noise_variance(double ebn0_db) const {
  return ebn0_to_noise_variance(ebn0_db, constellation, code.rate(), layout.pilot_fraction());
}

std::vector<double> decoder_feedback(ReceiverKind kind, const LlrFrame& frame) {
  // FG passes the extrinsic part back, VB the full a-posteriori belief.
  std::vector<double> out = kind == ReceiverKind::fg ? frame.extrinsic() : frame.posterior;
  for (double& l : out) {
    l = std::clamp(l, -kLlrClamp, kLlrClamp);
  }
  return out;
}

TrialResult run_coded_trial(const TrialSetup& setup, double ebn0_db, std::uint64_t seed) {
  const SimConfig& cfg = setup.config;
  const Constellation& c = setup.constellation;
  const FrameLayout& layout = setup.layout;
  const LdpcCode& code = setup.code;
  const int channels = cfg.channels;

  const int per = cfg.codewords_per_channel;
  const auto n = static_cast<std::size_t>(code.length());

  Rng rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  // info[i * per + w] is codeword w of channel i; a channel's codewords are
  // concatenated in time order.
  std::vector<Bits> info(static_cast<std::size_t>(channels * per));
  std::vector<Bits> words(static_cast<std::size_t>(channels));
  for (int i = 0; i < channels; ++i) {
    for (int w = 0; w < per; ++w) {
      auto& b = info[static_cast<std::size_t>(i * per + w)];
      b.resize(static_cast<std::size_t>(code.info_length()));
      for (auto& bit : b) {
        bit = static_cast<std::uint8_t>(coin(rng));
      }
      const Bits word = code.encode(b);
      words[static_cast<std::size_t>(i)].insert(words[static_cast<std::size_t>(i)].end(), word.begin(), word.end());
    }
  }
  const PilotGrid pilots = draw_pilots(layout, c, rng);
  const ComplexGrid s = map_frame(words, c, layout, pilots);

  const double sigma2 = setup.noise_variance(ebn0_db);
  const CovarianceSpec cov(setup.q, std::vector<double>(static_cast<std::size_t>(channels), sigma2));
  const PhaseTrajectory theta = generate_phase_walk(setup.q, layout.length, rng);
  const ComplexGrid r = apply_channel(s, theta, cov, rng);

  std::vector<Bits> decoded(static_cast<std::size_t>(channels));
  LdpcDecoder decoder(code);
  // Decodes every codeword of one channel; returns the concatenated
  // a-posteriori LLRs and leaves the hard decisions in decoded[i].
  auto decode_channel = [&](int i, const std::vector<double>& llr) {
    std::vector<double> posterior(llr.size());
    Bits& hard = decoded[static_cast<std::size_t>(i)];
    hard.resize(llr.size());
    for (int w = 0; w < per; ++w) {
      const std::size_t off = static_cast<std::size_t>(w) * n;
      DecodeResult res =
          decoder.decode(std::span<const double>(llr).subspan(off, n), cfg.decoder_iterations);
      std::copy(res.posterior.begin(), res.posterior.end(), posterior.begin() + static_cast<std::ptrdiff_t>(off));
      std::copy(res.hard.begin(), res.hard.end(), hard.begin() + static_cast<std::ptrdiff_t>(off));
    }
    return posterior;
  };

  switch (cfg.receiver) {
    case ReceiverKind::fg:
    case ReceiverKind::vb: {
      const bool fg = cfg.receiver == ReceiverKind::fg;
      const CovarianceSpec rx_cov = cfg.joint ? cov : cov.per_channel();
      SymbolPmfGrid prior = SymbolPmfGrid::uniform(channels, layout.length, c.size());
      for (int it = 0; it < cfg.outer_iterations; ++it) {
        const bool last = it + 1 == cfg.outer_iterations;
        const IterationOutput out = fg ? fg_pnc_iteration(r, prior, rx_cov, pilots, c)
                                       : vb_pnc_iteration(r, prior, rx_cov, pilots, c);
        for (int i = 0; i < channels; ++i) {
          LlrFrame frame;
          frame.input = gather_llrs(out.likelihood, i, layout, c);
          frame.posterior = decode_channel(i, frame.input);
          if (last) {
            continue;
          }
          scatter_llrs(decoder_feedback(cfg.receiver, frame), i, layout, c, prior);
        }
      }
      break;
    }
    case ReceiverKind::bps:
    case ReceiverKind::ideal: {
      BpsConfig bps = default_bps_config(cfg.order);
      if (cfg.bps_test_phases > 0) {
        bps.test_phases = cfg.bps_test_phases;
      }
      bps.window_half_length = cfg.bps_window_half_length;
      const auto bits = static_cast<std::size_t>(c.bits_per_symbol());
      for (int i = 0; i < channels; ++i) {
        const auto row = r.row(i);
        std::vector<double> phase;
        if (cfg.receiver == ReceiverKind::bps) {
          phase = bps_estimate(row, c, bps, theta.theta(i, 0));
        } else {
          const auto truth = theta.theta.row(i);
          phase.assign(truth.begin(), truth.end());
        }
        const EddOutput edd = edd_detect(row, phase, c, sigma2);
        const auto& slots = layout.data_slots[static_cast<std::size_t>(i)];
        std::vector<double> llr(slots.size() * bits);
        for (std::size_t t = 0; t < slots.size(); ++t) {
          std::copy_n(edd.llrs.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(slots[t]) * bits),
                      bits, llr.begin() + static_cast<std::ptrdiff_t>(t * bits));
        }
        decode_channel(i, llr);
      }
      break;
    }
  }

  TrialResult result;
  for (int i = 0; i < channels; ++i) {
    const Bits& hard = decoded[static_cast<std::size_t>(i)];
    for (int w = 0; w < per; ++w) {
      const auto off = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(w) * n);
      const Bits est = code.extract_info(std::span<const std::uint8_t>(hard.data() + off, n));
      const Bits& truth = info[static_cast<std::size_t>(i * per + w)];
      long long errs = 0;
      for (std::size_t t = 0; t < truth.size(); ++t) {
        errs += est[t] != truth[t];
      }
      result.bits += static_cast<long long>(truth.size());
      result.bit_errors += errs;
      result.codeword_errors += errs > 0;
    }
  }
  result.frame_errors = result.codeword_errors > 0;
  return result;
}

double PointResult::ber_ci() const {
  return bits > 0 ? 1.96 * std::sqrt(ber() / static_cast<double>(bits)) : 0.0;
}

void request_stop() { g_stop.store(true); }
bool stop_requested() { return g_stop.load(); }

std::uint64_t trial_seed(std::uint64_t master, std::size_t point, std::uint64_t trial) {
  return derive_seed(master, static_cast<std::uint64_t>(point), trial);
}

PointResult run_point(const TrialSetup& setup, std::size_t point_index, int threads) {
  const SimConfig& cfg = setup.config;
  const double ebn0 = cfg.ebn0_db.at(point_index);
  const auto t0 = std::chrono::steady_clock::now();
  threads = std::max(1, threads);

  PointResult acc;
  acc.ebn0_db = ebn0;
  long long next = 0;
  bool done = false;
  const long long batch = 4LL * threads;
  while (!done) {
    if (stop_requested()) {
      acc.interrupted = true;
      break;
    }
    const long long count = std::min<long long>(batch, cfg.max_frames - next);
    std::vector<TrialResult> results(static_cast<std::size_t>(count));
    auto work = [&](long long j) {
      results[static_cast<std::size_t>(j)] = run_coded_trial(
          setup, ebn0, trial_seed(cfg.master_seed, point_index, static_cast<std::uint64_t>(next + j)));
    };
    if (threads == 1 || count == 1) {
      for (long long j = 0; j < count; ++j) {
        work(j);
      }
    } else {
      std::atomic<long long> cursor{0};
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (long long j = cursor++; j < count; j = cursor++) {
              work(j);
            }
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) {
        t.join();
      }
      for (auto& e : errors) {
        if (e) {
          std::rethrow_exception(e);
        }
      }
    }
    // Accumulate in trial order and stop at the first trial meeting the
    // target, so extra trials computed in the batch never leak in.
    for (const TrialResult& tr : results) {
      acc.frames += 1;
      acc.bits += tr.bits;
      acc.bit_errors += tr.bit_errors;
      acc.frame_errors += tr.frame_errors;
      acc.codeword_errors += tr.codeword_errors;
      if (acc.frame_errors >= cfg.min_frame_errors) {
        done = true;
        break;
      }
      if (acc.frames >= cfg.max_frames) {
        acc.hit_max_frames = true;
        done = true;
        break;
      }
    }
    next += count;
  }
  acc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return acc;
}

SweepResult run_sweep(const SimConfig& config) { return run_sweep(TrialSetup(config)); }

SweepResult run_sweep(const TrialSetup& setup, const std::string& label,
                      const std::function<void(const SweepResult&)>& on_point) {
  SweepResult out;
  out.receiver = label.empty() ? to_string(setup.config.receiver) : label;
  out.outer_iterations = setup.config.outer_iterations;
  for (std::size_t p = 0; p < setup.config.ebn0_db.size(); ++p) {
    out.points.push_back(run_point(setup, p, setup.config.threads));
    if (on_point) {
      on_point(out);
    }
    if (out.points.back().interrupted) {
      break;
    }
  }
  return out;
}

std::vector<SweepResult> run_comparison(const SimConfig& config,
                                        const std::function<void(const SweepResult&)>& on_point) {
  SimConfig joint = config;
  joint.joint = true;
  SimConfig separate = config;
  separate.joint = false;
  const TrialSetup a(joint);
  const TrialSetup b(separate, a.code);
  const std::string name = to_string(config.receiver);
  std::vector<SweepResult> out;
  out.push_back(run_sweep(a, name + "_joint", on_point));
  if (!stop_requested()) {
    out.push_back(run_sweep(b, name + "_per_channel", on_point));
  }
  return out;
}

void write_sweep_header(std::ostream& out) {
  out << "ebn0_db,receiver,outer_iters,frames,bit_errors,frame_errors,ber,ber_ci,seconds\n";
}

void write_point_row(std::ostream& out, const SweepResult& result, const PointResult& p,
                     bool wall_time) {
  char line[512];
  std::snprintf(line, sizeof line, "%.4f,%s,%d,%lld,%lld,%lld,%.6e,%.6e,%.3f\n", p.ebn0_db,
                result.receiver.c_str(), result.outer_iterations, p.frames, p.bit_errors,
                p.frame_errors, p.ber(), p.ber_ci(), wall_time ? p.seconds : 0.0);
  out << line;
}

void write_sweep_rows(std::ostream& out, const SweepResult& result, bool wall_time) {
  for (const PointResult& p : result.points) {
    write_point_row(out, result, p, wall_time);
  }
}

std::vector<MseRow> run_linearization_mse(const MseStudy& study) {
  if (study.samples < 1) {
    throw ConfigError("linearization study needs at least one sample");
  }
  const Constellation c = make_qam(study.order);
  std::vector<MseRow> rows;
  for (std::size_t a = 0; a < study.linewidths_hz.size(); ++a) {
    const double step_sd = std::sqrt(2.0 * std::numbers::pi * study.linewidths_hz[a] / study.baud);
    for (std::size_t b = 0; b < study.ebn0_db.size(); ++b) {
      const auto& ebn0 = study.ebn0_db[b];
      const double sd =
          ebn0 ? std::sqrt(ebn0_to_noise_variance(*ebn0, c, study.code_rate, study.pilot_rate)) : 0.0;
      Rng rng(derive_seed(study.seed, a, b));
      std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
      std::uniform_real_distribution<double> start(0.0, 2.0 * std::numbers::pi);
      std::normal_distribution<double> gauss(0.0, 1.0);
      long double sum = 0.0L;
      for (long long n = 0; n < study.samples; ++n) {
        const cplx s = c.point(pick(rng));
        const double prev = start(rng);
        const double theta = prev + step_sd * gauss(rng);
        cplx r = s * std::polar(1.0, theta);
        if (ebn0) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          r += sd * cplx(re, im);
        }
        const double err = single_step_phase_estimate(r, s, prev) - theta;
        sum += static_cast<long double>(err) * err;
      }
      rows.push_back({study.linewidths_hz[a], ebn0, study.samples,
                      static_cast<double>(sum / study.samples)});
    }
  }
  return rows;
}

void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows) {
  out << "linewidth_hz,ebn0_db,samples,mse\n";
  char line[256];
  for (const MseRow& row : rows) {
    char ebn0[32];
    if (row.ebn0_db) {
      std::snprintf(ebn0, sizeof ebn0, "%.4f", *row.ebn0_db);
    } else {
      std::snprintf(ebn0, sizeof ebn0, "inf");
    }
    std::snprintf(line, sizeof line, "%.6e,%s,%lld,%.6e\n", row.linewidth_hz, ebn0, row.samples,
                  row.mse);
    out << line;
  }
}

}  // namespace pnc

#include "pnc/error.hpp"
#include "pnc/harness.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

namespace {

void on_signal(int) { pnc::request_stop(); }

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  bool has_seed = false;
};

// Either the --out file or stdout.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) {
        throw pnc::ConfigError("cannot write " + path);
      }
      stream = file.get();
    }
  }
};

pnc::SimConfig load(const Common& c) {
  pnc::SimConfig cfg = pnc::load_sim_config(c.config);
  if (c.has_seed) cfg.master_seed = c.seed;
  if (c.threads > 0) cfg.threads = c.threads;
  return cfg;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("config", c.config, "JSON config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "master seed (overrides the config)")
      ->each([&c](const std::string&) { c.has_seed = true; });
  sub->add_option("--threads", c.threads, "worker threads (overrides the config)");
  sub->add_option("--out", c.out, "CSV output path (stdout if omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-noise compensation simulator"};
  app.require_subcommand(1);

  Common sweep_opts;
  Common mse_opts;
  Common compare_opts;
  auto* sweep = app.add_subcommand("sweep", "BER sweep for one receiver");
  auto* mse = app.add_subcommand("mse", "single-step linearization MSE table");
  auto* compare = app.add_subcommand("compare", "joint vs per-channel processing on shared trials");
  add_common(sweep, sweep_opts);
  add_common(mse, mse_opts);
  add_common(compare, compare_opts);

  CLI11_PARSE(app, argc, argv);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    if (*sweep || *compare) {
      const Common& opts = *sweep ? sweep_opts : compare_opts;
      const pnc::SimConfig cfg = load(opts);
      Sink sink(opts.out);
      pnc::write_sweep_header(*sink.stream);
      sink.stream->flush();
      auto flush_point = [&](const pnc::SweepResult& r) {
        pnc::write_point_row(*sink.stream, r, r.points.back(), cfg.report_wall_time);
        sink.stream->flush();
        if (r.points.back().hit_max_frames) {
          std::cerr << r.receiver << " @ " << r.points.back().ebn0_db
                    << " dB: max_frames reached before min_frame_errors\n";
        }
      };
      if (*sweep) {
        pnc::run_sweep(pnc::TrialSetup(cfg), "", flush_point);
      } else {
        pnc::run_comparison(cfg, flush_point);
      }
    } else {
      pnc::MseStudy study = pnc::load_mse_study(mse_opts.config);
      if (mse_opts.has_seed) study.seed = mse_opts.seed;
      Sink sink(mse_opts.out);
      pnc::write_mse_csv(*sink.stream, pnc::run_linearization_mse(study));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return pnc::stop_requested() ? 130 : 0;
}

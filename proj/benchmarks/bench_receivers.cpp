#include "pnc/channel.hpp"
#include "pnc/eks.hpp"
#include "pnc/receiver_fg.hpp"
#include "pnc/receiver_vb.hpp"

#include <benchmark/benchmark.h>

namespace {

struct Frame {
  pnc::Constellation c = pnc::make_qam(16);
  pnc::PilotGrid pilots;
  pnc::CovarianceSpec cov;
  pnc::ComplexGrid r;

  Frame(int channels, int length) {
    pnc::Rng rng(7);
    const double var = pnc::laser_phase_variance(5e-5);
    cov = pnc::CovarianceSpec(pnc::build_covariance(var, var / 1000, channels),
                              std::vector<double>(static_cast<std::size_t>(channels), 0.02));
    pilots = pnc::place_pilots_wrapped_diagonal(channels, length, 0.01, c, rng);
    pnc::ComplexGrid s(channels, length);
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    for (int i = 0; i < channels; ++i)
      for (int k = 0; k < length; ++k)
        s(i, k) = pilots.is_pilot(i, k) ? pilots.value(i, k) : c.point(pick(rng));
    const auto theta = pnc::generate_phase_walk(cov.q, length, rng);
    r = pnc::apply_channel(s, theta, cov, rng);
  }
};

void BM_Eks(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Frame f(d, 1024);
  pnc::SoftSymbolStats stats(d, 1024);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < 1024; ++k) {
      stats.mean(i, k) = f.r(i, k);
      stats.eff_var(i, k) = 0.05;
    }
  for (auto _ : state) {
    auto post = pnc::extended_kalman_smoother(f.r, stats, f.cov);
    benchmark::DoNotOptimize(post.mean.values().data());
  }
  state.SetItemsProcessed(state.iterations() * d * 1024);
}
BENCHMARK(BM_Eks)->Arg(1)->Arg(4)->Arg(20);

void BM_FgIteration(benchmark::State& state) {
  Frame f(4, 256);
  const auto pd = pnc::SymbolPmfGrid::uniform(4, 256, f.c.size());
  for (auto _ : state) {
    auto out = pnc::fg_pnc_iteration(f.r, pd, f.cov, f.pilots, f.c);
    benchmark::DoNotOptimize(out.likelihood.slot(0, 0).data());
  }
}
BENCHMARK(BM_FgIteration);

void BM_VbIteration(benchmark::State& state) {
  Frame f(4, 256);
  const auto qs = pnc::SymbolPmfGrid::uniform(4, 256, f.c.size());
  for (auto _ : state) {
    auto out = pnc::vb_pnc_iteration(f.r, qs, f.cov, f.pilots, f.c);
    benchmark::DoNotOptimize(out.likelihood.slot(0, 0).data());
  }
}
BENCHMARK(BM_VbIteration);

}  // namespace

#include "pnc/ldpc.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_LdpcDecode(benchmark::State& state) {
  static const pnc::LdpcCode code = pnc::make_peg_code(1008, 504, 3, 1);
  pnc::LdpcDecoder dec(code);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.8);
  // all-zero codeword over BPSK: LLR = 2 y / sigma^2
  std::vector<double> llr(static_cast<std::size_t>(code.length()));
  for (double& l : llr) l = 2.0 * (1.0 + noise(rng)) / 0.64;
  const int iters = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto res = dec.decode(llr, iters);
    benchmark::DoNotOptimize(res.hard.data());
  }
}
BENCHMARK(BM_LdpcDecode)->Arg(1)->Arg(50);

void BM_Encode(benchmark::State& state) {
  static const pnc::LdpcCode code = pnc::make_peg_code(1008, 504, 3, 1);
  pnc::Bits info(static_cast<std::size_t>(code.info_length()), 1);
  for (auto _ : state) {
    auto word = code.encode(info);
    benchmark::DoNotOptimize(word.data());
  }
}
BENCHMARK(BM_Encode);

}  // namespace

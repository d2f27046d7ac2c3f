#include "pnc/error.hpp"
#include "pnc/framing.hpp"
#include "pnc/harness.hpp"
#include "pnc/llr.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace pnc;

namespace {

Bits random_bits(std::size_t n, Rng& rng) {
  std::bernoulli_distribution b(0.5);
  Bits out(n);
  for (auto& v : out) v = b(rng) ? 1 : 0;
  return out;
}

}  // namespace

TEST_CASE("layout: 16QAM n=1008 gives 252 data slots per channel") {
  const FrameLayout lay = make_frame_layout(4, 1008 / 4, 0.01);
  CHECK(lay.data_symbols == 252);
  for (int i = 0; i < 4; ++i) {
    const auto& slots = lay.data_slots[static_cast<std::size_t>(i)];
    CHECK(slots.size() == 252u);
    CHECK(std::is_sorted(slots.begin(), slots.end()));
    int pilots = 0;
    for (int k = 0; k < lay.length; ++k) pilots += lay.pilot_mask(i, k);
    CHECK(pilots + 252 == lay.length);
    for (int k : slots) CHECK(lay.pilot_mask(i, k) == 0);
    // every channel carries at least one pilot
    CHECK(pilots >= 1);
  }
  CHECK(lay.pilot_fraction() == doctest::Approx(1.0 - 252.0 / lay.length));
  // smallest such length: one slot less cannot hold 252 data symbols somewhere
  const auto shorter = wrapped_diagonal_mask(4, lay.length - 1, wrapped_diagonal_layout(4, 0.01));
  int min_free = lay.length;
  for (int i = 0; i < 4; ++i) {
    int free = 0;
    for (int k = 0; k < lay.length - 1; ++k) free += shorter(i, k) == 0;
    min_free = std::min(min_free, free);
  }
  CHECK(min_free < 252);
}

TEST_CASE("layout: pilot-free and long frames") {
  const FrameLayout none = make_frame_layout(3, 100, 0.0);
  CHECK(none.length == 100);
  CHECK(none.pilot_fraction() == 0.0);
  const FrameLayout lay = make_frame_layout(4, 16 * 252, 0.01);
  CHECK(lay.pilot_fraction() >= 0.01 - 1e-12);
  CHECK(lay.pilot_fraction() < 0.0125);
  CHECK_THROWS_AS(make_frame_layout(2, 10, 1.0), InvalidRate);
  CHECK_THROWS_AS(make_frame_layout(0, 10, 0.1), DimensionMismatch);
}

TEST_CASE("map and demap: noiseless round trip") {
  Rng rng(1);
  for (int order : {4, 16, 64, 256}) {
    const Constellation c = make_qam(order);
    const int rm = c.bits_per_symbol();
    const int data = 96;
    const FrameLayout lay = make_frame_layout(3, data, 0.05);
    const PilotGrid pilots = draw_pilots(lay, c, rng);
    std::vector<Bits> words;
    for (int i = 0; i < 3; ++i) words.push_back(random_bits(static_cast<std::size_t>(data * rm), rng));
    Grid<int> idx;
    const ComplexGrid s = map_frame(words, c, lay, pilots, &idx);
    for (int i = 0; i < 3; ++i) {
      CHECK(hard_demap(s.row(i), i, lay, c) == words[static_cast<std::size_t>(i)]);
      for (int k = 0; k < lay.length; ++k) {
        CHECK(s(i, k) == c.point(static_cast<std::size_t>(idx(i, k))));
        if (pilots.is_pilot(i, k)) CHECK(s(i, k) == pilots.value(i, k));
      }
    }
  }
}

TEST_CASE("map and demap: rate-one code passes bits through") {
  Rng rng(2);
  const Constellation c = make_qam(16);
  const LdpcCode id(40, {});
  const FrameLayout lay = make_frame_layout(1, 10, 0.1);
  const PilotGrid pilots = draw_pilots(lay, c, rng);
  const Bits info = random_bits(40, rng);
  const std::vector<Bits> words = {id.encode(info)};
  const ComplexGrid s = map_frame(words, c, lay, pilots);
  CHECK(id.extract_info(hard_demap(s.row(0), 0, lay, c)) == info);
}

TEST_CASE("gather and scatter: LLRs follow codeword order") {
  Rng rng(3);
  const Constellation c = make_qam(16);
  const FrameLayout lay = make_frame_layout(2, 50, 0.1);
  const PilotGrid pilots = draw_pilots(lay, c, rng);
  const std::vector<Bits> words = {random_bits(200, rng), random_bits(200, rng)};
  Grid<int> idx;
  map_frame(words, c, lay, pilots, &idx);
  SymbolPmfGrid pmf(2, lay.length, c.size());
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < lay.length; ++k) pmf.slot(i, k)[static_cast<std::size_t>(idx(i, k))] = 1.0;
  for (int i = 0; i < 2; ++i) {
    const auto llr = gather_llrs(pmf, i, lay, c);
    REQUIRE(llr.size() == 200u);
    for (std::size_t t = 0; t < 200; ++t) CHECK(llr[t] == (words[i][t] ? -kLlrClamp : kLlrClamp));
  }
  // scatter then gather reproduces the LLRs on data slots and leaves pilots alone
  std::normal_distribution<double> g(0.0, 3.0);
  std::vector<double> llr(200);
  for (auto& v : llr) v = g(rng);
  SymbolPmfGrid copy = pmf;
  scatter_llrs(llr, 1, lay, c, copy);
  const auto back = gather_llrs(copy, 1, lay, c);
  for (std::size_t t = 0; t < 200; ++t) CHECK(back[t] == doctest::Approx(llr[t]).epsilon(1e-9));
  for (int k = 0; k < lay.length; ++k)
    if (lay.pilot_mask(1, k))
      for (std::size_t j = 0; j < c.size(); ++j) CHECK(copy.slot(1, k)[j] == pmf.slot(1, k)[j]);
  CHECK_THROWS_AS(scatter_llrs(std::vector<double>(7), 0, lay, c, copy), LengthMismatch);
}

TEST_CASE("map: wrong codeword size is rejected") {
  Rng rng(4);
  const Constellation c = make_qam(4);
  const FrameLayout lay = make_frame_layout(2, 10, 0.0);
  const PilotGrid pilots = draw_pilots(lay, c, rng);
  const std::vector<Bits> one = {Bits(20)};
  CHECK_THROWS_AS(map_frame(one, c, lay, pilots), LengthMismatch);
  const std::vector<Bits> shorter = {Bits(20), Bits(18)};
  CHECK_THROWS_AS(map_frame(shorter, c, lay, pilots), LengthMismatch);
}

TEST_CASE("trial setup: frame follows the code and receiver") {
  SimConfig cfg;
  cfg.channels = 4;
  cfg.order = 16;
  cfg.pilot_rate = 0.01;
  cfg.ebn0_db = {5.0};
  cfg.codewords_per_channel = 3;
  const TrialSetup fg(cfg);
  CHECK(fg.layout.data_symbols == 3 * 252);
  CHECK(fg.layout.pilot_fraction() > 0.0);
  cfg.receiver = ReceiverKind::ideal;
  const TrialSetup ideal(cfg);
  CHECK(ideal.layout.length == 3 * 252);
  CHECK(ideal.layout.pilot_fraction() == 0.0);
}

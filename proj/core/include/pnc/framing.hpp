#pragma once

#include "pnc/ldpc.hpp"
#include "pnc/model.hpp"
#include "pnc/symbol_pmf.hpp"

#include <span>
#include <vector>

namespace pnc {

/// Slot layout of a frame carrying one codeword per channel. Data slots are
/// filled row by row in time order; pilot slots are extra and excluded from
/// the codeword.
struct FrameLayout {
  int channels = 0;
  int length = 0;
  int data_symbols = 0;  // per channel
  Grid<std::uint8_t> pilot_mask;
  std::vector<std::vector<int>> data_slots;  // per channel, ascending time

  /// Realized fraction of pilot slots, 1 - data_symbols / length.
  double pilot_fraction() const;
};

/// Smallest frame whose wrapped-diagonal pilot mask leaves at least
/// data_symbols data slots in every channel. Channels with more free slots
/// than needed turn the trailing surplus into pilots. pilot_rate == 0 gives
/// a pilot-free frame of length data_symbols.
FrameLayout make_frame_layout(int channels, int data_symbols, double pilot_rate);

/// Draws uniform pilot symbols on the layout's pilot slots.
PilotGrid draw_pilots(const FrameLayout& layout, const Constellation& c, Rng& rng);

/// Gray-maps each channel's codeword onto its data slots and writes pilots.
/// Symbol indices are returned through `indices` when non-null.
ComplexGrid map_frame(std::span<const Bits> codewords, const Constellation& c,
                      const FrameLayout& layout, const PilotGrid& pilots,
                      Grid<int>* indices = nullptr);

/// Per-bit LLRs of channel i's codeword from the slot PMFs, in codeword order.
std::vector<double> gather_llrs(const SymbolPmfGrid& pmf, int channel, const FrameLayout& layout,
                                const Constellation& c);

/// Overwrites channel i's data-slot PMFs with product-form PMFs from LLRs.
void scatter_llrs(std::span<const double> llrs, int channel, const FrameLayout& layout,
                  const Constellation& c, SymbolPmfGrid& pmf);

/// Hard bit decisions from nearest-point demapping of channel i's data slots.
Bits hard_demap(std::span<const cplx> samples, int channel, const FrameLayout& layout,
                const Constellation& c);

}  // namespace pnc

#include "pnc/framing.hpp"

#include "pnc/error.hpp"
#include "pnc/llr.hpp"

#include <algorithm>
#include <cmath>

namespace pnc {

double FrameLayout::pilot_fraction() const {
  return length > 0 ? 1.0 - static_cast<double>(data_symbols) / length : 0.0;
}

FrameLayout make_frame_layout(int channels, int data_symbols, double pilot_rate) {
  if (channels < 1 || data_symbols < 1) {
    throw DimensionMismatch("make_frame_layout: need channels and data symbols");
  }
  if (!(pilot_rate >= 0.0 && pilot_rate < 1.0)) {
    throw InvalidRate("make_frame_layout: pilot rate must lie in [0, 1)");
  }
  FrameLayout out;
  out.channels = channels;
  out.data_symbols = data_symbols;
  if (pilot_rate == 0.0) {
    out.length = data_symbols;
    out.pilot_mask = Grid<std::uint8_t>(channels, data_symbols, 0);
  } else {
    const WrappedDiagonal wd = wrapped_diagonal_layout(channels, pilot_rate);
    int length = static_cast<int>(std::ceil(data_symbols / (1.0 - pilot_rate) - 1e-9));
    for (;; ++length) {
      out.pilot_mask = wrapped_diagonal_mask(channels, length, wd);
      int min_free = length;
      for (int i = 0; i < channels; ++i) {
        const auto row = out.pilot_mask.row(i);
        const int free = length - static_cast<int>(std::count(row.begin(), row.end(), 1));
        min_free = std::min(min_free, free);
      }
      if (min_free >= data_symbols) {
        break;
      }
    }
    out.length = length;
  }
  out.data_slots.assign(static_cast<std::size_t>(channels), {});
  for (int i = 0; i < channels; ++i) {
    auto& slots = out.data_slots[static_cast<std::size_t>(i)];
    for (int k = 0; k < out.length; ++k) {
      if (!out.pilot_mask(i, k)) {
        slots.push_back(k);
      }
    }
    while (static_cast<int>(slots.size()) > data_symbols) {
      out.pilot_mask(i, slots.back()) = 1;
      slots.pop_back();
    }
  }
  return out;
}

PilotGrid draw_pilots(const FrameLayout& layout, const Constellation& c, Rng& rng) {
  PilotGrid grid = PilotGrid::empty(layout.channels, layout.length);
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  for (int i = 0; i < layout.channels; ++i) {
    for (int k = 0; k < layout.length; ++k) {
      if (layout.pilot_mask(i, k)) {
        grid.set_pilot(i, k, c, pick(rng));
      }
    }
  }
  return grid;
}

ComplexGrid map_frame(std::span<const Bits> codewords, const Constellation& c,
                      const FrameLayout& layout, const PilotGrid& pilots, Grid<int>* indices) {
  const int bits = c.bits_per_symbol();
  if (static_cast<int>(codewords.size()) != layout.channels ||
      !pilots.mask.same_shape(layout.channels, layout.length)) {
    throw LengthMismatch("map_frame: codeword count or pilot grid does not match the layout");
  }
  ComplexGrid s(layout.channels, layout.length);
  if (indices) {
    *indices = Grid<int>(layout.channels, layout.length, -1);
  }
  for (int i = 0; i < layout.channels; ++i) {
    const Bits& word = codewords[static_cast<std::size_t>(i)];
    if (static_cast<int>(word.size()) != layout.data_symbols * bits) {
      throw LengthMismatch("map_frame: codeword length is not data_symbols * Rm");
    }
    const auto& slots = layout.data_slots[static_cast<std::size_t>(i)];
    for (std::size_t t = 0; t < slots.size(); ++t) {
      std::uint32_t label = 0;
      for (int j = 0; j < bits; ++j) {
        label = (label << 1) | (word[t * static_cast<std::size_t>(bits) + static_cast<std::size_t>(j)] & 1U);
      }
      const std::size_t idx = c.index_of_label(label);
      s(i, slots[t]) = c.point(idx);
      if (indices) {
        (*indices)(i, slots[t]) = static_cast<int>(idx);
      }
    }
    for (int k = 0; k < layout.length; ++k) {
      if (pilots.is_pilot(i, k)) {
        s(i, k) = pilots.value(i, k);
        if (indices) {
          (*indices)(i, k) = pilots.symbol(i, k);
        }
      }
    }
  }
  return s;
}

std::vector<double> gather_llrs(const SymbolPmfGrid& pmf, int channel, const FrameLayout& layout,
                                const Constellation& c) {
  const auto bits = static_cast<std::size_t>(c.bits_per_symbol());
  const auto& slots = layout.data_slots[static_cast<std::size_t>(channel)];
  std::vector<double> out(slots.size() * bits);
  for (std::size_t t = 0; t < slots.size(); ++t) {
    pmf_to_llr(pmf.slot(channel, slots[t]), c, std::span<double>(out).subspan(t * bits, bits));
  }
  return out;
}

void scatter_llrs(std::span<const double> llrs, int channel, const FrameLayout& layout,
                  const Constellation& c, SymbolPmfGrid& pmf) {
  const auto bits = static_cast<std::size_t>(c.bits_per_symbol());
  const auto& slots = layout.data_slots[static_cast<std::size_t>(channel)];
  if (llrs.size() != slots.size() * bits) {
    throw LengthMismatch("scatter_llrs: LLR count does not match the channel's data slots");
  }
  for (std::size_t t = 0; t < slots.size(); ++t) {
    llr_to_symbol_pmf(llrs.subspan(t * bits, bits), c, pmf.slot(channel, slots[t]));
  }
}

Bits hard_demap(std::span<const cplx> samples, int channel, const FrameLayout& layout,
                const Constellation& c) {
  const int bits = c.bits_per_symbol();
  const auto& slots = layout.data_slots[static_cast<std::size_t>(channel)];
  Bits out;
  out.reserve(slots.size() * static_cast<std::size_t>(bits));
  for (int k : slots) {
    const std::size_t idx = c.nearest(samples[static_cast<std::size_t>(k)]);
    for (int j = 0; j < bits; ++j) {
      out.push_back(static_cast<std::uint8_t>(c.bit(idx, j)));
    }
  }
  return out;
}

}  // namespace pnc

/*
 Copyright 2026 The ltescan authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "ltescan/phy/modulation.hpp"
#include "ltescan/phy/sequences.hpp"
#include "ltescan/tx_oracle.hpp"

namespace ltescan {

using namespace phy;

namespace {

constexpr double kPi = 3.14159265358979323846;

CellConfig cell_of(const DownlinkConfig& cfg) {
  return {cfg.pci, cfg.n_rb, cfg.cell_ref_ports, cfg.phich_resource,
          cfg.phich_duration};
}

void validate(const DownlinkConfig& cfg) {
  if (cfg.pci < 0 || cfg.pci >= kPciCount)
    throw Error("generate_downlink: PCI out of range");
  if (!valid_nrb(cfg.n_rb)) throw Error("generate_downlink: bad N_RB");
  if (cfg.cfi < 1 || cfg.cfi > 3)
    throw Error("generate_downlink: CFI must be 1..3");
  if (cfg.cell_ref_ports != 1 && cfg.cell_ref_ports != 2 &&
      cfg.cell_ref_ports != 4)
    throw Error("generate_downlink: ports must be 1, 2 or 4");
  if (cfg.n_frames < 1) throw Error("generate_downlink: need frames");
  if (cfg.sfn0 < 0 || cfg.sfn0 > 1023)
    throw Error("generate_downlink: SFN0 must be 0..1023");
  if (cfg.si_agg_level != 4 && cfg.si_agg_level != 8)
    throw Error("generate_downlink: SI grants use aggregation level 4 or 8");
}

// Write composite symbols at positions (k = subcarrier, l = within subframe).
void write_symbols(ResourceGrid& grid, int subframe_col0,
                   const std::vector<std::pair<int, int>>& pos,
                   const std::vector<cplx>& syms) {
  if (pos.size() != syms.size())
    throw Error("oracle: position/symbol count mismatch");
  for (size_t i = 0; i < pos.size(); ++i)
    grid.at(pos[i].first, subframe_col0 + pos[i].second) = syms[i];
}

} // namespace

DciMessage si_grant_for(const DownlinkConfig& cfg) {
  validate(cfg);
  DciMessage dci;
  dci.format = cfg.si_format;
  dci.rnti = kSiRnti;
  dci.mcs_index = cfg.si_mcs;
  dci.n_prb_1a = cfg.si_n_prb_1a;
  dci.rv_field = 0;
  dci.aggregation_level = cfg.si_agg_level;
  dci.cce_start = cfg.si_cce_start;
  if (cfg.si_format == DciFormat::Format1A) {
    dci.localized = cfg.si_localized;
    const int span = cfg.si_localized ? cfg.n_rb : n_vrb_dl_gap1(cfg.n_rb);
    dci.riv = riv_encode(span, cfg.si_alloc_start, cfg.si_alloc_len);
  } else {
    dci.localized = false;
    const int units = n_vrb_dl_gap1(cfg.n_rb) / dvrb_step(cfg.n_rb);
    dci.riv = riv_encode(units, cfg.si_alloc_start, cfg.si_alloc_len);
  }
  // Round-trip through pack/unpack so the transmitted grant and the ground
  // truth resolve allocations through the same code path.
  Bits payload = dci_pack(dci, cfg.n_rb);
  DciMessage resolved = dci_unpack(payload, dci.format, cfg.n_rb, kSiRnti);
  resolved.aggregation_level = dci.aggregation_level;
  resolved.cce_start = dci.cce_start;
  return resolved;
}

phy::Bits sib1_transport_block(const DownlinkConfig& cfg) {
  DciMessage dci = si_grant_for(cfg);
  Bits payload = encode_sib1(cfg.sib1, cfg.sib1_options);
  if (static_cast<int>(payload.size()) > dci.tbs_bits)
    throw Error("generate_downlink: SIB1 payload exceeds the TBS (" +
                std::to_string(payload.size()) + " > " +
                std::to_string(dci.tbs_bits) + ")");
  payload.resize(static_cast<size_t>(dci.tbs_bits), 0);
  return payload;
}

ResourceGrid generate_downlink_grid(const DownlinkConfig& cfg) {
  validate(cfg);
  const CellConfig cell = cell_of(cfg);
  const int n_subc = kSubcarriersPerRb * cfg.n_rb;
  const int center = n_subc / 2;
  const int n_ctrl = control_symbols(cfg.cfi, cfg.n_rb);

  ResourceGrid grid(cfg.n_rb, cfg.n_frames * kSlotsPerFrame * kSymbolsPerSlot,
                    cfg.pci);

  // Control region layout (same in every subframe here) and the SI grant.
  ControlRegion cr = build_control_region(cfg.n_rb, cfg.cfi, cfg.pci,
                                          cfg.cell_ref_ports,
                                          cfg.phich_resource,
                                          cfg.phich_duration);
  if (cr.n_cce() < cfg.si_cce_start + cfg.si_agg_level)
    throw Error("generate_downlink: control region has too few CCEs for the "
                "SI grant");
  DciMessage dci = si_grant_for(cfg);
  Bits tb = sib1_transport_block(cfg);

  auto sib1_pos = pdsch_re_positions(cell, n_ctrl, 5, dci.prb_slot0,
                                     dci.prb_slot1);
  const size_t e_len = 2 * sib1_pos.size();
  if (e_len < static_cast<size_t>(dci.tbs_bits + 28))
    throw Error("generate_downlink: SI allocation cannot carry the TBS");

  std::vector<int> all_prbs(static_cast<size_t>(cfg.n_rb));
  for (int i = 0; i < cfg.n_rb; ++i) all_prbs[static_cast<size_t>(i)] = i;

  std::mt19937_64 fill_rng(cfg.fill_seed);
  std::uniform_int_distribution<int> coin(0, 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  for (int f = 0; f < cfg.n_frames; ++f) {
    const int sfn = (cfg.sfn0 + f) % 1024;
    const int frame_col0 = f * kSlotsPerFrame * kSymbolsPerSlot;

    // CRS for every configured port.
    for (int p = 0; p < cfg.cell_ref_ports; ++p)
      for (int slot = 0; slot < kSlotsPerFrame; ++slot)
        for (const auto& re : generate_crs(cfg.pci, p, cfg.n_rb, slot))
          grid.at(re.subcarrier,
                  frame_col0 + slot * kSymbolsPerSlot + re.symbol_in_slot) +=
              re.value;

    // PSS/SSS in slots 0 and 10, central 62 subcarriers.
    for (int half = 0; half < 2; ++half) {
      const int slot = half * 10;
      const int col_sss = frame_col0 + slot * kSymbolsPerSlot + 5;
      const int col_pss = frame_col0 + slot * kSymbolsPerSlot + 6;
      auto pss = generate_pss(cfg.pci % 3);
      auto sss = generate_sss(cfg.pci / 3, cfg.pci % 3, half * 5);
      for (int i = 0; i < 62; ++i) {
        const int f_idx = i < 31 ? i - 31 : i - 30; // -31..-1, +1..+31
        const int r = f_idx < 0 ? center + f_idx : center + f_idx - 1;
        grid.at(r, col_pss) = pss[static_cast<size_t>(i)];
        grid.at(r, col_sss) = sss[static_cast<size_t>(i)];
      }
    }

    // PBCH: this frame's quarter of the 40 ms TTI.
    MibInfo mib;
    mib.n_rb = cfg.n_rb;
    mib.phich_duration = cfg.phich_duration;
    mib.phich_resource = cfg.phich_resource;
    mib.sfn = sfn;
    mib.cell_ref_ports = cfg.cell_ref_ports;
    Bits tti = pbch_encode_tti(mib, cfg.pci, cfg.cell_ref_ports);
    Bits seg(tti.begin() + 480 * (sfn % 4), tti.begin() + 480 * (sfn % 4 + 1));
    std::vector<cplx> pbch_syms = qpsk_modulate(seg);
    auto per_port = txd_precode(pbch_syms, cfg.cell_ref_ports);
    std::vector<cplx> pbch_comp(pbch_syms.size(), 0.0);
    for (const auto& port : per_port)
      for (size_t i = 0; i < pbch_comp.size(); ++i) pbch_comp[i] += port[i];
    const auto& pbch_pos = pbch_re_positions(cfg.pci);
    const int win0 = center - 36;
    for (size_t i = 0; i < pbch_pos.size(); ++i)
      grid.at(win0 + pbch_pos[i].first, frame_col0 + pbch_pos[i].second) =
          pbch_comp[i];

    for (int sf = 0; sf < 10; ++sf) {
      const int sf_col0 = frame_col0 + sf * kSymbolsPerSubframe;

      // PCFICH in every subframe.
      write_symbols(grid, sf_col0, pcfich_positions(cell),
                    pcfich_encode(cfg.cfi, cell, sf));

      // PDCCH region: the SI grant rides subframe 5 of even frames.
      const bool si_here = (sf == 5) && (sfn % 2 == 0);
      auto quads = pdcch_encode_region(
          si_here ? std::optional<DciMessage>(dci) : std::nullopt, cr, cell,
          sf);
      for (size_t q = 0; q < quads.size(); ++q) {
        const auto& reg = cr.pdcch[q];
        for (int j = 0; j < 4; ++j)
          grid.at(reg.subcarriers[static_cast<size_t>(j)],
                  sf_col0 + reg.symbol) = quads[q][static_cast<size_t>(j)];
      }

      // SIB1 PDSCH.
      std::set<std::pair<int, int>> si_cells;
      if (si_here) {
        const int rv = sib1_redundancy_version(sfn);
        Bits e = dlsch_encode(tb, rv, e_len);
        write_symbols(grid, sf_col0, sib1_pos, pdsch_encode(e, cell, sf));
        si_cells.insert(sib1_pos.begin(), sib1_pos.end());
      }

      // Filler traffic keeps every OFDM symbol loaded.
      if (cfg.fill_unused) {
        auto fill_pos = pdsch_re_positions(cell, n_ctrl, sf, all_prbs, all_prbs);
        for (const auto& p : fill_pos) {
          if (si_cells.count(p)) continue;
          grid.at(p.first, sf_col0 + p.second) =
              cplx((1 - 2 * coin(fill_rng)) * inv_sqrt2,
                   (1 - 2 * coin(fill_rng)) * inv_sqrt2);
        }
      }
    }
  }
  return grid;
}

IqCapture generate_downlink(const DownlinkConfig& cfg) {
  ResourceGrid grid = generate_downlink_grid(cfg);
  dsp::ComplexSeries series = ofdm_modulate(grid);

  const double power = dsp::mean_power(series.data);
  if (power <= 0.0) throw Error("generate_downlink: empty waveform");
  const double scale = 1.0 / std::sqrt(power);
  for (auto& v : series.data) v *= scale;

  IqCapture cap;
  cap.samples = std::move(series.data);
  cap.sample_rate_hz = series.rate_hz;
  cap.center_freq_hz = cfg.center_freq_hz;
  cap.start_time = cfg.start_time;
  cap.duration_ms = 1000.0 * static_cast<double>(cap.samples.size()) /
                    cap.sample_rate_hz;
  return cap;
}

IqCapture impair(const IqCapture& x, const ImpairmentSpec& spec,
                 uint64_t noise_seed) {
  if (spec.delay_samples < 0) throw Error("impair: negative delay");
  IqCapture out;
  out.sample_rate_hz = x.sample_rate_hz;
  out.center_freq_hz = x.center_freq_hz;
  out.start_time = x.start_time;

  const size_t delay = static_cast<size_t>(spec.delay_samples);
  out.samples.assign(delay + x.samples.size(), cplx(0.0));
  for (size_t i = 0; i < x.samples.size(); ++i)
    out.samples[delay + i] = x.samples[i] * spec.flat_gain;

  // Oscillator offset rotates the whole record.
  if (spec.cfo_hz != 0.0) {
    const double step = 2.0 * kPi * spec.cfo_hz / x.sample_rate_hz;
    for (size_t n = 0; n < out.samples.size(); ++n)
      out.samples[n] *= std::polar(1.0, step * static_cast<double>(n));
  }

  if (std::isfinite(spec.snr_db)) {
    double sig_power = dsp::mean_power(x.samples) * std::norm(spec.flat_gain);
    const double noise_power = sig_power * std::pow(10.0, -spec.snr_db / 10.0);
    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
    for (auto& v : out.samples) v += cplx(gauss(rng), gauss(rng));
  }

  out.duration_ms = 1000.0 * static_cast<double>(out.samples.size()) /
                    out.sample_rate_hz;
  return out;
}

IqCapture mix(const IqCapture& a, const IqCapture& b) {
  if (std::abs(a.sample_rate_hz - b.sample_rate_hz) > 1e-6)
    throw Error("mix: sample rates differ");
  IqCapture out = a;
  out.samples.resize(std::max(a.samples.size(), b.samples.size()), cplx(0.0));
  for (size_t i = 0; i < b.samples.size(); ++i) out.samples[i] += b.samples[i];
  out.duration_ms = 1000.0 * static_cast<double>(out.samples.size()) /
                    out.sample_rate_hz;
  return out;
}

} // namespace ltescan

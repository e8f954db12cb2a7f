// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace torusplan {

// =========================================================================
// Chip and topology descriptions, plus closed-form collective costs.
//
// Cost model for a collective over K partitions moving D bytes per chip:
//
//   all-gather      T = D / bw * (K-1) / K      D = per-chip output size
//   reduce-scatter  T = D / bw * (K-1) / K      D = per-chip input size
//   all-reduce      T = 2 * all-gather          (reduce-scatter + all-gather)
//   all-to-all      T = D / bw * (K-1) / K      D = per-chip payload
//
// The (K-1)/K factor is exact chunk accounting: each chip ships K-1 of its
// K chunks. All functions are pure and safe to call concurrently.
// =========================================================================

struct Torus {
  int x = 1;
  int y = 1;
  int z = 1;

  long long n_chips() const { return 1LL * x * y * z; }
};

inline void validate(const Torus& t) {
  if (t.x < 1 || t.y < 1 || t.z < 1)
    throw std::invalid_argument("torus axes must be >= 1");
}

// Per-chip hardware rates. Bandwidths in bytes/s, peak_flops in FLOP/s,
// hbm_bytes in bytes. interconnect_bw is the total per-chip torus rate
// summed over all three axes.
struct ChipSpec {
  double peak_flops = 0.0;
  double hbm_bytes = 0.0;
  double hbm_bw = 0.0;
  double interconnect_bw = 0.0;
};

inline void validate(const ChipSpec& c) {
  if (c.peak_flops <= 0.0 || c.hbm_bytes <= 0.0 || c.hbm_bw <= 0.0 ||
      c.interconnect_bw <= 0.0)
    throw std::invalid_argument("chip spec fields must be positive");
}

// Bitmask over the three physical torus axes.
using AxisMask = std::uint32_t;
inline constexpr AxisMask kAxisX = 1u;
inline constexpr AxisMask kAxisY = 2u;
inline constexpr AxisMask kAxisZ = 4u;
inline constexpr AxisMask kAllAxes = kAxisX | kAxisY | kAxisZ;

// Usable bandwidth for a collective spanning a subset of torus axes.
// Each axis carries one third of the per-chip interconnect rate, so a
// collective over m axes gets m/3 of the total.
inline double effective_bw(const ChipSpec& chip, AxisMask axes) {
  if (axes == 0 || axes > kAllAxes)
    throw std::invalid_argument("axis set must be a nonempty subset of {x,y,z}");
  return chip.interconnect_bw / 3.0 * static_cast<double>(std::popcount(axes));
}

namespace detail {
inline double collective_time(double bytes_per_chip, long long partitions,
                              double bw) {
  if (partitions < 1) throw std::invalid_argument("partitions must be >= 1");
  if (bw <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  if (bytes_per_chip < 0.0)
    throw std::invalid_argument("byte count must be nonnegative");
  const double k = static_cast<double>(partitions);
  return bytes_per_chip / bw * (k - 1.0) / k;
}
}  // namespace detail

// out_bytes_per_chip is the size of the gathered (larger) per-chip output.
inline double all_gather_time(double out_bytes_per_chip, long long partitions,
                              double bw) {
  return detail::collective_time(out_bytes_per_chip, partitions, bw);
}

// in_bytes_per_chip is the size of the partial-sum (larger) per-chip input.
inline double reduce_scatter_time(double in_bytes_per_chip,
                                  long long partitions, double bw) {
  return detail::collective_time(in_bytes_per_chip, partitions, bw);
}

inline double all_reduce_time(double bytes_per_chip, long long partitions,
                              double bw) {
  return 2.0 * all_gather_time(bytes_per_chip, partitions, bw);
}

// Priced like a reduce-scatter on the per-chip payload. Upper bound; the
// tensors this is used on are small relative to everything else.
inline double all_to_all_time(double bytes_per_chip, long long partitions,
                              double bw) {
  return detail::collective_time(bytes_per_chip, partitions, bw);
}

// Asymptotic form that drops (K-1)/K, i.e. the K >> 1 limit. Kept for
// cross-checking against the exact formulas; not used by the cost engine.
inline double collective_time_asymptotic(double bytes_per_chip, double bw) {
  if (bw <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  if (bytes_per_chip < 0.0)
    throw std::invalid_argument("byte count must be nonnegative");
  return bytes_per_chip / bw;
}

}  // namespace torusplan

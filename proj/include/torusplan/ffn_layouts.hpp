// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "torusplan/collectives.hpp"
#include "torusplan/model.hpp"

namespace torusplan {

// =========================================================================
// Per-layer communication time of the feedforward partitioning layouts.
//
// Five layouts over n_chips = X*Y*Z, all with weights resident in the
// E_x F_yz sharding so prefill and decode can share one weight layout:
//
//   ws1d    weights sharded over d_ff on all chips; activations aggregated
//           at full BLE size:              T = 2*BL*E*act / bw
//   ws2d    weights sharded E by X, F by YZ; two smaller activation
//           aggregations:                  T = 2*BL*act*(E/X + F/YZ) / bw
//   wg_*    activations stay put, weights all-gathered over N chips
//           (N = X, XY or XYZ):            T = 2*E*F*wb*N/(n*bw)
//                                            + 2*BL*E*act/(N*bw)
//
// `tokens` is the batch size in tokens (B*L). Formulas use the asymptotic
// collective cost (the (K-1)/K factor dropped); the exact collective
// primitives live in collectives.hpp for cross-checks.
// =========================================================================

enum class FfnLayoutKind { WS1D, WS2D, WG_X, WG_XY, WG_XYZ };

inline std::string_view to_string(FfnLayoutKind k) {
  switch (k) {
    case FfnLayoutKind::WS1D: return "ws1d";
    case FfnLayoutKind::WS2D: return "ws2d";
    case FfnLayoutKind::WG_X: return "wg_x";
    case FfnLayoutKind::WG_XY: return "wg_xy";
    case FfnLayoutKind::WG_XYZ: return "wg_xyz";
  }
  return "?";
}

struct FfnLayout {
  FfnLayoutKind kind = FfnLayoutKind::WS2D;
  // E-by-X, F-by-YZ weight sharding. Meaningful for every layout since
  // the weight-gathered variants start from the same resident sharding.
  long long x_split = 1;
  long long yz_split = 1;
  // Chips the weights are gathered over; 1 for weight-stationary kinds.
  long long gather_extent = 1;
};

inline double ws1d_comm_time(double tokens, long long d_model, int act_bytes,
                             double bw) {
  if (bw <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  if (tokens < 0.0) throw std::invalid_argument("tokens must be nonnegative");
  return 2.0 * tokens * static_cast<double>(d_model) *
         static_cast<double>(act_bytes) / bw;
}

inline double ws2d_comm_time(double tokens, long long d_model, long long d_ff,
                             long long x_split, long long yz_split,
                             int act_bytes, double bw) {
  if (bw <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  if (x_split < 1 || yz_split < 1)
    throw std::invalid_argument("infeasible 2D split");
  if (tokens < 0.0) throw std::invalid_argument("tokens must be nonnegative");
  const double per_token =
      static_cast<double>(d_model) / static_cast<double>(x_split) +
      static_cast<double>(d_ff) / static_cast<double>(yz_split);
  return 2.0 * tokens * static_cast<double>(act_bytes) * per_token / bw;
}

inline double wg_comm_time(double tokens, long long d_model, long long d_ff,
                           long long gather_extent, long long n_chips,
                           int weight_bytes, int act_bytes, double bw) {
  if (bw <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  if (gather_extent < 1 || gather_extent > n_chips ||
      n_chips % gather_extent != 0)
    throw std::invalid_argument("gather extent must divide the chip count");
  if (tokens < 0.0) throw std::invalid_argument("tokens must be nonnegative");
  const double e = static_cast<double>(d_model);
  const double weight_term = 2.0 * e * static_cast<double>(d_ff) *
                             static_cast<double>(weight_bytes) *
                             static_cast<double>(gather_extent) /
                             (static_cast<double>(n_chips) * bw);
  const double act_term = 2.0 * tokens * e *
                          static_cast<double>(act_bytes) /
                          (static_cast<double>(gather_extent) * bw);
  return weight_term + act_term;
}

// Continuous minimizer of the weight-gathered total (AM-GM point where the
// weight and activation terms are equal).
inline double wg_optimal_extent(double tokens, long long d_ff,
                                long long n_chips, int weight_bytes,
                                int act_bytes) {
  return std::sqrt(tokens * static_cast<double>(n_chips) *
                   static_cast<double>(act_bytes) /
                   (static_cast<double>(d_ff) *
                    static_cast<double>(weight_bytes)));
}

namespace detail {

inline std::vector<long long> divisors(long long v) {
  std::vector<long long> out;
  for (long long d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      if (d != v / d) out.push_back(v / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Chip-count products realizable as a subgrid of the torus (one divisor
// per physical axis). Sorted ascending, deduplicated.
inline std::vector<long long> feasible_axis_products(const Torus& t) {
  std::vector<long long> out;
  for (long long dx : detail::divisors(t.x))
    for (long long dy : detail::divisors(t.y))
      for (long long dz : detail::divisors(t.z)) out.push_back(dx * dy * dz);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Splits v into the most balanced (a, b) divisor pair with a >= b.
inline std::pair<long long, long long> balanced_split(long long v) {
  long long b = 1;
  for (long long d = 1; d * d <= v; ++d)
    if (v % d == 0) b = d;
  return {v / b, b};
}

// Minimizes E/X + F/YZ over torus-realizable splits X * YZ = n_chips.
// Ties break toward the smaller X. Some split is always feasible (X = 1).
inline std::pair<long long, long long> ws2d_optimal_split(const Torus& torus,
                                                          long long d_model,
                                                          long long d_ff) {
  const long long n = torus.n_chips();
  long long best_x = 1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (long long x : feasible_axis_products(torus)) {
    const double cost = static_cast<double>(d_model) / static_cast<double>(x) +
                        static_cast<double>(d_ff) / static_cast<double>(n / x);
    if (cost < best_cost) {
      best_cost = cost;
      best_x = x;
    }
  }
  return {best_x, n / best_x};
}

struct LayoutTime {
  FfnLayout layout;
  double seconds = 0.0;   // per layer
  double volume_bytes = 0.0;  // seconds * bandwidth
};

// Evaluates all five layouts for one feedforward layer at `tokens` tokens
// per pass. The gather ladder N in {X, X*Y, X*Y*Z} comes from the resident
// ws2d split, with YZ balanced into Y and Z.
inline std::vector<LayoutTime> ffn_layout_times(double tokens,
                                                const ModelConfig& m,
                                                const ChipSpec& chip,
                                                const Torus& torus) {
  const long long n = torus.n_chips();
  const double bw = effective_bw(chip, kAllAxes);
  const auto [x, yz] = ws2d_optimal_split(torus, m.d_model, m.d_ff);
  const auto [y, z] = balanced_split(yz);

  std::vector<LayoutTime> out;
  auto push = [&](FfnLayoutKind kind, long long extent, double seconds) {
    FfnLayout l;
    l.kind = kind;
    l.x_split = x;
    l.yz_split = yz;
    l.gather_extent = extent;
    out.push_back({l, seconds, seconds * bw});
  };
  push(FfnLayoutKind::WS1D, 1,
       ws1d_comm_time(tokens, m.d_model, m.activation_bytes, bw));
  push(FfnLayoutKind::WS2D, 1,
       ws2d_comm_time(tokens, m.d_model, m.d_ff, x, yz, m.activation_bytes,
                      bw));
  push(FfnLayoutKind::WG_X, x,
       wg_comm_time(tokens, m.d_model, m.d_ff, x, n, m.weight_bytes,
                    m.activation_bytes, bw));
  push(FfnLayoutKind::WG_XY, x * y,
       wg_comm_time(tokens, m.d_model, m.d_ff, x * y, n, m.weight_bytes,
                    m.activation_bytes, bw));
  push(FfnLayoutKind::WG_XYZ, n,
       wg_comm_time(tokens, m.d_model, m.d_ff, n, n, m.weight_bytes,
                    m.activation_bytes, bw));
  return out;
}

// Cheapest layout for the phase. Decode always stays 2D weight-stationary
// (token batches are small and the weights must not move); prefill takes
// the argmin over ws2d and the gather ladder. ws1d is reported by
// ffn_layout_times but never selected. Ties break toward the layout with
// the smaller gather extent, ws2d first.
inline std::pair<FfnLayout, double> best_ffn_layout(Phase phase, double tokens,
                                                    const ModelConfig& m,
                                                    const ChipSpec& chip,
                                                    const Torus& torus) {
  const auto all = ffn_layout_times(tokens, m, chip, torus);
  const LayoutTime* best = nullptr;
  for (const auto& lt : all) {
    if (lt.layout.kind == FfnLayoutKind::WS1D) continue;
    if (phase == Phase::Decode && lt.layout.kind != FfnLayoutKind::WS2D)
      continue;
    if (best == nullptr || lt.seconds < best->seconds) best = &lt;
  }
  return {best->layout, best->seconds};
}

}  // namespace torusplan

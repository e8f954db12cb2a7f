// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "torusplan/attention_layouts.hpp"
#include "torusplan/collectives.hpp"
#include "torusplan/ffn_layouts.hpp"
#include "torusplan/model.hpp"

namespace torusplan {

// Fraction of communication hidden under compute/memory. 0 charges all
// communication serially; 1 hides it completely.
struct OverlapPolicy {
  double alpha = 0.0;
};

inline void validate(const OverlapPolicy& o) {
  if (o.alpha < 0.0 || o.alpha > 1.0)
    throw std::invalid_argument("overlap alpha must be in [0, 1]");
}

struct EngineOptions {
  bool count_attention_flops = false;
  double activation_slack_frac = 0.05;  // HBM headroom for transients
};

// Per-phase layout choice. `attn` is the sharding the phase computes
// with; `kv_storage` is where the cache lives (the decode sharding),
// which is what capacity accounting uses.
struct LayoutPlan {
  FfnLayout ffn;
  AttnSharding attn = AttnSharding::HeadSharded;
  AttnSharding kv_storage = AttnSharding::HeadSharded;
  long long axis_x = 1;
  long long axis_y = 1;
  long long axis_z = 1;
};

// All fields are totals for the phase: one forward pass for prefill, the
// sum over gen_len steps for decode. comm_s is the raw communication time
// before overlap; total_s charges (1 - alpha) of it.
struct CostBreakdown {
  double compute_s = 0.0;
  double weight_load_s = 0.0;
  double kv_load_s = 0.0;
  double comm_s = 0.0;
  double total_s = 0.0;
  double mfu = 0.0;
  double cost_chipsec_per_token = 0.0;
  bool feasible = true;
};

inline double mfu(const ModelConfig& m, double tokens, double wall_s,
                  long long n_chips, const ChipSpec& chip) {
  if (wall_s <= 0.0) throw std::invalid_argument("wall time must be positive");
  return tokens / wall_s * 2.0 * m.n_params /
         (static_cast<double>(n_chips) * chip.peak_flops);
}

inline double cost_per_token(long long n_chips, double wall_s, double tokens) {
  if (tokens <= 0.0) throw std::invalid_argument("token count must be positive");
  return static_cast<double>(n_chips) * wall_s / tokens;
}

namespace detail {

// Sum of (c0 + c1*t) over t in [from, to).
inline double sum_linear(double c0, double c1, long long from, long long to) {
  if (to <= from) return 0.0;
  const double k = static_cast<double>(to - from);
  const double t_sum = static_cast<double>(from + to - 1) * k / 2.0;
  return k * c0 + c1 * t_sum;
}

// Sum of max(a0 + a1*t, b0 + b1*t) over t in [0, steps). Both slopes are
// nonnegative in our use, so the winner switches at most once.
inline double sum_max_linear(double a0, double a1, double b0, double b1,
                             long long steps) {
  if (steps <= 0) return 0.0;
  if (a1 == b1) return sum_linear(std::max(a0, b0), a1, 0, steps);
  if (a1 < b1) {
    std::swap(a0, b0);
    std::swap(a1, b1);
  }
  // a is steeper: b wins below the crossing, a at and above it.
  const double cross = (b0 - a0) / (a1 - b1);
  long long t_star = 0;
  if (cross >= static_cast<double>(steps)) {
    t_star = steps;
  } else if (cross > 0.0) {
    t_star = static_cast<long long>(std::ceil(cross));
  }
  // Pin the boundary with direct comparisons so the closed form agrees
  // with a stepwise evaluation at FP resolution.
  while (t_star > 0 &&
         a0 + a1 * static_cast<double>(t_star - 1) >=
             b0 + b1 * static_cast<double>(t_star - 1))
    --t_star;
  while (t_star < steps &&
         a0 + a1 * static_cast<double>(t_star) <
             b0 + b1 * static_cast<double>(t_star))
    ++t_star;
  return sum_linear(b0, b1, 0, t_star) + sum_linear(a0, a1, t_star, steps);
}

inline double ffn_layer_comm(const FfnLayout& l, double tokens,
                             const ModelConfig& m, long long n_chips,
                             double bw) {
  switch (l.kind) {
    case FfnLayoutKind::WS1D:
      return ws1d_comm_time(tokens, m.d_model, m.activation_bytes, bw);
    case FfnLayoutKind::WS2D:
      return ws2d_comm_time(tokens, m.d_model, m.d_ff, l.x_split, l.yz_split,
                            m.activation_bytes, bw);
    case FfnLayoutKind::WG_X:
    case FfnLayoutKind::WG_XY:
    case FfnLayoutKind::WG_XYZ:
      return wg_comm_time(tokens, m.d_model, m.d_ff, l.gather_extent, n_chips,
                          m.weight_bytes, m.activation_bytes, bw);
  }
  throw std::invalid_argument("unknown ffn layout");
}

}  // namespace detail

// True when weights, the KV cache at the workload's final context length,
// and an activation slack all fit per chip.
inline bool fits_in_memory(const ModelConfig& m, const ChipSpec& chip,
                           const Torus& torus, const Workload& w,
                           AttnSharding kv_storage,
                           double activation_slack_frac = 0.05) {
  const long long n = torus.n_chips();
  const double weights = weight_bytes_total(m) / static_cast<double>(n);
  const double kv = kv_bytes_per_chip(m, kv_storage, w.batch,
                                      w.input_len + w.gen_len, n);
  const double slack = activation_slack_frac * chip.hbm_bytes;
  return weights + kv + slack <= chip.hbm_bytes;
}

// Latency and utilization of one phase under a fixed layout plan.
//
// Per forward pass, compute and HBM traffic overlap as max(); the
// communication charge (1 - alpha) adds serially. Serial blocks double
// the per-layer activation collectives. Decode sums gen_len steps with
// the context growing one token per step (closed form over the
// arithmetic series; cross-checked stepwise in the tests).
inline CostBreakdown phase_latency(const ModelConfig& m, const ChipSpec& chip,
                                   const Torus& torus, const Workload& w,
                                   Phase phase, const LayoutPlan& plan,
                                   const OverlapPolicy& overlap = {},
                                   const EngineOptions& opts = {}) {
  validate(m);
  validate(chip);
  validate(torus);
  validate(w);
  validate(overlap);

  const long long n = torus.n_chips();
  const double bw = effective_bw(chip, kAllAxes);
  const double n_d = static_cast<double>(n);
  const double peak = n_d * chip.peak_flops;
  const double block_factor = m.block == BlockKind::Serial ? 2.0 : 1.0;
  const double weight_pass =
      weight_bytes_total(m) / (n_d * chip.hbm_bw);

  CostBreakdown out;
  out.feasible = fits_in_memory(m, chip, torus, w, plan.kv_storage,
                                opts.activation_slack_frac);

  const double tokens = static_cast<double>(tokens_per_pass(phase, w));
  const long long steps = phase == Phase::Decode ? w.gen_len : 1;
  if (tokens <= 0.0 || steps <= 0) return out;

  const double reshard =
      plan.attn == AttnSharding::BatchSharded
          ? attn_resharding_time(m, phase, w.batch, torus, chip)
          : 0.0;
  const double ffn = detail::ffn_layer_comm(plan.ffn, tokens, m, n, bw);
  const double comm_pass =
      static_cast<double>(m.n_layers) * block_factor * (ffn + reshard);

  if (phase == Phase::Prefill) {
    double flops = matmul_flops_per_token(m) * tokens;
    if (opts.count_attention_flops)
      flops += attention_flops(m, w.batch, w.input_len, w.input_len);
    out.compute_s = flops / peak;
    out.weight_load_s = weight_pass;
    out.kv_load_s =
        kv_load_time(kv_bytes_per_chip(m, plan.kv_storage, w.batch,
                                       w.input_len, n),
                     chip.hbm_bw);
    out.comm_s = comm_pass;
    out.total_s = std::max(out.compute_s, out.weight_load_s + out.kv_load_s) +
                  (1.0 - overlap.alpha) * out.comm_s;
  } else {
    // Linear-in-step components: compute c0 + c1*t, memory m0 + m1*t.
    const double kv_token =
        kv_bytes_per_chip(m, plan.kv_storage, w.batch, 1, n) / chip.hbm_bw;
    double c0 = matmul_flops_per_token(m) * tokens / peak;
    double c1 = 0.0;
    if (opts.count_attention_flops) {
      const double per_key =
          attention_flops(m, w.batch, 1, 1) / peak;
      c0 += per_key * static_cast<double>(w.input_len + 1);
      c1 = per_key;
    }
    const double m0 = weight_pass + kv_token * static_cast<double>(w.input_len);
    const double m1 = kv_token;
    const double steps_d = static_cast<double>(steps);

    out.compute_s = detail::sum_linear(c0, c1, 0, steps);
    out.weight_load_s = steps_d * weight_pass;
    out.kv_load_s = detail::sum_linear(
        kv_token * static_cast<double>(w.input_len), kv_token, 0, steps);
    out.comm_s = steps_d * comm_pass;
    out.total_s = detail::sum_max_linear(c0, c1, m0, m1, steps) +
                  (1.0 - overlap.alpha) * out.comm_s;
  }

  const double tokens_processed =
      phase == Phase::Prefill ? tokens
                              : static_cast<double>(w.batch * w.gen_len);
  if (out.total_s > 0.0 && tokens_processed > 0.0) {
    out.mfu = mfu(m, tokens_processed, out.total_s, n, chip);
    out.cost_chipsec_per_token = cost_per_token(n, out.total_s, tokens_processed);
  }
  return out;
}

// Component-wise sum of two phase breakdowns of the same configuration,
// with utilization recomputed over the combined token count.
inline CostBreakdown combine_breakdowns(const CostBreakdown& a,
                                        const CostBreakdown& b,
                                        const ModelConfig& m,
                                        const ChipSpec& chip, long long n_chips,
                                        double tokens_processed) {
  CostBreakdown out;
  out.compute_s = a.compute_s + b.compute_s;
  out.weight_load_s = a.weight_load_s + b.weight_load_s;
  out.kv_load_s = a.kv_load_s + b.kv_load_s;
  out.comm_s = a.comm_s + b.comm_s;
  out.total_s = a.total_s + b.total_s;
  out.feasible = a.feasible && b.feasible;
  if (out.total_s > 0.0 && tokens_processed > 0.0) {
    out.mfu = mfu(m, tokens_processed, out.total_s, n_chips, chip);
    out.cost_chipsec_per_token =
        cost_per_token(n_chips, out.total_s, tokens_processed);
  }
  return out;
}

}  // namespace torusplan

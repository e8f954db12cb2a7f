// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations used only by tests. These share
// the library's data types but none of its computation paths: every cost
// below is rederived inline so a bug in the engine cannot hide here.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "torusplan/cost_engine.hpp"
#include "torusplan/model.hpp"
#include "torusplan/optimizer.hpp"

namespace oracles {

// One engine-vs-oracle comparison.
struct OracleReport {
  std::string case_id;
  double oracle_value = 0.0;
  double engine_value = 0.0;

  double relative_error() const {
    return std::abs(oracle_value - engine_value) /
           std::max(std::abs(oracle_value), 1e-30);
  }
};

struct SplitResult {
  long long x = 1;
  long long yz = 1;
  double seconds = 0.0;
};

// Exhaustive minimum of the 2D weight-stationary communication time over
// every divisor split of n_chips. First minimum in ascending x wins.
inline SplitResult brute_force_split(long long n_chips, long long d_model,
                                     long long d_ff, double tokens,
                                     double act_bytes, double bw) {
  SplitResult best;
  best.seconds = std::numeric_limits<double>::infinity();
  for (long long x = 1; x <= n_chips; ++x) {
    if (n_chips % x != 0) continue;
    const long long yz = n_chips / x;
    const double t = 2.0 * tokens * act_bytes *
                     (static_cast<double>(d_model) / static_cast<double>(x) +
                      static_cast<double>(d_ff) / static_cast<double>(yz)) /
                     bw;
    if (t < best.seconds) best = {x, yz, t};
  }
  return best;
}

// Quadratic dominance filter; survivors sorted by (latency, cost, input
// order) to match the engine's output order.
inline std::vector<torusplan::ParetoPoint> brute_force_pareto(
    const std::vector<torusplan::ParetoPoint>& pts) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      if (j == i) continue;
      const bool le_lat = pts[j].latency_s <= pts[i].latency_s;
      const bool le_cost =
          pts[j].cost_chipsec_per_token <= pts[i].cost_chipsec_per_token;
      const bool strict =
          pts[j].latency_s < pts[i].latency_s ||
          pts[j].cost_chipsec_per_token < pts[i].cost_chipsec_per_token;
      if (le_lat && le_cost && strict) dominated = true;
    }
    if (!dominated) keep.push_back(i);
  }
  std::stable_sort(keep.begin(), keep.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (pts[a].latency_s != pts[b].latency_s)
                       return pts[a].latency_s < pts[b].latency_s;
                     if (pts[a].cost_chipsec_per_token !=
                         pts[b].cost_chipsec_per_token)
                       return pts[a].cost_chipsec_per_token <
                              pts[b].cost_chipsec_per_token;
                     return a < b;
                   });
  std::vector<torusplan::ParetoPoint> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(pts[i]);
  return out;
}

// Stored K/V bytes on one chip, written out longhand.
inline double kv_chip_bytes(const torusplan::ModelConfig& m,
                            torusplan::AttnSharding sharding, double batch,
                            double context, long long n_chips) {
  const double heads =
      m.attention == torusplan::AttentionKind::MultiHead
          ? static_cast<double>(m.n_heads)
          : 1.0;
  const double total = 2.0 * heads * static_cast<double>(m.d_head) *
                       static_cast<double>(m.activation_bytes) *
                       static_cast<double>(m.n_layers) * batch * context;
  if (sharding == torusplan::AttnSharding::BatchSharded)
    return total / static_cast<double>(n_chips);
  if (m.attention == torusplan::AttentionKind::MultiQuery) return total;
  return total / static_cast<double>(std::min<long long>(n_chips, m.n_heads));
}

// Explicit per-step decode loop: context grows one token per step, each
// step pays max(compute, weight load + KV load) plus unhidden comm.
inline double stepwise_decode(const torusplan::ModelConfig& m,
                              const torusplan::ChipSpec& chip,
                              const torusplan::Torus& torus,
                              const torusplan::Workload& w,
                              const torusplan::LayoutPlan& plan,
                              double alpha, bool attention_flops) {
  const double n = static_cast<double>(torus.n_chips());
  const double bw = chip.interconnect_bw;  // collectives span all axes
  const double e = static_cast<double>(m.d_model);
  const double f = static_cast<double>(m.d_ff);
  const double act = static_cast<double>(m.activation_bytes);
  const double tokens = static_cast<double>(w.batch);

  double ffn = 0.0;
  switch (plan.ffn.kind) {
    case torusplan::FfnLayoutKind::WS1D:
      ffn = 2.0 * tokens * e * act / bw;
      break;
    case torusplan::FfnLayoutKind::WS2D:
      ffn = 2.0 * tokens * act *
            (e / static_cast<double>(plan.ffn.x_split) +
             f / static_cast<double>(plan.ffn.yz_split)) /
            bw;
      break;
    default: {
      const double ext = static_cast<double>(plan.ffn.gather_extent);
      ffn = 2.0 * e * f * m.weight_bytes * ext / (n * bw) +
            2.0 * tokens * e * act / (ext * bw);
      break;
    }
  }
  double reshard = 0.0;
  if (plan.attn == torusplan::AttnSharding::BatchSharded) {
    const double per_chip = static_cast<double>(w.batch) *
                            static_cast<double>(m.n_heads + 2) *
                            static_cast<double>(m.d_head) * act / n;
    reshard = per_chip / bw * (n - 1.0) / n;
  }
  const double block = m.block == torusplan::BlockKind::Serial ? 2.0 : 1.0;
  const double comm =
      static_cast<double>(m.n_layers) * block * (ffn + reshard);
  const double weight_load =
      m.n_params * static_cast<double>(m.weight_bytes) / (n * chip.hbm_bw);

  double total = 0.0;
  for (long long t = 0; t < w.gen_len; ++t) {
    const double context = static_cast<double>(w.input_len + t);
    const double kv_load =
        kv_chip_bytes(m, plan.kv_storage, static_cast<double>(w.batch),
                      context, torus.n_chips()) /
        chip.hbm_bw;
    double compute = 2.0 * m.n_params * tokens / (n * chip.peak_flops);
    if (attention_flops)
      compute += 4.0 * static_cast<double>(w.batch) * (context + 1.0) *
                 static_cast<double>(m.n_heads) *
                 static_cast<double>(m.d_head) *
                 static_cast<double>(m.n_layers) / (n * chip.peak_flops);
    total += std::max(compute, weight_load + kv_load) + (1.0 - alpha) * comm;
  }
  return total;
}

// Per-layer cost of each feedforward layout, rederived inline, plus the
// argmin among the selectable ones (ws2d and the gather ladder; ties go
// to the less-gathered layout).
struct LayoutTable {
  double ws1d, ws2d, wg_x, wg_xy, wg_xyz;
  torusplan::FfnLayoutKind best;
};

inline LayoutTable layout_table(double tokens, long long d_model,
                                long long d_ff, long long x, long long y,
                                long long z, int weight_bytes, int act_bytes,
                                double bw) {
  const double n = static_cast<double>(x * y * z);
  const double e = static_cast<double>(d_model);
  const double f = static_cast<double>(d_ff);
  const double a = static_cast<double>(act_bytes);
  const double wb = static_cast<double>(weight_bytes);
  LayoutTable t{};
  t.ws1d = 2.0 * tokens * e * a / bw;
  t.ws2d = 2.0 * tokens * a *
           (e / static_cast<double>(x) + f / static_cast<double>(y * z)) / bw;
  auto gathered = [&](double ext) {
    return 2.0 * e * f * wb * ext / (n * bw) + 2.0 * tokens * e * a / (ext * bw);
  };
  t.wg_x = gathered(static_cast<double>(x));
  t.wg_xy = gathered(static_cast<double>(x * y));
  t.wg_xyz = gathered(n);
  t.best = torusplan::FfnLayoutKind::WS2D;
  double best = t.ws2d;
  if (t.wg_x < best) {
    best = t.wg_x;
    t.best = torusplan::FfnLayoutKind::WG_X;
  }
  if (t.wg_xy < best) {
    best = t.wg_xy;
    t.best = torusplan::FfnLayoutKind::WG_XY;
  }
  if (t.wg_xyz < best) {
    best = t.wg_xyz;
    t.best = torusplan::FfnLayoutKind::WG_XYZ;
  }
  return t;
}

}  // namespace oracles

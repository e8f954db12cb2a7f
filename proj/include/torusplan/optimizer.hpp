// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "torusplan/cost_engine.hpp"
#include "torusplan/ffn_layouts.hpp"
#include "torusplan/model.hpp"
#include "torusplan/presets.hpp"

namespace torusplan {

struct PhasePlans {
  LayoutPlan prefill;
  LayoutPlan decode;
};

// Layout strategy for a (model, torus, workload) triple.
//
// Decode stays 2D weight-stationary at the optimal split; multiquery
// models shard attention (and the cache) over batch, multihead models
// over heads. Prefill keeps the head sharding and switches to a
// weight-gathered layout once the token batch is large enough: the gather
// extent is the continuous optimum rounded up the X -> XY -> XYZ ladder,
// taken only when it beats weight-stationary.
inline PhasePlans plan(const ModelConfig& m, const ChipSpec& chip,
                       const Torus& torus, const Workload& w) {
  validate(m);
  validate(chip);
  validate(torus);
  validate(w);

  const long long n = torus.n_chips();
  const auto [x, yz] = ws2d_optimal_split(torus, m.d_model, m.d_ff);
  const auto [y, z] = balanced_split(yz);
  const AttnSharding storage = m.attention == AttentionKind::MultiQuery
                                   ? AttnSharding::BatchSharded
                                   : AttnSharding::HeadSharded;

  FfnLayout ws2d;
  ws2d.kind = FfnLayoutKind::WS2D;
  ws2d.x_split = x;
  ws2d.yz_split = yz;

  PhasePlans out;
  out.decode.ffn = ws2d;
  out.decode.attn = storage;
  out.decode.kv_storage = storage;
  out.decode.axis_x = x;
  out.decode.axis_y = y;
  out.decode.axis_z = z;

  out.prefill = out.decode;
  out.prefill.attn = AttnSharding::HeadSharded;

  const double tokens = static_cast<double>(w.batch * w.input_len);
  if (tokens > 0.0) {
    const double bw = effective_bw(chip, kAllAxes);
    const double n_star = wg_optimal_extent(tokens, m.d_ff, n, m.weight_bytes,
                                            m.activation_bytes);
    long long extent = n;
    FfnLayoutKind kind = FfnLayoutKind::WG_XYZ;
    if (static_cast<double>(x) >= n_star) {
      extent = x;
      kind = FfnLayoutKind::WG_X;
    } else if (static_cast<double>(x * y) >= n_star) {
      extent = x * y;
      kind = FfnLayoutKind::WG_XY;
    }
    const double gathered = wg_comm_time(tokens, m.d_model, m.d_ff, extent, n,
                                         m.weight_bytes, m.activation_bytes,
                                         bw);
    const double stationary = ws2d_comm_time(tokens, m.d_model, m.d_ff, x, yz,
                                             m.activation_bytes, bw);
    if (gathered < stationary) {
      out.prefill.ffn.kind = kind;
      out.prefill.ffn.gather_extent = extent;
    }
  }
  return out;
}

// All ordered axis triples multiplying to n_chips, each axis >= min_axis.
// Lexicographic order, deterministic.
inline std::vector<Torus> enumerate_torus_shapes(long long n_chips,
                                                 int min_axis = 1) {
  if (n_chips < 1) throw std::invalid_argument("chip count must be >= 1");
  std::vector<Torus> out;
  for (long long x = 1; x <= n_chips; ++x) {
    if (n_chips % x != 0 || x < min_axis) continue;
    const long long rest = n_chips / x;
    for (long long y = 1; y <= rest; ++y) {
      if (rest % y != 0 || y < min_axis) continue;
      const long long z = rest / y;
      if (z < min_axis) continue;
      out.push_back(Torus{static_cast<int>(x), static_cast<int>(y),
                          static_cast<int>(z)});
    }
  }
  return out;
}

// Most cubic shape, axes descending: minimal largest axis, then minimal
// middle axis.
inline Torus balanced_torus(long long n_chips) {
  auto key = [](const Torus& t) {
    int a[3] = {t.x, t.y, t.z};
    std::sort(a, a + 3, std::greater<int>());
    return std::tuple(a[0], a[1], a[2]);
  };
  Torus best{static_cast<int>(n_chips), 1, 1};
  for (const auto& t : enumerate_torus_shapes(n_chips))
    if (key(t) < key(best)) best = t;
  int a[3] = {best.x, best.y, best.z};
  std::sort(a, a + 3, std::greater<int>());
  return Torus{a[0], a[1], a[2]};
}

struct SweepGrid {
  std::vector<ModelConfig> models;
  ChipSpec chip;
  std::vector<Torus> tori;
  std::vector<long long> batch_sizes;
  std::vector<int> weight_precisions;  // bytes per weight
  std::vector<Phase> phases;
  long long input_len = 2048;
  long long gen_len = 64;
  OverlapPolicy overlap;
  EngineOptions options;
};

inline void validate(const SweepGrid& g) {
  if (g.models.empty() || g.tori.empty() || g.batch_sizes.empty() ||
      g.weight_precisions.empty() || g.phases.empty())
    throw std::invalid_argument("sweep grid must be nonempty");
}

// One evaluated (configuration, phase) point. Infeasible configurations
// are kept, flagged through cost.feasible, so capacity cliffs stay
// visible in reports.
struct SweepRecord {
  std::string model;
  Phase phase = Phase::Decode;
  long long n_chips = 1;
  long long axis_x = 1, axis_y = 1, axis_z = 1;
  long long batch = 1;
  int weight_bytes = 2;
  FfnLayoutKind ffn_layout = FfnLayoutKind::WS2D;
  AttnSharding attn_sharding = AttnSharding::HeadSharded;
  CostBreakdown cost;
  long long gen_len = 0;  // for per-token latency of decode records

  // Per-token for decode, whole-pass for prefill.
  double latency_s() const {
    if (phase == Phase::Decode && gen_len > 0)
      return cost.total_s / static_cast<double>(gen_len);
    return cost.total_s;
  }
};

inline std::vector<SweepRecord> sweep(const SweepGrid& grid) {
  validate(grid);
  std::vector<SweepRecord> out;
  for (const auto& base_model : grid.models)
    for (int wb : grid.weight_precisions)
      for (const auto& torus : grid.tori)
        for (long long batch : grid.batch_sizes) {
          ModelConfig m = base_model;
          m.weight_bytes = wb;
          Workload w{batch, grid.input_len, grid.gen_len};
          const PhasePlans plans = plan(m, grid.chip, torus, w);
          for (Phase phase : grid.phases) {
            const LayoutPlan& lp =
                phase == Phase::Prefill ? plans.prefill : plans.decode;
            SweepRecord r;
            r.model = m.name;
            r.phase = phase;
            r.n_chips = torus.n_chips();
            r.axis_x = lp.axis_x;
            r.axis_y = lp.axis_y;
            r.axis_z = lp.axis_z;
            r.batch = batch;
            r.weight_bytes = wb;
            r.ffn_layout = lp.ffn.kind;
            r.attn_sharding = lp.attn;
            r.gen_len = grid.gen_len;
            r.cost = phase_latency(m, grid.chip, torus, w, phase, lp,
                                   grid.overlap, grid.options);
            out.push_back(std::move(r));
          }
        }
  return out;
}

struct ParetoPoint {
  double latency_s = 0.0;
  double cost_chipsec_per_token = 0.0;
  double mfu = 0.0;
  std::string config;
};

// Maximal subset not strictly dominated under (minimize latency, minimize
// cost). Output sorted by latency, then cost, then input order; exact
// duplicates all survive.
inline std::vector<ParetoPoint> pareto_frontier(
    const std::vector<ParetoPoint>& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = points[a];
    const auto& pb = points[b];
    if (pa.latency_s != pb.latency_s) return pa.latency_s < pb.latency_s;
    if (pa.cost_chipsec_per_token != pb.cost_chipsec_per_token)
      return pa.cost_chipsec_per_token < pb.cost_chipsec_per_token;
    return a < b;
  });
  std::vector<ParetoPoint> out;
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < order.size()) {
    // Points sharing one latency: only the minimal-cost ones can survive.
    std::size_t j = i;
    const double lat = points[order[i]].latency_s;
    const double group_cost = points[order[i]].cost_chipsec_per_token;
    while (j < order.size() && points[order[j]].latency_s == lat &&
           points[order[j]].cost_chipsec_per_token == group_cost)
      ++j;
    if (group_cost < best_cost) {
      for (std::size_t k = i; k < j; ++k) out.push_back(points[order[k]]);
      best_cost = group_cost;
    }
    // Skip costlier members at this latency; they are dominated.
    while (j < order.size() && points[order[j]].latency_s == lat) ++j;
    i = j;
  }
  return out;
}

inline ParetoPoint to_pareto_point(const SweepRecord& r) {
  ParetoPoint p;
  p.latency_s = r.latency_s();
  p.cost_chipsec_per_token = r.cost.cost_chipsec_per_token;
  p.mfu = r.cost.mfu;
  p.config = r.model + "/" + std::string(r.phase == Phase::Prefill ? "prefill"
                                                                   : "decode") +
             "/chips=" + std::to_string(r.n_chips) +
             "/batch=" + std::to_string(r.batch) +
             "/wb=" + std::to_string(r.weight_bytes);
  return p;
}

}  // namespace torusplan

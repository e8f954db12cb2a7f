// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>

#include "torusplan/collectives.hpp"
#include "torusplan/model.hpp"

namespace torusplan {

// =========================================================================
// KV-cache placement and the attention-side costs it induces.
//
// Head sharding splits the cache over the heads dimension, capped at
// n_heads chips; multiquery attention has a single shared K/V head, so
// head sharding degenerates to full replication. Batch sharding splits
// the cache over the batch dimension instead, recovering the 1/n_chips
// scaling for multiquery at the price of an all-to-all on the per-step
// Q/K/V activations.
// =========================================================================

enum class AttnSharding { HeadSharded, BatchSharded };

inline std::string_view to_string(AttnSharding s) {
  return s == AttnSharding::HeadSharded ? "head" : "batch";
}

inline double kv_bytes_per_chip(const ModelConfig& m, AttnSharding sharding,
                                long long batch, long long context_len,
                                long long n_chips) {
  if (batch < 0 || context_len < 0 || n_chips < 1)
    throw std::invalid_argument("bad kv sizing arguments");
  const double total = kv_cache_bytes(m, batch, context_len);
  if (sharding == AttnSharding::BatchSharded) {
    if (m.attention == AttentionKind::MultiHead)
      throw std::invalid_argument(
          "batch-sharded attention requires multiquery");
    return total / static_cast<double>(n_chips);
  }
  if (m.attention == AttentionKind::MultiQuery) return total;  // replicated
  // Sharding beyond n_heads chips only replicates heads; no further savings.
  return total / static_cast<double>(std::min(n_chips, m.n_heads));
}

// Loaded from HBM once per decode step.
inline double kv_load_time(double bytes_per_chip, double hbm_bw) {
  if (hbm_bw <= 0.0) throw std::invalid_argument("hbm_bw must be positive");
  if (bytes_per_chip < 0.0)
    throw std::invalid_argument("byte count must be nonnegative");
  return bytes_per_chip / hbm_bw;
}

// All-to-all that moves the per-step Q, K and V activations into the
// batch sharding. Q carries n_heads heads, the shared K and V one each.
// Prefill keeps the head sharding, so only decode pays this.
inline double attn_resharding_time(const ModelConfig& m, Phase phase,
                                   long long batch, const Torus& torus,
                                   const ChipSpec& chip) {
  if (phase == Phase::Prefill) return 0.0;
  const long long n = torus.n_chips();
  const double step_bytes = static_cast<double>(batch) *
                            static_cast<double>(m.n_heads + 2) *
                            static_cast<double>(m.d_head) *
                            static_cast<double>(m.activation_bytes) /
                            static_cast<double>(n);
  return all_to_all_time(step_bytes, n, effective_bw(chip, kAllAxes));
}

// Largest context length whose KV cache fits in a reserve_frac slice of
// each chip's HBM at the given sharding. Floors: the returned length
// satisfies the capacity inequality and length+1 violates it.
inline long long max_context(const ModelConfig& m, const ChipSpec& chip,
                             const Torus& torus, long long batch,
                             AttnSharding sharding, double reserve_frac) {
  if (reserve_frac <= 0.0 || reserve_frac >= 1.0)
    throw std::invalid_argument("reserve_frac must be in (0, 1)");
  const double per_token_per_chip =
      kv_bytes_per_chip(m, sharding, batch, 1, torus.n_chips());
  const double budget = reserve_frac * chip.hbm_bytes;
  long long len = static_cast<long long>(std::floor(budget / per_token_per_chip));
  // Guard the floor against FP rounding at the boundary.
  while (static_cast<double>(len + 1) * per_token_per_chip <= budget) ++len;
  while (len > 0 && static_cast<double>(len) * per_token_per_chip > budget)
    --len;
  return std::max<long long>(len, 0);
}

}  // namespace torusplan

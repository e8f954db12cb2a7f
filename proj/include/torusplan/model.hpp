// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace torusplan {

enum class AttentionKind { MultiHead, MultiQuery };
enum class BlockKind { Parallel, Serial };

// Architecture hyperparameters and numeric precisions of a decoder-only
// Transformer. Dimensions follow the usual naming: d_model is the embed
// width, d_ff the feedforward intermediate width, n_heads x d_head the
// attention geometry.
struct ModelConfig {
  std::string name;
  double n_params = 0.0;  // parameter count
  int n_layers = 0;
  long long d_model = 0;
  long long d_ff = 0;
  long long n_heads = 0;
  long long d_head = 0;
  AttentionKind attention = AttentionKind::MultiHead;
  BlockKind block = BlockKind::Serial;
  int weight_bytes = 2;      // 2 = bfloat16, 1 = int8
  int activation_bytes = 2;  // KV cache and activation element size
};

inline void validate(const ModelConfig& m) {
  if (m.n_params <= 0.0 || m.n_layers < 1 || m.d_model < 1 || m.d_ff < 1 ||
      m.n_heads < 1 || m.d_head < 1)
    throw std::invalid_argument("model counts must be positive");
  if (m.weight_bytes != 1 && m.weight_bytes != 2)
    throw std::invalid_argument("weight_bytes must be 1 or 2");
  if (m.activation_bytes != 1 && m.activation_bytes != 2 &&
      m.activation_bytes != 4)
    throw std::invalid_argument("activation_bytes must be 1, 2 or 4");
}

// A batch of `batch` sequences, each with input_len tokens of context to
// ingest and gen_len tokens to generate.
struct Workload {
  long long batch = 1;
  long long input_len = 0;
  long long gen_len = 0;
};

inline void validate(const Workload& w) {
  if (w.batch < 1) throw std::invalid_argument("batch must be >= 1");
  if (w.input_len < 0 || w.gen_len < 0)
    throw std::invalid_argument("lengths must be nonnegative");
  if (w.input_len + w.gen_len < 1)
    throw std::invalid_argument("workload must contain at least one token");
}

// Prefill ingests all input tokens in one parallel forward pass; decode
// produces one token per sequence per sequential step.
enum class Phase { Prefill, Decode };

inline long long tokens_per_pass(Phase phase, const Workload& w) {
  return phase == Phase::Prefill ? w.batch * w.input_len : w.batch;
}

// Every matmul touches each (token, parameter) pair once for a multiply
// and once for an add: 2 * n_params FLOPs per token.
inline double matmul_flops_per_token(const ModelConfig& m) {
  return 2.0 * m.n_params;
}

// QK^T plus attention-weighted V over the whole stack. Small next to the
// 2N term for realistic shapes; the cost engine only adds it on request.
inline double attention_flops(const ModelConfig& m, long long batch,
                              long long len_q, long long len_kv) {
  if (len_q < 0 || len_kv < 0)
    throw std::invalid_argument("sequence lengths must be nonnegative");
  return 4.0 * static_cast<double>(batch) * static_cast<double>(len_q) *
         static_cast<double>(len_kv) * static_cast<double>(m.n_heads) *
         static_cast<double>(m.d_head) * static_cast<double>(m.n_layers);
}

// K and V entries for one token in one layer. Multiquery shares a single
// key/value head across all query heads, shrinking this by n_heads.
inline double kv_bytes_per_token_per_layer(const ModelConfig& m) {
  const double heads =
      m.attention == AttentionKind::MultiHead
          ? static_cast<double>(m.n_heads)
          : 1.0;
  return 2.0 * heads * static_cast<double>(m.d_head) *
         static_cast<double>(m.activation_bytes);
}

inline double kv_cache_bytes(const ModelConfig& m, long long batch,
                             long long context_len) {
  return kv_bytes_per_token_per_layer(m) * static_cast<double>(m.n_layers) *
         static_cast<double>(batch) * static_cast<double>(context_len);
}

inline double weight_bytes_total(const ModelConfig& m) {
  return m.n_params * static_cast<double>(m.weight_bytes);
}

}  // namespace torusplan

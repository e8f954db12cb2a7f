// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "torusplan/collectives.hpp"
#include "torusplan/model.hpp"

namespace torusplan {

// TPU v4: 275 TFLOPS bf16, 32 GiB HBM at 1200 GB/s, 270 GB/s of torus
// interconnect per chip. HBM capacity is binary GiB; bandwidths decimal.
inline ChipSpec tpu_v4_chip() {
  ChipSpec c;
  c.peak_flops = 275e12;
  c.hbm_bytes = 32.0 * 1024.0 * 1024.0 * 1024.0;
  c.hbm_bw = 1200e9;
  c.interconnect_bw = 270e9;
  return c;
}

inline std::vector<std::string> model_preset_names() {
  return {"palm-8b",          "palm-62b", "palm-540b",
          "palm-540b-padded", "mtnlg-530b", "fig4"};
}

// palm-540b-padded is the serving variant with heads padded 48 -> 64,
// which costs +18B parameters but divides evenly over 64-chip slices.
// fig4 is a synthetic single feedforward layer used for layout-crossover
// studies (d_model 16384, d_ff 65536 on a 4x4x4 slice).
inline ModelConfig model_preset(std::string_view name) {
  ModelConfig m;
  m.name = std::string(name);
  if (name == "palm-8b") {
    m.n_params = 8.63e9;
    m.n_layers = 32;
    m.d_model = 4096;
    m.d_ff = 16384;
    m.n_heads = 16;
    m.d_head = 256;
    m.attention = AttentionKind::MultiQuery;
    m.block = BlockKind::Parallel;
  } else if (name == "palm-62b") {
    m.n_params = 62.5e9;
    m.n_layers = 64;
    m.d_model = 8192;
    m.d_ff = 32768;
    m.n_heads = 32;
    m.d_head = 256;
    m.attention = AttentionKind::MultiQuery;
    m.block = BlockKind::Parallel;
  } else if (name == "palm-540b") {
    m.n_params = 540e9;
    m.n_layers = 118;
    m.d_model = 18432;
    m.d_ff = 73728;
    m.n_heads = 48;
    m.d_head = 256;
    m.attention = AttentionKind::MultiQuery;
    m.block = BlockKind::Parallel;
  } else if (name == "palm-540b-padded") {
    m.n_params = 558e9;
    m.n_layers = 118;
    m.d_model = 18432;
    m.d_ff = 73728;
    m.n_heads = 64;
    m.d_head = 256;
    m.attention = AttentionKind::MultiQuery;
    m.block = BlockKind::Parallel;
  } else if (name == "mtnlg-530b") {
    m.n_params = 530e9;
    m.n_layers = 105;
    m.d_model = 20480;
    m.d_ff = 81920;
    m.n_heads = 128;
    m.d_head = 160;
    m.attention = AttentionKind::MultiHead;
    m.block = BlockKind::Serial;
  } else if (name == "fig4") {
    m.n_params = 2.0 * 16384.0 * 65536.0;  // the two FFN matrices
    m.n_layers = 1;
    m.d_model = 16384;
    m.d_ff = 65536;
    m.n_heads = 64;
    m.d_head = 256;
    m.attention = AttentionKind::MultiQuery;
    m.block = BlockKind::Parallel;
  } else {
    throw std::invalid_argument("unknown model preset: " + std::string(name));
  }
  validate(m);
  return m;
}

// A fully pinned (model, chip, torus, workload) bundle.
struct Scenario {
  std::string name;
  ModelConfig model;
  ChipSpec chip;
  Torus torus;
  Workload workload;
  Phase phase = Phase::Decode;
};

inline std::vector<std::string> scenario_preset_names() {
  return {"lowlat-prefill", "lowlat-decode", "highthroughput-prefill",
          "highthroughput-decode", "fig4"};
}

// Reference serving points for the padded 540B model on a 4x4x4 slice:
// a latency-oriented pair (int8 weights, batch 1 prefill feeding batch 64
// decode) and a throughput-oriented pair (bf16, batch 512).
inline Scenario scenario_preset(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  s.chip = tpu_v4_chip();
  s.torus = Torus{4, 4, 4};
  if (name == "lowlat-prefill") {
    s.model = model_preset("palm-540b-padded");
    s.model.weight_bytes = 1;
    s.workload = Workload{1, 2048, 0};
    s.phase = Phase::Prefill;
  } else if (name == "lowlat-decode") {
    s.model = model_preset("palm-540b-padded");
    s.model.weight_bytes = 1;
    s.workload = Workload{64, 2048, 64};
    s.phase = Phase::Decode;
  } else if (name == "highthroughput-prefill") {
    s.model = model_preset("palm-540b-padded");
    s.workload = Workload{512, 2048, 0};
    s.phase = Phase::Prefill;
  } else if (name == "highthroughput-decode") {
    s.model = model_preset("palm-540b-padded");
    s.workload = Workload{512, 2048, 64};
    s.phase = Phase::Decode;
  } else if (name == "fig4") {
    s.model = model_preset("fig4");
    s.workload = Workload{1, 2048, 0};
    s.phase = Phase::Prefill;
  } else {
    throw std::invalid_argument("unknown scenario preset: " +
                                std::string(name));
  }
  return s;
}

}  // namespace torusplan

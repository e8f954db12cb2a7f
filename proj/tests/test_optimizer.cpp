// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "torusplan/optimizer.hpp"
#include "torusplan/presets.hpp"

using namespace torusplan;
using Catch::Approx;

namespace {

std::vector<ParetoPoint> random_points(std::mt19937_64& rng, int count,
                                       bool quantized) {
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::vector<ParetoPoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    ParetoPoint p;
    p.latency_s = val(rng);
    p.cost_chipsec_per_token = val(rng);
    if (quantized) {
      // Coarse grid forces ties and duplicates.
      p.latency_s = std::round(p.latency_s * 8.0) / 8.0;
      p.cost_chipsec_per_token =
          std::round(p.cost_chipsec_per_token * 8.0) / 8.0;
    }
    p.config = "p" + std::to_string(i);
    pts.push_back(std::move(p));
  }
  return pts;
}

bool same_points(const std::vector<ParetoPoint>& a,
                 const std::vector<ParetoPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].latency_s != b[i].latency_s ||
        a[i].cost_chipsec_per_token != b[i].cost_chipsec_per_token ||
        a[i].config != b[i].config)
      return false;
  return true;
}

}  // namespace

TEST_CASE("frontier basics") {
  ParetoPoint a{1.0, 2.0, 0.0, "a"};
  ParetoPoint b{2.0, 1.0, 0.0, "b"};
  ParetoPoint c{2.0, 2.0, 0.0, "c"};

  CHECK(pareto_frontier({a}).size() == 1);
  const auto front = pareto_frontier({a, b, c});
  REQUIRE(front.size() == 2);
  CHECK(front[0].config == "a");
  CHECK(front[1].config == "b");
}

TEST_CASE("frontier matches the quadratic filter") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 30; ++round) {
    const auto pts = random_points(rng, 300, round % 2 == 0);
    CHECK(same_points(pareto_frontier(pts), oracles::brute_force_pareto(pts)));
  }
}

TEST_CASE("frontier is idempotent") {
  std::mt19937_64 rng(71);
  for (int round = 0; round < 1000; ++round) {
    const auto pts = random_points(rng, 64, round % 2 == 0);
    const auto once = pareto_frontier(pts);
    CHECK(same_points(once, pareto_frontier(once)));
  }
}

TEST_CASE("torus shape enumeration") {
  const auto shapes = enumerate_torus_shapes(12);
  for (const auto& t : shapes) CHECK(t.n_chips() == 12);
  CHECK(shapes.size() == 18);  // ordered factorizations of 12 into 3 parts

  const auto physical = enumerate_torus_shapes(64, 4);
  CHECK(physical.size() == 1);
  CHECK(physical[0].n_chips() == 64);
  CHECK(physical[0].x == 4);

  const Torus b64 = balanced_torus(64);
  CHECK((b64.x == 4 && b64.y == 4 && b64.z == 4));
  const Torus b8 = balanced_torus(8);
  CHECK((b8.x == 2 && b8.y == 2 && b8.z == 2));
  const Torus b128 = balanced_torus(128);
  CHECK((b128.x == 8 && b128.y == 4 && b128.z == 4));
}

TEST_CASE("reference serving points pick the published layouts") {
  const ChipSpec chip = tpu_v4_chip();
  const Torus torus{4, 4, 4};

  SECTION("low latency, batch-1 prefill / batch-64 decode, int8") {
    ModelConfig m = model_preset("palm-540b-padded");
    m.weight_bytes = 1;
    const PhasePlans p1 = plan(m, chip, torus, Workload{1, 2048, 0});
    CHECK(p1.prefill.ffn.kind == FfnLayoutKind::WS2D);
    CHECK(p1.prefill.attn == AttnSharding::HeadSharded);
    const PhasePlans p64 = plan(m, chip, torus, Workload{64, 2048, 64});
    CHECK(p64.decode.ffn.kind == FfnLayoutKind::WS2D);
    CHECK(p64.decode.attn == AttnSharding::BatchSharded);
  }

  SECTION("high throughput, batch-512, bfloat16") {
    const ModelConfig m = model_preset("palm-540b-padded");
    const PhasePlans p = plan(m, chip, torus, Workload{512, 2048, 64});
    CHECK(p.prefill.ffn.kind == FfnLayoutKind::WG_XYZ);
    CHECK(p.decode.ffn.kind == FfnLayoutKind::WS2D);
    CHECK(p.decode.attn == AttnSharding::BatchSharded);
    CHECK(p.prefill.ffn.x_split == 4);
    CHECK(p.prefill.ffn.yz_split == 16);
  }

  SECTION("multihead models keep head sharding in decode") {
    const ModelConfig m = model_preset("mtnlg-530b");
    const PhasePlans p = plan(m, chip, torus, Workload{64, 2048, 64});
    CHECK(p.decode.attn == AttnSharding::HeadSharded);
    CHECK(p.decode.kv_storage == AttnSharding::HeadSharded);
  }
}

TEST_CASE("memory feasibility is monotone in the chip count") {
  const ChipSpec chip = tpu_v4_chip();
  std::mt19937_64 rng(73);
  const char* names[] = {"palm-62b", "palm-540b", "palm-540b-padded",
                         "mtnlg-530b"};
  for (int i = 0; i < 1000; ++i) {
    ModelConfig m = model_preset(names[rng() % 4]);
    m.weight_bytes = rng() % 2 ? 1 : 2;
    const Workload w{1LL << (rng() % 10), 1LL << (rng() % 13),
                     1 + static_cast<long long>(rng() % 64)};
    const AttnSharding storage = m.attention == AttentionKind::MultiQuery
                                     ? AttnSharding::BatchSharded
                                     : AttnSharding::HeadSharded;
    bool fit_before = false;
    for (long long n : {8LL, 16LL, 32LL, 64LL, 128LL, 256LL}) {
      const bool fits = fits_in_memory(m, chip, balanced_torus(n), w, storage);
      if (fit_before) CHECK(fits);
      fit_before = fit_before || fits;
    }
  }
}

TEST_CASE("sweep of a singleton grid reproduces phase_latency") {
  SweepGrid g;
  g.models = {model_preset("palm-62b")};
  g.chip = tpu_v4_chip();
  g.tori = {balanced_torus(16)};
  g.batch_sizes = {32};
  g.weight_precisions = {2};
  g.phases = {Phase::Decode};
  const auto rows = sweep(g);
  REQUIRE(rows.size() == 1);

  ModelConfig m = g.models[0];
  m.weight_bytes = 2;
  const Workload w{32, g.input_len, g.gen_len};
  const PhasePlans plans = plan(m, g.chip, g.tori[0], w);
  const CostBreakdown direct =
      phase_latency(m, g.chip, g.tori[0], w, Phase::Decode, plans.decode);
  CHECK(rows[0].cost.total_s == direct.total_s);
  CHECK(rows[0].cost.mfu == direct.mfu);
  CHECK(rows[0].n_chips == 16);
}

TEST_CASE("decode cost flattens at large batch") {
  SweepGrid g;
  g.models = {model_preset("palm-540b-padded")};
  g.chip = tpu_v4_chip();
  for (long long n : {8LL, 16LL, 32LL, 64LL, 128LL, 256LL})
    g.tori.push_back(balanced_torus(n));
  for (long long b = 1; b <= 1024; b *= 2) g.batch_sizes.push_back(b);
  g.weight_precisions = {1, 2};
  g.phases = {Phase::Decode};
  const auto rows = sweep(g);

  double min_cost = std::numeric_limits<double>::infinity();
  double min_cost_512 = std::numeric_limits<double>::infinity();
  double min_latency = std::numeric_limits<double>::infinity();
  int min_latency_wb = 0;
  for (const auto& r : rows) {
    if (!r.cost.feasible) continue;
    min_cost = std::min(min_cost, r.cost.cost_chipsec_per_token);
    if (r.batch >= 512)
      min_cost_512 = std::min(min_cost_512, r.cost.cost_chipsec_per_token);
    if (r.latency_s() < min_latency) {
      min_latency = r.latency_s();
      min_latency_wb = r.weight_bytes;
    }
  }
  CHECK(min_cost_512 <= 1.1 * min_cost);
  CHECK(min_latency_wb == 1);  // int8 wins the latency race
}

TEST_CASE("frontier latency grows sublinearly with model size") {
  auto min_latency = [](const char* preset) {
    SweepGrid g;
    g.models = {model_preset(preset)};
    g.chip = tpu_v4_chip();
    for (long long n : {8LL, 16LL, 32LL, 64LL, 128LL, 256LL})
      g.tori.push_back(balanced_torus(n));
    for (long long b = 1; b <= 1024; b *= 2) g.batch_sizes.push_back(b);
    g.weight_precisions = {1, 2};
    g.phases = {Phase::Decode};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : sweep(g))
      if (r.cost.feasible) best = std::min(best, r.latency_s());
    return best;
  };
  const double small = min_latency("palm-62b");
  const double large = min_latency("palm-540b");
  CHECK(large / small < 540.0 / 62.0);
}

// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "torusplan/config_json.hpp"
#include "torusplan/optimizer.hpp"
#include "torusplan/presets.hpp"
#include "torusplan/report.hpp"

using namespace torusplan;

TEST_CASE("model presets round-trip through JSON bit-exactly") {
  for (const auto& name : model_preset_names()) {
    const ModelConfig m = model_preset(name);
    const ModelConfig back = model_from_json(model_to_json(m));
    CHECK(back.name == m.name);
    CHECK(back.n_params == m.n_params);
    CHECK(back.n_layers == m.n_layers);
    CHECK(back.d_model == m.d_model);
    CHECK(back.d_ff == m.d_ff);
    CHECK(back.n_heads == m.n_heads);
    CHECK(back.d_head == m.d_head);
    CHECK(back.attention == m.attention);
    CHECK(back.block == m.block);
    CHECK(back.weight_bytes == m.weight_bytes);
    CHECK(back.activation_bytes == m.activation_bytes);
    // Serialized form is stable too.
    CHECK(model_to_json(back).dump() == model_to_json(m).dump());
  }
}

TEST_CASE("chip, torus and workload round-trip") {
  const ChipSpec c = tpu_v4_chip();
  const ChipSpec c2 = chip_from_json(chip_to_json(c));
  CHECK(c2.peak_flops == c.peak_flops);
  CHECK(c2.hbm_bytes == c.hbm_bytes);
  CHECK(c2.hbm_bw == c.hbm_bw);
  CHECK(c2.interconnect_bw == c.interconnect_bw);

  const Torus t{4, 8, 2};
  const Torus t2 = torus_from_json(torus_to_json(t));
  CHECK((t2.x == 4 && t2.y == 8 && t2.z == 2));

  const Workload w{512, 2048, 64};
  const Workload w2 = workload_from_json(workload_to_json(w));
  CHECK((w2.batch == 512 && w2.input_len == 2048 && w2.gen_len == 64));
}

TEST_CASE("unknown keys are rejected everywhere") {
  CHECK_THROWS_AS(parse_config(R"({"modell": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"torus": {"x":1,"y":1,"w":1}})"),
                  ConfigError);
  nlohmann::json m = model_to_json(model_preset("palm-8b"));
  m["extra"] = 1;
  CHECK_THROWS_AS(model_from_json(m), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"options": {"alpha": 0.2, "beta": 1}})"),
                  ConfigError);
}

TEST_CASE("schema violations carry useful messages") {
  CHECK_THROWS_WITH(parse_config(R"({"torus": {"x":1,"y":1}})"),
                    Catch::Matchers::ContainsSubstring("missing key 'z'"));
  CHECK_THROWS_WITH(
      parse_config(R"({"workload": {"batch":0,"input_len":8,"gen_len":8}})"),
      Catch::Matchers::ContainsSubstring("invalid workload"));
  nlohmann::json m = model_to_json(model_preset("palm-8b"));
  m["attention"] = "flash";
  CHECK_THROWS_AS(model_from_json(m), ConfigError);
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_config("{\n  \"torus\": {,}\n}");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
}

TEST_CASE("partial configs keep other sections unset") {
  const FullConfig c = parse_config(R"({"torus": {"x":2,"y":2,"z":2}})");
  CHECK(c.torus.has_value());
  CHECK_FALSE(c.model.has_value());
  CHECK_FALSE(c.chip.has_value());
  CHECK_FALSE(c.workload.has_value());
  CHECK(c.overlap.alpha == 0.0);
}

TEST_CASE("options section") {
  const FullConfig c = parse_config(
      R"({"options": {"alpha": 0.4, "attention_flops": true,
          "activation_slack_frac": 0.1}})");
  CHECK(c.overlap.alpha == 0.4);
  CHECK(c.options.count_attention_flops);
  CHECK(c.options.activation_slack_frac == 0.1);
  CHECK_THROWS_AS(parse_config(R"({"options": {"alpha": 1.5}})"), ConfigError);
}

TEST_CASE("sweep records survive a CSV round trip byte-for-byte") {
  SweepGrid g;
  g.models = {model_preset("palm-62b"), model_preset("mtnlg-530b")};
  g.chip = tpu_v4_chip();
  g.tori = {balanced_torus(16), balanced_torus(64)};
  g.batch_sizes = {1, 64, 512};
  g.weight_precisions = {1, 2};
  g.phases = {Phase::Prefill, Phase::Decode};
  const auto rows = sweep(g);
  REQUIRE(!rows.empty());

  const std::string text = to_csv(rows);
  const auto parsed = from_csv(text);
  REQUIRE(parsed.size() == rows.size());
  CHECK(to_csv(parsed) == text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].model == rows[i].model);
    CHECK(parsed[i].phase == rows[i].phase);
    CHECK(parsed[i].ffn_layout == rows[i].ffn_layout);
    CHECK(parsed[i].cost.feasible == rows[i].cost.feasible);
  }
}

TEST_CASE("CSV parser rejects damaged input") {
  CHECK_THROWS_AS(from_csv("nonsense\n"), std::invalid_argument);
  const std::string good = to_csv({});
  CHECK_THROWS_AS(from_csv(good + "only,three,fields\n"),
                  std::invalid_argument);
}

// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "torusplan/cost_engine.hpp"
#include "torusplan/model.hpp"
#include "torusplan/presets.hpp"

namespace torusplan {

// JSON schema:
//   { "model": {...}, "chip": {...}, "torus": {"x":,"y":,"z":},
//     "workload": {"batch":,"input_len":,"gen_len":},
//     "options": {"alpha":,"attention_flops":,"activation_slack_frac":} }
// All sections optional; unknown keys anywhere are an error.
struct FullConfig {
  std::optional<ModelConfig> model;
  std::optional<ChipSpec> chip;
  std::optional<Torus> torus;
  std::optional<Workload> workload;
  OverlapPolicy overlap;
  EngineOptions options;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                const std::vector<std::string>& allowed,
                                const std::string& where) {
  if (!obj.is_object())
    throw ConfigError("config section '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T require(const nlohmann::json& obj, const std::string& key,
          const std::string& where) {
  if (!obj.contains(key))
    throw ConfigError("missing key '" + key + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const nlohmann::json& obj, const std::string& key, T fallback,
         const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for '" + key + "' in " + where);
  }
}

}  // namespace detail

inline ModelConfig model_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(
      j,
      {"name", "n_params", "n_layers", "d_model", "d_ff", "n_heads", "d_head",
       "attention", "block", "weight_bytes", "activation_bytes"},
      "model");
  ModelConfig m;
  m.name = detail::get_or<std::string>(j, "name", "", "model");
  m.n_params = detail::require<double>(j, "n_params", "model");
  m.n_layers = detail::require<int>(j, "n_layers", "model");
  m.d_model = detail::require<long long>(j, "d_model", "model");
  m.d_ff = detail::require<long long>(j, "d_ff", "model");
  m.n_heads = detail::require<long long>(j, "n_heads", "model");
  m.d_head = detail::require<long long>(j, "d_head", "model");
  const auto attention =
      detail::require<std::string>(j, "attention", "model");
  if (attention == "multihead") {
    m.attention = AttentionKind::MultiHead;
  } else if (attention == "multiquery") {
    m.attention = AttentionKind::MultiQuery;
  } else {
    throw ConfigError("model.attention must be multihead or multiquery");
  }
  const auto block = detail::require<std::string>(j, "block", "model");
  if (block == "parallel") {
    m.block = BlockKind::Parallel;
  } else if (block == "serial") {
    m.block = BlockKind::Serial;
  } else {
    throw ConfigError("model.block must be parallel or serial");
  }
  m.weight_bytes = detail::get_or<int>(j, "weight_bytes", 2, "model");
  m.activation_bytes = detail::get_or<int>(j, "activation_bytes", 2, "model");
  try {
    validate(m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
  return m;
}

inline nlohmann::json model_to_json(const ModelConfig& m) {
  nlohmann::json j;
  j["name"] = m.name;
  j["n_params"] = m.n_params;
  j["n_layers"] = m.n_layers;
  j["d_model"] = m.d_model;
  j["d_ff"] = m.d_ff;
  j["n_heads"] = m.n_heads;
  j["d_head"] = m.d_head;
  j["attention"] =
      m.attention == AttentionKind::MultiHead ? "multihead" : "multiquery";
  j["block"] = m.block == BlockKind::Parallel ? "parallel" : "serial";
  j["weight_bytes"] = m.weight_bytes;
  j["activation_bytes"] = m.activation_bytes;
  return j;
}

inline ChipSpec chip_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(
      j, {"peak_flops", "hbm_bytes", "hbm_bw", "interconnect_bw"}, "chip");
  ChipSpec c;
  c.peak_flops = detail::require<double>(j, "peak_flops", "chip");
  c.hbm_bytes = detail::require<double>(j, "hbm_bytes", "chip");
  c.hbm_bw = detail::require<double>(j, "hbm_bw", "chip");
  c.interconnect_bw = detail::require<double>(j, "interconnect_bw", "chip");
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid chip: ") + e.what());
  }
  return c;
}

inline nlohmann::json chip_to_json(const ChipSpec& c) {
  return {{"peak_flops", c.peak_flops},
          {"hbm_bytes", c.hbm_bytes},
          {"hbm_bw", c.hbm_bw},
          {"interconnect_bw", c.interconnect_bw}};
}

inline Torus torus_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(j, {"x", "y", "z"}, "torus");
  Torus t;
  t.x = detail::require<int>(j, "x", "torus");
  t.y = detail::require<int>(j, "y", "torus");
  t.z = detail::require<int>(j, "z", "torus");
  try {
    validate(t);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid torus: ") + e.what());
  }
  return t;
}

inline nlohmann::json torus_to_json(const Torus& t) {
  return {{"x", t.x}, {"y", t.y}, {"z", t.z}};
}

inline Workload workload_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(j, {"batch", "input_len", "gen_len"},
                              "workload");
  Workload w;
  w.batch = detail::require<long long>(j, "batch", "workload");
  w.input_len = detail::require<long long>(j, "input_len", "workload");
  w.gen_len = detail::require<long long>(j, "gen_len", "workload");
  try {
    validate(w);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid workload: ") + e.what());
  }
  return w;
}

inline nlohmann::json workload_to_json(const Workload& w) {
  return {{"batch", w.batch},
          {"input_len", w.input_len},
          {"gen_len", w.gen_len}};
}

inline FullConfig config_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(
      j, {"model", "chip", "torus", "workload", "options"}, "config");
  FullConfig c;
  if (j.contains("model")) c.model = model_from_json(j.at("model"));
  if (j.contains("chip")) c.chip = chip_from_json(j.at("chip"));
  if (j.contains("torus")) c.torus = torus_from_json(j.at("torus"));
  if (j.contains("workload")) c.workload = workload_from_json(j.at("workload"));
  if (j.contains("options")) {
    const auto& o = j.at("options");
    detail::reject_unknown_keys(
        o, {"alpha", "attention_flops", "activation_slack_frac"}, "options");
    c.overlap.alpha = detail::get_or<double>(o, "alpha", 0.0, "options");
    c.options.count_attention_flops =
        detail::get_or<bool>(o, "attention_flops", false, "options");
    c.options.activation_slack_frac = detail::get_or<double>(
        o, "activation_slack_frac", 0.05, "options");
    try {
      validate(c.overlap);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("invalid options: ") + e.what());
    }
  }
  return c;
}

// Parses a config document; parse errors carry nlohmann's line/column
// diagnostics, schema errors become ConfigError.
inline FullConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(j);
}

}  // namespace torusplan

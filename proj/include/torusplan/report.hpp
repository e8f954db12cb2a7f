// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "torusplan/cost_engine.hpp"
#include "torusplan/optimizer.hpp"

namespace torusplan {

// Deterministic number formatting for machine output: same value, same
// bytes. %.12g is plenty for model outputs and round-trips cleanly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline nlohmann::json breakdown_to_json(const CostBreakdown& b) {
  nlohmann::json j;
  j["compute_s"] = b.compute_s;
  j["weight_load_s"] = b.weight_load_s;
  j["kv_load_s"] = b.kv_load_s;
  j["comm_s"] = b.comm_s;
  j["total_s"] = b.total_s;
  j["mfu"] = b.mfu;
  j["cost_chipsec_per_token"] = b.cost_chipsec_per_token;
  j["feasible"] = b.feasible;
  return j;
}

inline constexpr const char* kSweepCsvHeader =
    "model,phase,n_chips,X,Y,Z,batch,weight_bytes,ffn_layout,attn_sharding,"
    "compute_s,weight_load_s,kv_load_s,comm_s,total_s,mfu,"
    "cost_chipsec_per_token,feasible";

inline std::string to_csv_row(const SweepRecord& r) {
  std::string out;
  out += r.model;
  out += ',';
  out += r.phase == Phase::Prefill ? "prefill" : "decode";
  out += ',' + std::to_string(r.n_chips);
  out += ',' + std::to_string(r.axis_x);
  out += ',' + std::to_string(r.axis_y);
  out += ',' + std::to_string(r.axis_z);
  out += ',' + std::to_string(r.batch);
  out += ',' + std::to_string(r.weight_bytes);
  out += ',';
  out += to_string(r.ffn_layout);
  out += ',';
  out += to_string(r.attn_sharding);
  out += ',' + format_double(r.cost.compute_s);
  out += ',' + format_double(r.cost.weight_load_s);
  out += ',' + format_double(r.cost.kv_load_s);
  out += ',' + format_double(r.cost.comm_s);
  out += ',' + format_double(r.cost.total_s);
  out += ',' + format_double(r.cost.mfu);
  out += ',' + format_double(r.cost.cost_chipsec_per_token);
  out += ',';
  out += r.cost.feasible ? "true" : "false";
  return out;
}

inline std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += to_csv_row(r);
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline FfnLayoutKind ffn_layout_from_string(const std::string& s) {
  if (s == "ws1d") return FfnLayoutKind::WS1D;
  if (s == "ws2d") return FfnLayoutKind::WS2D;
  if (s == "wg_x") return FfnLayoutKind::WG_X;
  if (s == "wg_xy") return FfnLayoutKind::WG_XY;
  if (s == "wg_xyz") return FfnLayoutKind::WG_XYZ;
  throw std::invalid_argument("unknown ffn layout: " + s);
}

}  // namespace detail

// Inverse of to_csv. Throws on a malformed header, field count mismatch,
// or an unparsable value.
inline std::vector<SweepRecord> from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader)
    throw std::invalid_argument("bad sweep CSV header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_fields(line);
    if (f.size() != 18)
      throw std::invalid_argument("bad sweep CSV row: " + line);
    SweepRecord r;
    std::size_t i = 0;
    r.model = f[i++];
    const std::string phase = f[i++];
    if (phase == "prefill") {
      r.phase = Phase::Prefill;
    } else if (phase == "decode") {
      r.phase = Phase::Decode;
    } else {
      throw std::invalid_argument("unknown phase: " + phase);
    }
    r.n_chips = std::stoll(f[i++]);
    r.axis_x = std::stoll(f[i++]);
    r.axis_y = std::stoll(f[i++]);
    r.axis_z = std::stoll(f[i++]);
    r.batch = std::stoll(f[i++]);
    r.weight_bytes = std::stoi(f[i++]);
    r.ffn_layout = detail::ffn_layout_from_string(f[i++]);
    const std::string attn = f[i++];
    if (attn == "head") {
      r.attn_sharding = AttnSharding::HeadSharded;
    } else if (attn == "batch") {
      r.attn_sharding = AttnSharding::BatchSharded;
    } else {
      throw std::invalid_argument("unknown attention sharding: " + attn);
    }
    r.cost.compute_s = std::stod(f[i++]);
    r.cost.weight_load_s = std::stod(f[i++]);
    r.cost.kv_load_s = std::stod(f[i++]);
    r.cost.comm_s = std::stod(f[i++]);
    r.cost.total_s = std::stod(f[i++]);
    r.cost.mfu = std::stod(f[i++]);
    r.cost.cost_chipsec_per_token = std::stod(f[i++]);
    const std::string feasible = f[i++];
    if (feasible == "true") {
      r.cost.feasible = true;
    } else if (feasible == "false") {
      r.cost.feasible = false;
    } else {
      throw std::invalid_argument("bad feasible flag: " + feasible);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace torusplan

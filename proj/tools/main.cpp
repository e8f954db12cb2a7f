// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0
//
// torusplan: analytical planner for partitioned Transformer inference on
// 3D-torus accelerator slices. Estimates per-phase latency, MFU and
// chip-seconds/token from closed-form compute, memory and collective
// costs; sweeps configurations; reports Pareto frontiers, capacity tables
// and feedforward layout crossovers.
//
// Exit codes: 0 success, 2 usage error, 3 config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "torusplan/torusplan.hpp"

namespace tp = torusplan;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<long long> parse_ll_list(const std::string& csv,
                                     const std::string& flag) {
  std::vector<long long> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      throw UsageError("bad value '" + tok + "' for " + flag);
    }
  }
  if (out.empty()) throw UsageError("empty list for " + flag);
  return out;
}

int weight_bytes_from_name(const std::string& name) {
  if (name == "int8") return 1;
  if (name == "bfloat16" || name == "bf16") return 2;
  throw UsageError("--weights must be int8 or bfloat16, got '" + name + "'");
}

// Flag values shared by all subcommands. Resolution order:
// scenario/preset defaults, then --config, then explicit flags.
struct CommonOpts {
  std::string preset;
  std::string scenario;
  std::string config_path;
  long long chips = 0;
  std::vector<int> torus_axes;
  long long batch = -1;
  long long input_len = -1;
  long long gen_len = -1;
  std::string weights;
  double alpha = -1.0;
  std::string output;  // json | csv | table

  void attach(CLI::App* cmd, const std::string& default_output) {
    output = default_output;
    cmd->add_option("--preset", preset, "model preset name");
    cmd->add_option("--scenario", scenario, "scenario preset name");
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--chips", chips, "chip count (balanced torus shape)");
    cmd->add_option("--torus", torus_axes, "torus axes X Y Z")->expected(3);
    cmd->add_option("--batch", batch, "batch size in sequences");
    cmd->add_option("--input-len", input_len, "input tokens per sequence");
    cmd->add_option("--gen-len", gen_len, "generated tokens per sequence");
    cmd->add_option("--weights", weights, "weight format: int8 | bfloat16");
    cmd->add_option("--alpha", alpha,
                    "fraction of communication hidden under compute [0,1]");
    cmd->add_option("--output", output, "output format: json | csv | table");
  }
};

struct Resolved {
  tp::ModelConfig model;
  tp::ChipSpec chip;
  tp::Torus torus;
  tp::Workload workload;
  tp::OverlapPolicy overlap;
  tp::EngineOptions options;
};

Resolved resolve(const CommonOpts& o, bool need_model = true) {
  Resolved r;
  r.chip = tp::tpu_v4_chip();
  r.torus = tp::Torus{4, 4, 4};
  r.workload = tp::Workload{64, 2048, 64};
  bool have_model = false;

  if (!o.scenario.empty()) {
    tp::Scenario s;
    try {
      s = tp::scenario_preset(o.scenario);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string(e.what()) + " (--scenario)");
    }
    r.model = s.model;
    r.chip = s.chip;
    r.torus = s.torus;
    r.workload = s.workload;
    have_model = true;
  }
  if (!o.preset.empty()) {
    try {
      r.model = tp::model_preset(o.preset);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string(e.what()) + " (--preset)");
    }
    have_model = true;
  }
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in)
      throw tp::ConfigError("cannot open config file: " + o.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const tp::FullConfig c = tp::parse_config(buf.str());
    if (c.model) {
      r.model = *c.model;
      have_model = true;
    }
    if (c.chip) r.chip = *c.chip;
    if (c.torus) r.torus = *c.torus;
    if (c.workload) r.workload = *c.workload;
    r.overlap = c.overlap;
    r.options = c.options;
  }
  if (o.chips > 0) r.torus = tp::balanced_torus(o.chips);
  if (o.torus_axes.size() == 3)
    r.torus = tp::Torus{o.torus_axes[0], o.torus_axes[1], o.torus_axes[2]};
  if (o.batch >= 0) r.workload.batch = o.batch;
  if (o.input_len >= 0) r.workload.input_len = o.input_len;
  if (o.gen_len >= 0) r.workload.gen_len = o.gen_len;
  if (!o.weights.empty())
    r.model.weight_bytes = weight_bytes_from_name(o.weights);
  if (o.alpha >= 0.0) r.overlap.alpha = o.alpha;

  if (need_model && !have_model)
    throw UsageError("no model given: use --preset, --scenario or --config");
  try {
    tp::validate(r.torus);
    if (need_model) tp::validate(r.model);
    tp::validate(r.overlap);
  } catch (const std::invalid_argument& e) {
    throw tp::ConfigError(e.what());
  }
  return r;
}

void emit(const std::string& text) { std::fwrite(text.data(), 1, text.size(), stdout); }

// ------------------------------------------------------------------
// estimate
// ------------------------------------------------------------------

int run_estimate(const CommonOpts& o, const std::string& phase_name) {
  Resolved r = resolve(o);
  try {
    tp::validate(r.workload);
  } catch (const std::invalid_argument& e) {
    throw tp::ConfigError(e.what());
  }
  const tp::PhasePlans plans = tp::plan(r.model, r.chip, r.torus, r.workload);

  tp::CostBreakdown prefill, decode;
  if (r.workload.input_len > 0)
    prefill = tp::phase_latency(r.model, r.chip, r.torus, r.workload,
                                tp::Phase::Prefill, plans.prefill, r.overlap,
                                r.options);
  if (r.workload.gen_len > 0)
    decode = tp::phase_latency(r.model, r.chip, r.torus, r.workload,
                               tp::Phase::Decode, plans.decode, r.overlap,
                               r.options);

  tp::CostBreakdown chosen;
  if (phase_name == "prefill") {
    if (r.workload.input_len <= 0)
      throw tp::ConfigError("prefill phase needs input_len > 0");
    chosen = prefill;
  } else if (phase_name == "decode") {
    if (r.workload.gen_len <= 0)
      throw tp::ConfigError("decode phase needs gen_len > 0");
    chosen = decode;
  } else if (phase_name == "total") {
    const double tokens = static_cast<double>(
        r.workload.batch * (r.workload.input_len + r.workload.gen_len));
    chosen = tp::combine_breakdowns(prefill, decode, r.model, r.chip,
                                    r.torus.n_chips(), tokens);
    chosen.feasible = prefill.feasible && decode.feasible;
  } else {
    throw UsageError("--phase must be prefill, decode or total");
  }

  if (o.output == "csv") {
    emit(
        "compute_s,weight_load_s,kv_load_s,comm_s,total_s,mfu,"
        "cost_chipsec_per_token,feasible\n");
    emit(tp::format_double(chosen.compute_s) + "," +
         tp::format_double(chosen.weight_load_s) + "," +
         tp::format_double(chosen.kv_load_s) + "," +
         tp::format_double(chosen.comm_s) + "," +
         tp::format_double(chosen.total_s) + "," +
         tp::format_double(chosen.mfu) + "," +
         tp::format_double(chosen.cost_chipsec_per_token) + "," +
         (chosen.feasible ? "true" : "false") + "\n");
  } else {
    emit(tp::breakdown_to_json(chosen).dump(2) + "\n");
  }
  return 0;
}

// ------------------------------------------------------------------
// sweep / pareto
// ------------------------------------------------------------------

struct GridOpts {
  std::string chip_counts = "8,16,32,64,128,256";
  std::string batches = "1,2,4,8,16,32,64,128,256,512";
  std::string precisions = "int8,bfloat16";
  std::string phases = "prefill,decode";
  std::string series;

  void attach(CLI::App* cmd) {
    cmd->add_option("--chip-counts", chip_counts, "comma list of chip counts");
    cmd->add_option("--batches", batches, "comma list of batch sizes");
    cmd->add_option("--precisions", precisions,
                    "comma list of weight formats (int8, bfloat16)");
    cmd->add_option("--phases", phases, "comma list of phases");
    cmd->add_option("--series", series,
                    "named data series: fig1-left | fig1-right | figB1 | figC1");
  }
};

tp::SweepGrid build_grid(const CommonOpts& o, const GridOpts& g) {
  Resolved r = resolve(o, /*need_model=*/g.series.empty());
  tp::SweepGrid grid;
  grid.chip = r.chip;
  grid.overlap = r.overlap;
  grid.options = r.options;
  grid.input_len = r.workload.input_len;
  grid.gen_len = r.workload.gen_len;

  if (!g.series.empty()) {
    if (g.series != "fig1-left" && g.series != "fig1-right" &&
        g.series != "figB1" && g.series != "figC1")
      throw UsageError("unknown series '" + g.series + "' (--series)");
    for (const char* name : {"palm-8b", "palm-62b", "palm-540b-padded"})
      grid.models.push_back(tp::model_preset(name));
    for (long long c : {8, 16, 32, 64, 128, 256})
      grid.tori.push_back(tp::balanced_torus(c));
    grid.batch_sizes = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    grid.weight_precisions = {1, 2};
    grid.input_len = 2048;
    grid.gen_len = 64;
    if (g.series == "fig1-left") {
      grid.phases = {tp::Phase::Decode};
    } else if (g.series == "fig1-right") {
      grid.phases = {tp::Phase::Prefill};
    } else {
      grid.phases = {tp::Phase::Prefill, tp::Phase::Decode};
    }
    if (g.series == "figB1") {
      grid.batch_sizes = {1};
      grid.phases = {tp::Phase::Prefill};
      grid.gen_len = 0;
    }
    return grid;
  }

  grid.models.push_back(r.model);
  for (long long c : parse_ll_list(g.chip_counts, "--chip-counts"))
    grid.tori.push_back(tp::balanced_torus(c));
  grid.batch_sizes = parse_ll_list(g.batches, "--batches");
  {
    std::stringstream ss(g.precisions);
    std::string tok;
    while (std::getline(ss, tok, ','))
      grid.weight_precisions.push_back(weight_bytes_from_name(tok));
  }
  grid.phases.clear();
  {
    std::stringstream ss(g.phases);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "prefill") {
        grid.phases.push_back(tp::Phase::Prefill);
      } else if (tok == "decode") {
        grid.phases.push_back(tp::Phase::Decode);
      } else {
        throw UsageError("bad phase '" + tok + "' for --phases");
      }
    }
  }
  return grid;
}

std::vector<tp::SweepRecord> run_series_sweep(const tp::SweepGrid& base,
                                              const std::string& series) {
  if (series != "figB1") return tp::sweep(base);
  // Sequence-length sweep at batch 1; one grid per length.
  std::vector<tp::SweepRecord> out;
  for (long long len : {32, 64, 128, 256, 512, 1024}) {
    tp::SweepGrid g = base;
    g.input_len = len;
    auto rows = tp::sweep(g);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::string records_to_json(const std::vector<tp::SweepRecord>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["model"] = r.model;
    j["phase"] = r.phase == tp::Phase::Prefill ? "prefill" : "decode";
    j["n_chips"] = r.n_chips;
    j["X"] = r.axis_x;
    j["Y"] = r.axis_y;
    j["Z"] = r.axis_z;
    j["batch"] = r.batch;
    j["weight_bytes"] = r.weight_bytes;
    j["ffn_layout"] = std::string(tp::to_string(r.ffn_layout));
    j["attn_sharding"] = std::string(tp::to_string(r.attn_sharding));
    j["cost"] = tp::breakdown_to_json(r.cost);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

int run_sweep(const CommonOpts& o, const GridOpts& g) {
  const tp::SweepGrid grid = build_grid(o, g);
  const auto rows = run_series_sweep(grid, g.series);
  if (o.output == "json") {
    emit(records_to_json(rows));
  } else {
    emit(tp::to_csv(rows));
  }
  return 0;
}

int run_pareto(const CommonOpts& o, const GridOpts& g,
               const std::string& input_path) {
  std::vector<tp::SweepRecord> rows;
  if (!input_path.empty()) {
    std::ifstream in(input_path);
    if (!in) throw tp::ConfigError("cannot open input CSV: " + input_path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      rows = tp::from_csv(buf.str());
    } catch (const std::invalid_argument& e) {
      throw tp::ConfigError(e.what());
    }
  } else {
    rows = run_series_sweep(build_grid(o, g), g.series);
  }

  // Frontier per (model, phase, weight format) line, feasible points only.
  std::map<std::string, std::vector<tp::SweepRecord>> groups;
  for (const auto& r : rows) {
    if (!r.cost.feasible) continue;
    groups[r.model + "|" + (r.phase == tp::Phase::Prefill ? "p" : "d") + "|" +
           std::to_string(r.weight_bytes)]
        .push_back(r);
  }
  std::vector<tp::SweepRecord> frontier_rows;
  for (const auto& [key, members] : groups) {
    std::vector<tp::ParetoPoint> pts;
    pts.reserve(members.size());
    for (const auto& r : members) pts.push_back(tp::to_pareto_point(r));
    const auto front = tp::pareto_frontier(pts);
    for (const auto& p : front)
      for (const auto& r : members)
        if (tp::to_pareto_point(r).config == p.config &&
            r.latency_s() == p.latency_s) {
          frontier_rows.push_back(r);
          break;
        }
  }
  if (o.output == "json") {
    emit(records_to_json(frontier_rows));
  } else {
    emit(tp::to_csv(frontier_rows));
  }
  return 0;
}

// ------------------------------------------------------------------
// max-context
// ------------------------------------------------------------------

int run_max_context(const CommonOpts& o, const std::string& batches_csv,
                    double reserve) {
  Resolved r = resolve(o);
  // --batch narrows the table to one batch size.
  const auto batches = o.batch >= 0
                           ? std::vector<long long>{o.batch}
                           : parse_ll_list(batches_csv, "--batches");

  struct Variant {
    std::string name;
    tp::ModelConfig model;
    tp::AttnSharding sharding;
  };
  // Multihead comparison point keeps attention parameter count constant
  // by halving d_head when the base model is multiquery.
  tp::ModelConfig mh = r.model;
  mh.attention = tp::AttentionKind::MultiHead;
  if (r.model.attention == tp::AttentionKind::MultiQuery)
    mh.d_head = std::max<long long>(1, r.model.d_head / 2);
  tp::ModelConfig mq = r.model;
  mq.attention = tp::AttentionKind::MultiQuery;
  const std::vector<Variant> variants = {
      {"multihead", mh, tp::AttnSharding::HeadSharded},
      {"baseline-multiquery", mq, tp::AttnSharding::HeadSharded},
      {"optimized-multiquery", mq, tp::AttnSharding::BatchSharded},
  };

  std::vector<std::tuple<std::string, long long, long long, long long>> rows;
  for (const auto& v : variants)
    for (long long b : batches)
      rows.emplace_back(v.name, v.model.d_head, b,
                        tp::max_context(v.model, r.chip, r.torus, b,
                                        v.sharding, reserve));

  if (o.output == "csv") {
    emit("variant,d_head,batch,max_context\n");
    for (const auto& [name, dh, b, ctx] : rows)
      emit(name + "," + std::to_string(dh) + "," + std::to_string(b) + "," +
           std::to_string(ctx) + "\n");
  } else if (o.output == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [name, dh, b, ctx] : rows)
      arr.push_back({{"variant", name},
                     {"d_head", dh},
                     {"batch", b},
                     {"max_context", ctx}});
    emit(arr.dump(2) + "\n");
  } else {
    std::printf("max context on %lld chips, %.0f%% of HBM reserved for KV\n",
                static_cast<long long>(r.torus.n_chips()), reserve * 100.0);
    std::printf("%-22s %8s", "variant", "d_head");
    for (long long b : batches) std::printf("  batch=%-8lld", b);
    std::printf("\n");
    for (const auto& v : variants) {
      std::printf("%-22s %8lld", v.name.c_str(), v.model.d_head);
      for (long long b : batches)
        std::printf("  %-14lld",
                    tp::max_context(v.model, r.chip, r.torus, b, v.sharding,
                                    reserve));
      std::printf("\n");
    }
  }
  return 0;
}

// ------------------------------------------------------------------
// crossover
// ------------------------------------------------------------------

int run_crossover(const CommonOpts& o, int min_exp, int max_exp) {
  CommonOpts opts = o;
  if (opts.preset.empty() && opts.scenario.empty() &&
      opts.config_path.empty())
    opts.preset = "fig4";
  Resolved r = resolve(opts);
  if (min_exp < 0 || max_exp < min_exp)
    throw UsageError("bad token exponent range for --min-exp/--max-exp");

  struct Row {
    long long tokens;
    tp::LayoutTime lt;
    bool best;
  };
  std::vector<Row> rows;
  std::vector<std::pair<long long, tp::FfnLayoutKind>> switches;
  tp::FfnLayoutKind prev = tp::FfnLayoutKind::WS1D;
  bool first = true;
  for (int e = min_exp; e <= max_exp; ++e) {
    const long long tokens = 1LL << e;
    const auto all = tp::ffn_layout_times(static_cast<double>(tokens), r.model,
                                          r.chip, r.torus);
    const auto [best, seconds] = tp::best_ffn_layout(
        tp::Phase::Prefill, static_cast<double>(tokens), r.model, r.chip,
        r.torus);
    for (const auto& lt : all)
      rows.push_back({tokens, lt, lt.layout.kind == best.kind});
    if (first || best.kind != prev) switches.emplace_back(tokens, best.kind);
    prev = best.kind;
    first = false;
  }

  if (o.output == "csv" || o.output == "json") {
    if (o.output == "json") {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& row : rows)
        arr.push_back({{"tokens", row.tokens},
                       {"layout", std::string(tp::to_string(row.lt.layout.kind))},
                       {"seconds_per_layer", row.lt.seconds},
                       {"volume_bytes", row.lt.volume_bytes},
                       {"best", row.best}});
      emit(arr.dump(2) + "\n");
    } else {
      emit("tokens,layout,seconds_per_layer,volume_bytes,best\n");
      for (const auto& row : rows)
        emit(std::to_string(row.tokens) + "," +
             std::string(tp::to_string(row.lt.layout.kind)) + "," +
             tp::format_double(row.lt.seconds) + "," +
             tp::format_double(row.lt.volume_bytes) + "," +
             (row.best ? "true" : "false") + "\n");
    }
  } else {
    std::printf("feedforward layout regimes, %s on %lldx%dx%d torus\n",
                r.model.name.c_str(), static_cast<long long>(r.torus.x),
                r.torus.y, r.torus.z);
    std::printf("%10s  %8s  %12s  %14s\n", "tokens", "best", "s/layer",
                "volume/layer");
    long long last_tokens = -1;
    for (const auto& row : rows) {
      if (!row.best) continue;
      if (row.tokens == last_tokens) continue;
      last_tokens = row.tokens;
      std::printf("%10lld  %8s  %12.6g  %14.6g\n", row.tokens,
                  std::string(tp::to_string(row.lt.layout.kind)).c_str(),
                  row.lt.seconds, row.lt.volume_bytes);
    }
    std::printf("\nregime switches:\n");
    for (const auto& [tokens, kind] : switches)
      std::printf("  from %lld tokens: %s\n", tokens,
                  std::string(tp::to_string(kind)).c_str());
  }
  return 0;
}

// ------------------------------------------------------------------
// compare
// ------------------------------------------------------------------

int run_compare(const CommonOpts& o, const std::string& preset_a,
                const std::string& preset_b, const std::string& batches_csv) {
  const auto batches = parse_ll_list(batches_csv, "--batches");
  struct Line {
    std::string preset;
    long long batch;
    tp::CostBreakdown prefill, decode, total;
  };
  std::vector<Line> lines;
  for (const std::string& name : {preset_a, preset_b}) {
    CommonOpts po = o;
    po.preset = name;
    Resolved r = resolve(po);
    for (long long b : batches) {
      tp::Workload w = r.workload;
      w.batch = b;
      const tp::PhasePlans plans = tp::plan(r.model, r.chip, r.torus, w);
      Line line;
      line.preset = name;
      line.batch = b;
      line.prefill = tp::phase_latency(r.model, r.chip, r.torus, w,
                                       tp::Phase::Prefill, plans.prefill,
                                       r.overlap, r.options);
      line.decode = tp::phase_latency(r.model, r.chip, r.torus, w,
                                      tp::Phase::Decode, plans.decode,
                                      r.overlap, r.options);
      const double tokens =
          static_cast<double>(b * (w.input_len + w.gen_len));
      line.total = tp::combine_breakdowns(line.prefill, line.decode, r.model,
                                          r.chip, r.torus.n_chips(), tokens);
      lines.push_back(std::move(line));
    }
  }

  if (o.output == "csv") {
    emit("preset,batch,prefill_s,decode_s,total_s,mfu,feasible\n");
    for (const auto& l : lines)
      emit(l.preset + "," + std::to_string(l.batch) + "," +
           tp::format_double(l.prefill.total_s) + "," +
           tp::format_double(l.decode.total_s) + "," +
           tp::format_double(l.total.total_s) + "," +
           tp::format_double(l.total.mfu) + "," +
           (l.total.feasible ? "true" : "false") + "\n");
  } else if (o.output == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : lines)
      arr.push_back({{"preset", l.preset},
                     {"batch", l.batch},
                     {"prefill_s", l.prefill.total_s},
                     {"decode_s", l.decode.total_s},
                     {"total_s", l.total.total_s},
                     {"mfu", l.total.mfu},
                     {"feasible", l.total.feasible}});
    emit(arr.dump(2) + "\n");
  } else {
    std::printf("%-18s %8s %12s %12s %12s %8s %9s\n", "preset", "batch",
                "prefill", "decode", "total", "mfu", "feasible");
    for (const auto& l : lines)
      std::printf("%-18s %8lld %10.1fms %10.1fms %10.1fms %7.1f%% %9s\n",
                  l.preset.c_str(), l.batch, l.prefill.total_s * 1e3,
                  l.decode.total_s * 1e3, l.total.total_s * 1e3,
                  l.total.mfu * 100.0, l.total.feasible ? "yes" : "no");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "torusplan: analytical latency/throughput planner for partitioned "
      "Transformer inference on 3D-torus accelerator slices"};
  app.require_subcommand(1);

  CommonOpts est_opts, sweep_opts, pareto_opts, ctx_opts, cross_opts,
      cmp_opts;
  GridOpts sweep_grid, pareto_grid;

  auto* est = app.add_subcommand("estimate",
                                 "cost breakdown for one configuration");
  est_opts.attach(est, "json");
  std::string est_phase = "total";
  est->add_option("--phase", est_phase, "prefill | decode | total");

  auto* sw = app.add_subcommand("sweep", "evaluate a configuration grid");
  sweep_opts.attach(sw, "csv");
  sweep_grid.attach(sw);

  auto* pr = app.add_subcommand("pareto",
                                "non-dominated frontier of a sweep");
  pareto_opts.attach(pr, "csv");
  pareto_grid.attach(pr);
  std::string pareto_input;
  pr->add_option("--input", pareto_input, "filter an existing sweep CSV");

  auto* mc = app.add_subcommand("max-context",
                                "KV-cache capacity per attention variant");
  ctx_opts.attach(mc, "table");
  std::string mc_batches = "128,512";
  double mc_reserve = 0.3;
  mc->add_option("--batches", mc_batches, "comma list of batch sizes");
  mc->add_option("--reserve", mc_reserve, "HBM fraction reserved for KV");

  auto* cr = app.add_subcommand(
      "crossover", "feedforward layout regimes vs tokens per batch");
  cross_opts.attach(cr, "table");
  int cr_min_exp = 11, cr_max_exp = 20;
  cr->add_option("--min-exp", cr_min_exp, "smallest token count as power of 2");
  cr->add_option("--max-exp", cr_max_exp, "largest token count as power of 2");

  auto* cp = app.add_subcommand("compare",
                                "two presets side by side at equal workload");
  cmp_opts.attach(cp, "table");
  std::string cmp_a, cmp_b, cmp_batches = "4,8,16,32,64,128,256";
  cp->add_option("preset_a", cmp_a, "first model preset")->required();
  cp->add_option("preset_b", cmp_b, "second model preset")->required();
  cp->add_option("--batch-list", cmp_batches, "comma list of batch sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (est->parsed()) return run_estimate(est_opts, est_phase);
    if (sw->parsed()) return run_sweep(sweep_opts, sweep_grid);
    if (pr->parsed()) return run_pareto(pareto_opts, pareto_grid, pareto_input);
    if (mc->parsed()) return run_max_context(ctx_opts, mc_batches, mc_reserve);
    if (cr->parsed()) return run_crossover(cross_opts, cr_min_exp, cr_max_exp);
    if (cp->parsed()) return run_compare(cmp_opts, cmp_a, cmp_b, cmp_batches);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

#include "forge/forge.h"

#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/core.hpp"
#include "forge/perturb.hpp"
#include "forge/promptkit.hpp"
#include "forge/runner.hpp"
#include "forge/selection.hpp"
#include "forge/similarity.hpp"
#include "forge/taskgen.hpp"

using nlohmann::json;

struct forge_ctx {
  std::string last_error;
};

namespace {

constexpr const char* kVersion = "0.1.0";

int guard(forge_ctx* ctx, const std::function<void()>& fn) {
  if (!ctx) return 2;
  try {
    fn();
    ctx->last_error.clear();
    return 0;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return 1;
  } catch (...) {
    ctx->last_error = "unknown error";
    return 1;
  }
}

std::string opt(const char* s, const char* fallback = "") {
  return s ? std::string(s) : std::string(fallback);
}

std::vector<std::string> load_lexicon(const std::string& path) {
  std::vector<std::string> words;
  for (const auto& line : forge::util::read_lines(path)) {
    std::string w = forge::util::trim(line);
    if (!w.empty()) words.push_back(w);
  }
  return words;
}

}  // namespace

extern "C" {

forge_ctx* forge_ctx_new(void) { return new forge_ctx(); }

void forge_ctx_free(forge_ctx* ctx) { delete ctx; }

const char* forge_last_error(const forge_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

const char* forge_version(void) { return kVersion; }

int forge_gen(forge_ctx* ctx, const char* task, int count, unsigned long long seed,
              const char* variant, const char* lexicon_path, const char* out_path) {
  return guard(ctx, [&] {
    using namespace forge;
    if (!task || !out_path) throw util::Error("task and out_path are required");
    Task t = task_from_string(task);
    auto v = taskgen::variant_from_string(opt(variant, "standard"));
    std::vector<taskgen::TaskInstance> instances;
    if (t == Task::letcat) {
      auto lexicon = lexicon_path ? load_lexicon(lexicon_path)
                                  : taskgen::default_word_lexicon();
      instances = taskgen::gen_letcat(seed, count, lexicon, v);
    } else if (t == Task::coinflip) {
      auto lexicon = lexicon_path ? load_lexicon(lexicon_path)
                                  : taskgen::default_name_lexicon();
      instances = taskgen::gen_coinflip(seed, count, lexicon);
    } else {
      throw util::Error("generation supports letcat and coinflip only");
    }
    std::vector<Exemplar> pool;
    for (auto& inst : instances) pool.push_back(std::move(inst.exemplar));
    save_pool(out_path, pool);
  });
}

int forge_perturb(forge_ctx* ctx, const char* kind, const char* mask_token,
                  unsigned long long seed, const char* in_path, const char* out_path) {
  return guard(ctx, [&] {
    using namespace forge;
    if (!kind || !in_path || !out_path)
      throw util::Error("kind, in_path and out_path are required");
    std::string k = kind;
    std::string token = opt(mask_token);
    auto pool = load_pool(in_path);
    std::vector<Exemplar> out;
    uint64_t i = 0;
    for (const auto& ex : pool) {
      if (k == "mask1") {
        out.push_back(perturb::apply_mask_preset(ex, perturb::MaskPreset::mask1, token));
      } else if (k == "mask2") {
        out.push_back(perturb::apply_mask_preset(ex, perturb::MaskPreset::mask2, token));
      } else if (k == "incorrect") {
        perturb::PerturbSpec spec;
        spec.kind = perturb::Kind::incorrect;
        spec.rng_seed = seed + i;
        out.push_back(perturb::corrupt_states(ex, spec));
      } else if (k == "random") {
        out.push_back(perturb::randomize_trace(ex, pool, seed + i));
      } else if (k == "nonl") {
        out.push_back(perturb::strip_nl(ex));
      } else {
        throw util::Error("unknown perturbation kind: " + k);
      }
      ++i;
    }
    save_pool(out_path, out);
  });
}

int forge_select(forge_ctx* ctx, const char* strategy, int shots, double lambda,
                 const char* scorer, const char* pool_path, const char* queries_path,
                 const char* embeddings_path, const char* endpoint, const char* model,
                 unsigned long long seed, const char* out_path) {
  return guard(ctx, [&] {
    using namespace forge;
    if (!strategy || !pool_path || !queries_path || !out_path)
      throw util::Error("strategy, pool, queries and out_path are required");
    Strategy strat = strategy_from_string(strategy);
    auto pool = load_pool(pool_path);
    auto queries = load_queries(queries_path);

    std::vector<std::string> pool_ids;
    for (const auto& ex : pool) pool_ids.push_back(ex.id);

    similarity::EmbeddingStore store;
    std::optional<similarity::Scorer> sc;
    if (strat != Strategy::random_pick) {
      std::string s = opt(scorer);
      if (s == "cls" || s == "bertscore") {
        if (!embeddings_path) throw util::Error("scorer '" + s + "' needs --embeddings");
        store.load_sidecar(embeddings_path);
        sc = (s == "cls") ? similarity::make_cls_scorer(store)
                          : similarity::make_bertscore_scorer(store);
      } else if (s == "lm") {
        if (!endpoint) throw util::Error("lm scorer needs --endpoint");
        auto backend = std::make_shared<runner::HttpLogprobBackend>(endpoint, opt(model, "lm"));
        sc = similarity::make_lm_scorer(backend);
      } else {
        throw util::Error("strategy '" + std::string(strategy) + "' needs a scorer");
      }
    }

    similarity::SimilarityMatrix matrix;
    similarity::QueryScores qscores;
    if (sc) std::tie(matrix, qscores) = similarity::build_matrices(pool, queries, *sc);

    std::string out;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      selection::QueryRow row;
      row.pool_ids = pool_ids;
      if (sc) row.scores = qscores.scores[qi];
      selection::SelectionResult sel;
      switch (strat) {
        case Strategy::random_pick:
          sel = selection::select_random(
              pool_ids, shots, seed ^ std::hash<std::string>{}(queries[qi].id));
          break;
        case Strategy::nn:
          sel = selection::select_nn(row, shots);
          break;
        case Strategy::mmr:
          sel = selection::select_mmr(matrix, row, shots, lambda);
          break;
      }
      json rec = {{"query_id", queries[qi].id},
                  {"exemplar_ids", sel.ids},
                  {"objective", sel.objectives}};
      out += rec.dump();
      out += "\n";
    }
    util::write_file_atomic(out_path, out);
  });
}

int forge_render(forge_ctx* ctx, const char* pool_path, const char* queries_path,
                 const char* selection_path, const char* out_path) {
  return guard(ctx, [&] {
    using namespace forge;
    if (!pool_path || !queries_path || !selection_path || !out_path)
      throw util::Error("pool, queries, selection and out_path are required");
    auto pool = load_pool(pool_path);
    auto queries = load_queries(queries_path);
    std::map<std::string, const Exemplar*> by_id;
    for (const auto& ex : pool) by_id[ex.id] = &ex;
    std::map<std::string, std::vector<std::string>> selections;
    for (const auto& line : util::read_lines(selection_path)) {
      if (util::trim(line).empty()) continue;
      json j = json::parse(line);
      selections[j.at("query_id").get<std::string>()] =
          j.at("exemplar_ids").get<std::vector<std::string>>();
    }
    std::string out;
    for (const auto& q : queries) {
      auto it = selections.find(q.id);
      if (it == selections.end()) throw util::Error("selection missing query " + q.id);
      std::vector<Exemplar> chosen;
      for (const auto& id : it->second) {
        auto ex = by_id.find(id);
        if (ex == by_id.end()) throw util::Error("pool missing exemplar " + id);
        chosen.push_back(*ex->second);
      }
      auto prompt = promptkit::render_prompt(chosen, q);
      json rec = {{"query_id", prompt.query_id},
                  {"exemplar_ids", prompt.exemplar_ids},
                  {"prompt", prompt.text},
                  {"format", prompt.format_tag}};
      out += rec.dump();
      out += "\n";
    }
    util::write_file_atomic(out_path, out);
  });
}

int forge_run(forge_ctx* ctx, const char* config_path, const char* out_path) {
  return guard(ctx, [&] {
    using namespace forge;
    if (!config_path || !out_path) throw util::Error("config_path and out_path are required");
    auto cfg = runner::load_run_config(config_path);
    runner::run_from_config(cfg, out_path);
  });
}

int forge_run_lambda_sweep(forge_ctx* ctx, const char* config_path, const char* out_dir) {
  return guard(ctx, [&] {
    using namespace forge;
    if (!config_path || !out_dir) throw util::Error("config_path and out_dir are required");
    auto cfg = runner::load_run_config(config_path);
    cfg.strategy = Strategy::mmr;
    for (double lambda : selection::lambda_sweep_grid()) {
      cfg.lambda = lambda;
      char name[64];
      std::snprintf(name, sizeof(name), "manifest_lambda_%.1f.jsonl", lambda);
      runner::run_from_config(cfg, std::string(out_dir) + "/" + name);
    }
  });
}

int forge_report(forge_ctx* ctx, const char* const* manifest_paths, size_t n_manifests,
                 const char* out_text_path, const char* out_json_path) {
  return guard(ctx, [&] {
    using namespace forge;
    if (!manifest_paths || n_manifests == 0)
      throw util::Error("at least one manifest is required");
    std::vector<runner::RunManifest> manifests;
    for (size_t i = 0; i < n_manifests; ++i)
      manifests.push_back(runner::load_manifest(manifest_paths[i]));
    auto rep = runner::report(manifests);
    if (out_text_path) util::write_file_atomic(out_text_path, rep.text_table);
    if (out_json_path) util::write_file_atomic(out_json_path, rep.json);
    if (!out_text_path && !out_json_path) std::fputs(rep.text_table.c_str(), stdout);
  });
}

}  // extern "C"

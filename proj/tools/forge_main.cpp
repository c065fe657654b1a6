// Command-line front end; all work goes through the C API in forge/forge.h.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forge/forge.h"

namespace {

struct CtxDeleter {
  void operator()(forge_ctx* c) const { forge_ctx_free(c); }
};

int fail(forge_ctx* ctx) {
  std::fprintf(stderr, "error: %s\n", forge_last_error(ctx));
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: explanation-infused prompt construction and exemplar selection"};
  app.require_subcommand(1);
  std::unique_ptr<forge_ctx, CtxDeleter> ctx(forge_ctx_new());

  // gen
  std::string gen_task, gen_variant = "standard", gen_lexicon, gen_out;
  int gen_count = 100;
  unsigned long long gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate synthetic exemplars with gold explanations");
  gen->add_option("--task", gen_task, "letcat | coinflip")->required();
  gen->add_option("--count", gen_count, "number of instances")->required();
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--variant", gen_variant, "standard | engineered");
  gen->add_option("--lexicon", gen_lexicon, "word list file, one entry per line");
  gen->add_option("--out", gen_out, "output pool (jsonl)")->required();

  // perturb
  std::string pert_kind, pert_mask, pert_in, pert_out;
  unsigned long long pert_seed = 0;
  auto* pert = app.add_subcommand("perturb", "Perturb explanations in a pool");
  pert->add_option("--kind", pert_kind, "mask1 | mask2 | incorrect | random | nonl")->required();
  pert->add_option("--mask-token", pert_mask, "mask token (default empty string)");
  pert->add_option("--seed", pert_seed, "perturbation seed");
  pert->add_option("--in", pert_in, "input pool (jsonl)")->required();
  pert->add_option("--out", pert_out, "output pool (jsonl)")->required();

  // select
  std::string sel_strategy, sel_scorer, sel_pool, sel_queries, sel_emb, sel_endpoint,
      sel_model = "lm", sel_out;
  int sel_shots = 8;
  double sel_lambda = 0.5;
  unsigned long long sel_seed = 0;
  auto* sel = app.add_subcommand("select", "Select exemplars per query");
  sel->add_option("--strategy", sel_strategy, "random | nn | mmr")->required();
  sel->add_option("--shots", sel_shots, "exemplars per prompt");
  sel->add_option("--lambda", sel_lambda, "relevance/diversity trade-off in [0,1]");
  sel->add_option("--scorer", sel_scorer, "cls | lm | bertscore");
  sel->add_option("--pool", sel_pool, "exemplar pool (jsonl)")->required();
  sel->add_option("--queries", sel_queries, "query set (jsonl)")->required();
  sel->add_option("--embeddings", sel_emb, "embedding sidecar (jsonl)");
  sel->add_option("--endpoint", sel_endpoint, "logprob backend endpoint (lm scorer)");
  sel->add_option("--model", sel_model, "backend model name");
  sel->add_option("--seed", sel_seed, "seed for random strategy");
  sel->add_option("--out", sel_out, "selection records (jsonl)")->required();

  // render
  std::string ren_pool, ren_queries, ren_sel, ren_out;
  bool ren_dry = false;
  auto* ren = app.add_subcommand("render", "Render prompts for a selection");
  ren->add_option("--pool", ren_pool, "exemplar pool (jsonl)")->required();
  ren->add_option("--queries", ren_queries, "query set (jsonl)")->required();
  ren->add_option("--selection", ren_sel, "selection records from 'select'")->required();
  ren->add_option("--out", ren_out, "prompt records (jsonl)")->required();
  ren->add_flag("--dry-run", ren_dry, "no backend is ever called (informational flag)");

  // run
  std::string run_config, run_out, run_sweep_dir;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("--config", run_config, "JSON run config")->required();
  run->add_option("--out", run_out, "manifest output path");
  run->add_option("--lambda-sweep", run_sweep_dir,
                  "run the lambda grid preset, one manifest per value into this directory");

  // report
  std::vector<std::string> rep_manifests;
  std::string rep_text, rep_json;
  auto* rep = app.add_subcommand("report", "Aggregate manifests into a comparison table");
  rep->add_option("manifests", rep_manifests, "manifest files")->required();
  rep->add_option("--out-text", rep_text, "write the text table here (default: stdout)");
  rep->add_option("--out-json", rep_json, "write the machine-readable table here");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    if (forge_gen(ctx.get(), gen_task.c_str(), gen_count, gen_seed, gen_variant.c_str(),
                  gen_lexicon.empty() ? nullptr : gen_lexicon.c_str(), gen_out.c_str()))
      return fail(ctx.get());
  } else if (pert->parsed()) {
    if (forge_perturb(ctx.get(), pert_kind.c_str(), pert_mask.c_str(), pert_seed,
                      pert_in.c_str(), pert_out.c_str()))
      return fail(ctx.get());
  } else if (sel->parsed()) {
    if (forge_select(ctx.get(), sel_strategy.c_str(), sel_shots, sel_lambda,
                     sel_scorer.empty() ? nullptr : sel_scorer.c_str(), sel_pool.c_str(),
                     sel_queries.c_str(), sel_emb.empty() ? nullptr : sel_emb.c_str(),
                     sel_endpoint.empty() ? nullptr : sel_endpoint.c_str(), sel_model.c_str(),
                     sel_seed, sel_out.c_str()))
      return fail(ctx.get());
  } else if (ren->parsed()) {
    if (forge_render(ctx.get(), ren_pool.c_str(), ren_queries.c_str(), ren_sel.c_str(),
                     ren_out.c_str()))
      return fail(ctx.get());
  } else if (run->parsed()) {
    if (!run_sweep_dir.empty()) {
      if (forge_run_lambda_sweep(ctx.get(), run_config.c_str(), run_sweep_dir.c_str()))
        return fail(ctx.get());
    } else {
      if (run_out.empty()) {
        std::fprintf(stderr, "error: run needs --out (or --lambda-sweep)\n");
        return 1;
      }
      if (forge_run(ctx.get(), run_config.c_str(), run_out.c_str())) return fail(ctx.get());
    }
  } else if (rep->parsed()) {
    std::vector<const char*> paths;
    for (const auto& p : rep_manifests) paths.push_back(p.c_str());
    if (forge_report(ctx.get(), paths.data(), paths.size(),
                     rep_text.empty() ? nullptr : rep_text.c_str(),
                     rep_json.empty() ? nullptr : rep_json.c_str()))
      return fail(ctx.get());
  }
  return 0;
}

/* C interface to the exemplar-selection and prompt toolkit.
 *
 * All functions return 0 on success and a nonzero error code on failure;
 * forge_last_error() describes the most recent failure on the context.
 * A forge_ctx is cheap and not thread-safe; use one per thread.
 */
#ifndef FORGE_H
#define FORGE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct forge_ctx forge_ctx;

forge_ctx* forge_ctx_new(void);
void forge_ctx_free(forge_ctx* ctx);
const char* forge_last_error(const forge_ctx* ctx);
const char* forge_version(void);

/* Generate synthetic exemplars with gold explanations.
 * task: "letcat" | "coinflip"; variant: "standard" | "engineered" (NULL = standard);
 * lexicon_path: optional word list, one entry per line (NULL = built-in). */
int forge_gen(forge_ctx* ctx, const char* task, int count, unsigned long long seed,
              const char* variant, const char* lexicon_path, const char* out_path);

/* Apply a perturbation to every exemplar in a pool.
 * kind: "mask1" | "mask2" | "incorrect" | "random" | "nonl". */
int forge_perturb(forge_ctx* ctx, const char* kind, const char* mask_token,
                  unsigned long long seed, const char* in_path, const char* out_path);

/* Select exemplars per query; writes {query_id, exemplar_ids, objective}
 * records. scorer: "cls" | "bertscore" (embeddings sidecar) or "lm"
 * (endpoint + model). strategy "random" needs no scorer. */
int forge_select(forge_ctx* ctx, const char* strategy, int shots, double lambda,
                 const char* scorer, const char* pool_path, const char* queries_path,
                 const char* embeddings_path, const char* endpoint, const char* model,
                 unsigned long long seed, const char* out_path);

/* Render prompts for a selection file without calling any backend. */
int forge_render(forge_ctx* ctx, const char* pool_path, const char* queries_path,
                 const char* selection_path, const char* out_path);

/* Run a full experiment from a JSON config file; writes the manifest. */
int forge_run(forge_ctx* ctx, const char* config_path, const char* out_path);

/* Run the lambda sweep preset {0.0,0.2,0.4,0.5,0.6,0.8,1.0}; writes one
 * manifest per grid value into out_dir. */
int forge_run_lambda_sweep(forge_ctx* ctx, const char* config_path, const char* out_dir);

/* Aggregate manifests into a comparison table (text and JSON files; either
 * output path may be NULL to skip it). */
int forge_report(forge_ctx* ctx, const char* const* manifest_paths, size_t n_manifests,
                 const char* out_text_path, const char* out_json_path);

#ifdef __cplusplus
}
#endif

#endif /* FORGE_H */

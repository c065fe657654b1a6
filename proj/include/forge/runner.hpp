#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forge/core.hpp"
#include "forge/promptkit.hpp"
#include "forge/selection.hpp"
#include "forge/similarity.hpp"

namespace forge::runner {

struct BackendConfig {
  enum class Kind { http_completion, faithful_mock, replay_cache_only };
  Kind kind = Kind::faithful_mock;
  std::string endpoint;
  std::string model = "mock";
  int max_tokens = 256;
  // temperature is fixed at 0: every completion is greedy
  int max_retries = 3;
  int concurrency = 4;
};

BackendConfig::Kind backend_kind_from_string(const std::string& s);
std::string backend_kind_to_string(BackendConfig::Kind k);

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const std::string& prompt, int max_tokens) = 0;
};

/// Deterministic stand-in that parses the final question block, solves it
/// with the task oracle, and answers in the gold explanation template
/// (mirroring the exemplars' template variant when detectable).
class FaithfulMockBackend : public CompletionBackend {
 public:
  std::string id() const override { return "faithful_mock"; }
  std::string complete(const std::string& prompt, int max_tokens) override;
  int calls() const { return calls_.load(); }

 private:
  std::atomic<int> calls_{0};
};

std::string faithful_mock_complete(const std::string& prompt);

/// HTTP completion backend; POSTs {model, prompt, max_tokens, temperature:0}
/// and accepts either {text} or {choices:[{text}]} responses.
class HttpCompletionBackend : public CompletionBackend {
 public:
  HttpCompletionBackend(std::string endpoint, std::string model)
      : endpoint_(std::move(endpoint)), model_(std::move(model)) {}
  std::string id() const override { return "http:" + model_; }
  std::string complete(const std::string& prompt, int max_tokens) override;

 private:
  std::string endpoint_;
  std::string model_;
};

/// Logprob transport over the same endpoint:
/// {prefix, continuation, want_logprobs:true} -> {token_logprobs:[...]}.
class HttpLogprobBackend : public similarity::LogprobBackend {
 public:
  HttpLogprobBackend(std::string endpoint, std::string model)
      : endpoint_(std::move(endpoint)), model_(std::move(model)) {}
  std::string id() const override { return "http:" + model_; }
  std::vector<double> token_logprobs(const std::string& prefix,
                                     const std::string& continuation) override;

 private:
  std::string endpoint_;
  std::string model_;
};

struct CacheMiss : util::Error {
  explicit CacheMiss(const std::string& what) : util::Error(what) {}
};

/// One file per content-hash key, written temp-file-then-atomic-rename.
class DiskCache {
 public:
  explicit DiskCache(std::string dir) : dir_(std::move(dir)) {}
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& value) const;

 private:
  std::string dir_;
};

/// Cache key for a completion request.
std::string completion_cache_key(const std::string& backend_id, const std::string& model,
                                 const std::string& prompt, int max_tokens);

/// Greedy completion with cache consultation first. For replay_cache_only
/// a miss throws CacheMiss; otherwise transient failures retry with bounded
/// exponential backoff before erroring.
std::string complete(const std::string& prompt, CompletionBackend* backend,
                     const BackendConfig& cfg, const DiskCache* cache,
                     std::string* cache_key_out = nullptr);

struct RunConfig {
  Task task = Task::letcat;
  std::string pool_path;
  std::string queries_path;
  Strategy strategy = Strategy::random_pick;
  std::string scorer;  // "cls" | "lm" | "bertscore" | "" (random strategy)
  int shots = 8;
  double lambda = 0.5;
  PromptOrder order = PromptOrder::selection_order;
  uint64_t seed = 0;  // random selection and shuffle order
  std::string embeddings_path;  // sidecar for cls/bertscore
  bool lm_length_normalize = true;
  BackendConfig backend;
  std::string cache_dir;
  int workers = 4;
};

RunConfig load_run_config(const std::string& path);
std::string run_config_hash(const RunConfig& cfg);

struct RunRecord {
  std::string query_id;
  std::vector<std::string> exemplar_ids;
  std::string prompt;
  std::string completion;
  std::optional<std::string> predicted;
  std::string gold;
  bool correct = false;
  std::string cache_key;
  std::string error;  // empty unless the query failed
};

struct RunManifest {
  std::string config_hash;
  std::string pool_hash;
  std::string query_set_hash;
  std::string task;
  std::string strategy;
  std::string scorer;
  double lambda = 0.5;
  std::vector<RunRecord> records;
  promptkit::AccuracyReport report;
};

RunManifest run_experiment(const RunConfig& cfg, const std::vector<Exemplar>& pool,
                           const std::vector<Query>& queries, CompletionBackend* backend,
                           std::shared_ptr<similarity::LogprobBackend> logprob_backend = nullptr);

/// Loads pool/queries, builds the backend from the config, runs, and writes
/// the manifest (line-delimited records plus a summary line) to out_path.
RunManifest run_from_config(const RunConfig& cfg, const std::string& out_path);

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);

struct ReportOutput {
  std::string text_table;
  std::string json;  // machine-readable
  std::vector<std::string> warnings;
};

/// Rows = strategy/scorer/lambda, columns = task; cells carry the mean and
/// spread over manifests sharing a row and column.
ReportOutput report(const std::vector<RunManifest>& manifests);

}  // namespace forge::runner

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "forge/core.hpp"

namespace forge::similarity {

/// Sequence-level and optional token-level embeddings, keyed by record id.
/// Sequence vectors are unit-normalized on load.
class EmbeddingStore {
 public:
  void add_sequence(const std::string& id, std::vector<double> vec);
  void add_tokens(const std::string& id, std::vector<std::string> tokens,
                  std::vector<std::vector<double>> vectors);

  const std::vector<double>& sequence(const std::string& id) const;
  bool has_sequence(const std::string& id) const;
  const std::vector<std::vector<double>>& token_vectors(const std::string& id) const;
  bool has_tokens(const std::string& id) const;

  /// Loads a line-delimited sidecar: {id, vector:[...]} for sequence level,
  /// {id, tokens:[...], vectors:[[...]...]} for token level. Both record
  /// shapes may appear in one file.
  void load_sidecar(const std::string& path);

 private:
  std::size_t seq_dim_ = 0;
  std::map<std::string, std::vector<double>> sequences_;
  std::map<std::string, std::vector<std::string>> tokens_;
  std::map<std::string, std::vector<std::vector<double>>> token_vecs_;
};

double cosine_cls(const std::string& a_id, const std::string& b_id,
                  const EmbeddingStore& store);

double bertscore_f1(const std::string& a_id, const std::string& b_id,
                    const EmbeddingStore& store);

/// Backend contract for LM-based scoring: per-token log-probabilities of the
/// continuation given the prefix.
class LogprobBackend {
 public:
  virtual ~LogprobBackend() = default;
  virtual std::string id() const = 0;
  virtual std::vector<double> token_logprobs(const std::string& prefix,
                                             const std::string& continuation) = 0;
};

/// Mean token log-probability of generating the query question conditioned
/// on the exemplar question (sum when length_normalize is false). Scores are
/// cached by (backend id, prefix hash, continuation hash). Question text
/// only; explanations never enter the scorer.
class LmScorer {
 public:
  explicit LmScorer(std::shared_ptr<LogprobBackend> backend, bool length_normalize = true)
      : backend_(std::move(backend)), length_normalize_(length_normalize) {}

  double score(const std::string& prefix_question, const std::string& continuation_question);

 private:
  std::shared_ptr<LogprobBackend> backend_;
  bool length_normalize_;
  std::map<std::string, double> cache_;
};

struct SimilarityMatrix {
  std::vector<std::string> ids;  // rows == cols
  std::vector<std::vector<double>> scores;
  std::string scorer_tag;
  bool symmetric = false;

  double at(std::size_t row, std::size_t col) const { return scores[row][col]; }
};

struct QueryScores {
  std::vector<std::string> query_ids;
  std::vector<std::string> pool_ids;
  std::vector<std::vector<double>> scores;  // query x pool
};

/// One scorer behind the common contract. `pair` scores pool-pool cells
/// (row conditions column for asymmetric scorers); `query` scores
/// query-exemplar cells.
struct Scorer {
  std::string tag;
  bool symmetric = false;
  std::function<double(const Exemplar&, const Exemplar&)> pair;
  std::function<double(const Query&, const Exemplar&)> query;
};

Scorer make_cls_scorer(const EmbeddingStore& store);
Scorer make_bertscore_scorer(const EmbeddingStore& store);
Scorer make_lm_scorer(std::shared_ptr<LogprobBackend> backend, bool length_normalize = true);

/// Builds the pool x pool matrix and the query x pool scores. Symmetric
/// scorers evaluate each unordered pair once and mirror. `workers` bounds
/// the fan-out (1 = sequential).
std::pair<SimilarityMatrix, QueryScores> build_matrices(const std::vector<Exemplar>& pool,
                                                        const std::vector<Query>& queries,
                                                        const Scorer& scorer,
                                                        int workers = 1);

}  // namespace forge::similarity

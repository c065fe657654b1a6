#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forge/core.hpp"
#include "forge/similarity.hpp"

namespace forge::selection {

struct SelectionResult {
  std::vector<std::string> ids;        // greedy pick order
  std::vector<double> objectives;      // per-pick objective value
  SelectionConfig config;
};

/// Query-to-pool scores for one query.
struct QueryRow {
  std::vector<std::string> pool_ids;
  std::vector<double> scores;
};

/// Top-m by score, descending; ties broken by lexicographically smaller id.
SelectionResult select_nn(const QueryRow& row, int shots, TieBreak tie_break = TieBreak::by_id);

/// Greedy maximal marginal relevance: each pick maximizes
/// lambda * S(q, q_j) - (1 - lambda) * max_{q_i in T} S(q_j, q_i)
/// over the remaining candidates. The penalty term is 0 while the chosen
/// set is empty, so the first pick is the relevance argmax.
SelectionResult select_mmr(const similarity::SimilarityMatrix& pool_matrix,
                           const QueryRow& row, int shots, double lambda,
                           TieBreak tie_break = TieBreak::by_id);

/// Uniform random selection without replacement, deterministic in seed.
SelectionResult select_random(const std::vector<std::string>& pool_ids, int shots,
                              uint64_t seed);

/// Reorders a selection for prompt layout.
std::vector<std::string> order_for_prompt(const SelectionResult& result, const QueryRow& row,
                                          PromptOrder policy, uint64_t seed = 0);

/// The lambda grid used for sweep presets.
const std::vector<double>& lambda_sweep_grid();  // {0.0,0.2,0.4,0.5,0.6,0.8,1.0}

/// Empirical standard deviation of the relevance and diversity terms over a
/// matrix/query-row pair; a diagnostic for choosing lambda.
struct TermSpread {
  double relevance_stddev = 0;
  double diversity_stddev = 0;
};
TermSpread eq_term_spread(const similarity::SimilarityMatrix& pool_matrix, const QueryRow& row);

}  // namespace forge::selection

#include "forge/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace forge::selection {

using util::Error;

SelectionResult select_nn(const QueryRow& row, int shots, TieBreak tie_break) {
  (void)tie_break;  // by_id is the only rule
  if (shots <= 0) throw Error("shot count must be positive");
  if (row.pool_ids.size() != row.scores.size())
    throw Error("query row id/score length mismatch");

  std::vector<std::size_t> idx(row.pool_ids.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (row.scores[a] != row.scores[b]) return row.scores[a] > row.scores[b];
    return row.pool_ids[a] < row.pool_ids[b];
  });

  SelectionResult res;
  res.config.strategy = Strategy::nn;
  res.config.shots = shots;
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(shots), idx.size());
  for (std::size_t k = 0; k < take; ++k) {
    res.ids.push_back(row.pool_ids[idx[k]]);
    res.objectives.push_back(row.scores[idx[k]]);
  }
  return res;
}

SelectionResult select_mmr(const similarity::SimilarityMatrix& pool_matrix,
                           const QueryRow& row, int shots, double lambda,
                           TieBreak tie_break) {
  (void)tie_break;
  if (shots <= 0) throw Error("shot count must be positive");
  if (lambda < 0.0 || lambda > 1.0) throw Error("lambda must be in [0, 1]");
  const std::size_t n = row.pool_ids.size();
  if (row.scores.size() != n) throw Error("query row id/score length mismatch");
  if (pool_matrix.ids != row.pool_ids)
    throw Error("pool matrix ids do not match query row ids");

  auto check_nan = [](double v, std::size_t r, std::size_t c) {
    if (std::isnan(v))
      throw Error("NaN score at cell (" + std::to_string(r) + ", " + std::to_string(c) + ")");
    return v;
  };

  SelectionResult res;
  res.config.strategy = Strategy::mmr;
  res.config.shots = shots;
  res.config.lambda = lambda;

  std::vector<bool> chosen(n, false);
  std::vector<std::size_t> chosen_idx;
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(shots), n);
  while (chosen_idx.size() < take) {
    bool have_best = false;
    std::size_t best = 0;
    double best_obj = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (chosen[j]) continue;
      double relevance = check_nan(row.scores[j], 0, j);
      double penalty = 0;
      if (!chosen_idx.empty()) {
        double max_sim = -1e300;
        for (std::size_t i : chosen_idx)
          max_sim = std::max(max_sim, check_nan(pool_matrix.at(j, i), j, i));
        penalty = max_sim;
      }
      double obj = lambda * relevance - (1.0 - lambda) * penalty;
      if (!have_best || obj > best_obj ||
          (obj == best_obj && row.pool_ids[j] < row.pool_ids[best])) {
        have_best = true;
        best = j;
        best_obj = obj;
      }
    }
    chosen[best] = true;
    chosen_idx.push_back(best);
    res.ids.push_back(row.pool_ids[best]);
    res.objectives.push_back(best_obj);
  }
  return res;
}

SelectionResult select_random(const std::vector<std::string>& pool_ids, int shots,
                              uint64_t seed) {
  if (shots <= 0) throw Error("shot count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(pool_ids.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(shots), idx.size());
  for (std::size_t k = 0; k < take; ++k) {
    std::size_t j = k + rng() % (idx.size() - k);
    std::swap(idx[k], idx[j]);
  }
  SelectionResult res;
  res.config.strategy = Strategy::random_pick;
  res.config.shots = shots;
  for (std::size_t k = 0; k < take; ++k) {
    res.ids.push_back(pool_ids[idx[k]]);
    res.objectives.push_back(0.0);
  }
  return res;
}

std::vector<std::string> order_for_prompt(const SelectionResult& result, const QueryRow& row,
                                          PromptOrder policy, uint64_t seed) {
  std::vector<std::string> out = result.ids;
  auto score_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < row.pool_ids.size(); ++i)
      if (row.pool_ids[i] == id) return row.scores[i];
    throw Error("query scores missing id " + id);
  };
  switch (policy) {
    case PromptOrder::selection_order:
      break;
    case PromptOrder::ascending_similarity:
      std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
        double sa = score_of(a), sb = score_of(b);
        if (sa != sb) return sa < sb;
        return a < b;
      });
      break;
    case PromptOrder::descending_similarity:
      std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
        double sa = score_of(a), sb = score_of(b);
        if (sa != sb) return sa > sb;
        return a < b;
      });
      break;
    case PromptOrder::fixed_seeded_shuffle: {
      std::mt19937_64 rng(seed);
      for (std::size_t k = 0; k + 1 < out.size(); ++k) {
        std::size_t j = k + rng() % (out.size() - k);
        std::swap(out[k], out[j]);
      }
      break;
    }
  }
  return out;
}

const std::vector<double>& lambda_sweep_grid() {
  static const std::vector<double> grid = {0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0};
  return grid;
}

TermSpread eq_term_spread(const similarity::SimilarityMatrix& pool_matrix,
                          const QueryRow& row) {
  auto stddev = [](const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(xs.size()));
  };
  std::vector<double> diversity;
  for (std::size_t i = 0; i < pool_matrix.ids.size(); ++i)
    for (std::size_t j = 0; j < pool_matrix.ids.size(); ++j)
      if (i != j) diversity.push_back(pool_matrix.at(i, j));
  return {stddev(row.scores), stddev(diversity)};
}

}  // namespace forge::selection

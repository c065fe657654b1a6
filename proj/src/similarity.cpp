#include "forge/similarity.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace forge::similarity {

using util::Error;
using nlohmann::json;

namespace {

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void unit_normalize(std::vector<double>& v, const std::string& id) {
  double n = norm(v);
  if (n == 0) throw Error("zero vector for id " + id);
  if (std::fabs(n - 1.0) > 1e-6) {
    for (double& x : v) x /= n;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void EmbeddingStore::add_sequence(const std::string& id, std::vector<double> vec) {
  if (seq_dim_ == 0) seq_dim_ = vec.size();
  if (vec.size() != seq_dim_)
    throw Error("dimension mismatch for id " + id + ": " + std::to_string(vec.size()) +
                " vs " + std::to_string(seq_dim_));
  unit_normalize(vec, id);
  sequences_[id] = std::move(vec);
}

void EmbeddingStore::add_tokens(const std::string& id, std::vector<std::string> tokens,
                                std::vector<std::vector<double>> vectors) {
  if (tokens.size() != vectors.size())
    throw Error("token/vector count mismatch for id " + id);
  for (auto& v : vectors) unit_normalize(v, id);
  tokens_[id] = std::move(tokens);
  token_vecs_[id] = std::move(vectors);
}

const std::vector<double>& EmbeddingStore::sequence(const std::string& id) const {
  auto it = sequences_.find(id);
  if (it == sequences_.end()) throw Error("no sequence embedding for id " + id);
  return it->second;
}

bool EmbeddingStore::has_sequence(const std::string& id) const {
  return sequences_.count(id) > 0;
}

const std::vector<std::vector<double>>& EmbeddingStore::token_vectors(
    const std::string& id) const {
  auto it = token_vecs_.find(id);
  if (it == token_vecs_.end()) throw Error("no token embeddings for id " + id);
  return it->second;
}

bool EmbeddingStore::has_tokens(const std::string& id) const {
  return token_vecs_.count(id) > 0;
}

void EmbeddingStore::load_sidecar(const std::string& path) {
  std::size_t lineno = 0;
  for (const auto& line : util::read_lines(path)) {
    ++lineno;
    if (util::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
      std::string id = j.at("id").get<std::string>();
      if (j.contains("vector"))
        add_sequence(id, j.at("vector").get<std::vector<double>>());
      if (j.contains("vectors"))
        add_tokens(id, j.value("tokens", std::vector<std::string>{}),
                   j.at("vectors").get<std::vector<std::vector<double>>>());
    } catch (const std::exception& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

double cosine_cls(const std::string& a_id, const std::string& b_id,
                  const EmbeddingStore& store) {
  const auto& a = store.sequence(a_id);
  const auto& b = store.sequence(b_id);
  if (a.size() != b.size())
    throw Error("dimension mismatch between " + a_id + " and " + b_id);
  return dot(a, b);
}

double bertscore_f1(const std::string& a_id, const std::string& b_id,
                    const EmbeddingStore& store) {
  const auto& a = store.token_vectors(a_id);
  const auto& b = store.token_vectors(b_id);
  if (a.empty()) throw Error("no tokens for id " + a_id);
  if (b.empty()) throw Error("no tokens for id " + b_id);

  auto greedy = [](const std::vector<std::vector<double>>& from,
                   const std::vector<std::vector<double>>& to) {
    double total = 0;
    for (const auto& f : from) {
      double best = -1e300;
      for (const auto& t : to) best = std::max(best, dot(f, t));
      total += best;
    }
    return total / static_cast<double>(from.size());
  };
  double precision = greedy(a, b);
  double recall = greedy(b, a);
  if (precision + recall == 0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double LmScorer::score(const std::string& prefix_question,
                       const std::string& continuation_question) {
  std::string key = backend_->id() + ":" + util::sha256_hex(prefix_question) + ":" +
                    util::sha256_hex(continuation_question);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto logprobs = backend_->token_logprobs(prefix_question + "\n", continuation_question);
  if (logprobs.empty()) throw Error("backend returned zero continuation tokens");
  double sum = 0;
  for (double lp : logprobs) sum += lp;
  double score = length_normalize_ ? sum / static_cast<double>(logprobs.size()) : sum;
  cache_[key] = score;
  return score;
}

Scorer make_cls_scorer(const EmbeddingStore& store) {
  Scorer s;
  s.tag = "cls";
  s.symmetric = true;
  s.pair = [&store](const Exemplar& a, const Exemplar& b) {
    return cosine_cls(a.id, b.id, store);
  };
  s.query = [&store](const Query& q, const Exemplar& ex) {
    return cosine_cls(q.id, ex.id, store);
  };
  return s;
}

Scorer make_bertscore_scorer(const EmbeddingStore& store) {
  Scorer s;
  s.tag = "bertscore";
  s.symmetric = true;
  s.pair = [&store](const Exemplar& a, const Exemplar& b) {
    return bertscore_f1(a.id, b.id, store);
  };
  s.query = [&store](const Query& q, const Exemplar& ex) {
    return bertscore_f1(q.id, ex.id, store);
  };
  return s;
}

Scorer make_lm_scorer(std::shared_ptr<LogprobBackend> backend, bool length_normalize) {
  auto scorer = std::make_shared<LmScorer>(std::move(backend), length_normalize);
  auto mtx = std::make_shared<std::mutex>();
  Scorer s;
  s.tag = "lm";
  s.symmetric = false;
  // conditioned on the row's question, generate the column's question
  s.pair = [scorer, mtx](const Exemplar& a, const Exemplar& b) {
    std::lock_guard<std::mutex> lock(*mtx);
    return scorer->score(a.question, b.question);
  };
  s.query = [scorer, mtx](const Query& q, const Exemplar& ex) {
    std::lock_guard<std::mutex> lock(*mtx);
    return scorer->score(ex.question, q.question);
  };
  return s;
}

std::pair<SimilarityMatrix, QueryScores> build_matrices(const std::vector<Exemplar>& pool,
                                                        const std::vector<Query>& queries,
                                                        const Scorer& scorer, int workers) {
  const std::size_t n = pool.size();
  SimilarityMatrix mat;
  mat.scorer_tag = scorer.tag;
  mat.symmetric = scorer.symmetric;
  for (const auto& ex : pool) mat.ids.push_back(ex.id);
  mat.scores.assign(n, std::vector<double>(n, 0.0));

  struct Cell { std::size_t row, col; };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = scorer.symmetric ? i : 0; j < n; ++j) cells.push_back({i, j});
  }

  auto eval_cell = [&](const Cell& c) {
    try {
      double v = scorer.pair(pool[c.row], pool[c.col]);
      mat.scores[c.row][c.col] = v;
      if (scorer.symmetric) mat.scores[c.col][c.row] = v;
    } catch (const std::exception& e) {
      throw Error("scorer failed at pool cell (" + std::to_string(c.row) + ", " +
                  std::to_string(c.col) + "): " + e.what());
    }
  };

  QueryScores qs;
  qs.pool_ids = mat.ids;
  for (const auto& q : queries) qs.query_ids.push_back(q.id);
  qs.scores.assign(queries.size(), std::vector<double>(n, 0.0));
  auto eval_query = [&](std::size_t qi, std::size_t pj) {
    try {
      qs.scores[qi][pj] = scorer.query(queries[qi], pool[pj]);
    } catch (const std::exception& e) {
      throw Error("scorer failed at query cell (" + std::to_string(qi) + ", " +
                  std::to_string(pj) + "): " + e.what());
    }
  };

  if (workers <= 1) {
    for (const auto& c : cells) eval_cell(c);
    for (std::size_t qi = 0; qi < queries.size(); ++qi)
      for (std::size_t pj = 0; pj < n; ++pj) eval_query(qi, pj);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    std::mutex err_mtx;
    std::string first_error;
    std::size_t total = cells.size() + queries.size() * n;
    auto worker = [&] {
      while (true) {
        std::size_t k = next.fetch_add(1);
        if (k >= total) break;
        try {
          if (k < cells.size()) {
            eval_cell(cells[k]);
          } else {
            std::size_t q = (k - cells.size()) / std::max<std::size_t>(n, 1);
            std::size_t p = (k - cells.size()) % std::max<std::size_t>(n, 1);
            eval_query(q, p);
          }
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(err_mtx);
          if (first_error.empty()) first_error = e.what();
        }
      }
    };
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (!first_error.empty()) throw Error(first_error);
  }

  return {std::move(mat), std::move(qs)};
}

}  // namespace forge::similarity

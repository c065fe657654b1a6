#include "forge/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "forge/taskgen.hpp"

namespace forge::runner {

using util::Error;
using nlohmann::json;

BackendConfig::Kind backend_kind_from_string(const std::string& s) {
  if (s == "http_completion") return BackendConfig::Kind::http_completion;
  if (s == "faithful_mock") return BackendConfig::Kind::faithful_mock;
  if (s == "replay_cache_only") return BackendConfig::Kind::replay_cache_only;
  throw Error("unknown backend kind: " + s);
}

std::string backend_kind_to_string(BackendConfig::Kind k) {
  switch (k) {
    case BackendConfig::Kind::http_completion: return "http_completion";
    case BackendConfig::Kind::faithful_mock: return "faithful_mock";
    case BackendConfig::Kind::replay_cache_only: return "replay_cache_only";
  }
  throw Error("bad backend kind");
}

// ---------------------------------------------------------------------------
// Faithful follower mock

namespace {

std::string spaced_word(const std::string& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back(w[i]);
  }
  return out;
}

std::string mock_letcat(const std::string& question, bool engineered) {
  auto open = question.find('"');
  auto close = question.rfind('"');
  if (open == std::string::npos || close <= open)
    throw Error("mock: letcat question has no quoted word list");
  auto words = util::split_words(question.substr(open + 1, close - open - 1));
  if (words.size() < 2) throw Error("mock: letcat question needs at least two words");
  std::string cat;
  std::vector<std::string> letters;
  for (const auto& w : words) {
    char l = static_cast<char>(std::tolower(static_cast<unsigned char>(w.back())));
    letters.push_back(std::string(1, l));
    cat.push_back(l);
  }
  std::string out;
  if (engineered) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      out += "Add space to \"" + words[i] + "\" and get \"" + spaced_word(words[i]) +
             "\", the last letter is " + letters[i] + ". ";
    }
  } else {
    for (std::size_t i = 0; i < words.size(); ++i)
      out += "The last letter of " + words[i] + " is " + letters[i] + ". ";
  }
  out += "Concatenating " + letters[0];
  for (std::size_t i = 1; i < letters.size(); ++i) out += " and " + letters[i];
  out += " is " + cat + ". So the answer is " + cat + ".";
  return out;
}

std::string mock_coinflip(const std::string& question) {
  auto actions = taskgen::coinflip_actions(question);
  // recover the actor names for the gold wording
  std::vector<std::string> names;
  std::size_t pos = 0;
  while (true) {
    std::size_t flip = question.find("flip", pos);
    if (flip == std::string::npos) break;
    std::size_t start = question.rfind(". ", flip);
    start = (start == std::string::npos) ? 0 : start + 2;
    std::string sentence_head = question.substr(start, flip - start);
    auto words = util::split_words(sentence_head);
    // "<Name> flips" or "<Name> does not flip"
    if (!words.empty()) names.push_back(words[0]);
    pos = flip + 4;
  }
  if (names.size() != actions.size())
    throw Error("mock: cannot recover coinflip actor names");
  std::string cur = "heads";
  std::string out = "The coin started heads up.";
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i]) cur = (cur == "heads") ? "tails" : "heads";
    out += " " + names[i] +
           (actions[i] ? " flips the coin, so it becomes " : " does not flip the coin, so it becomes ") +
           cur + " up.";
  }
  out += std::string(" So the answer is ") + (cur == "heads" ? "yes" : "no") + ".";
  return out;
}

}  // namespace

std::string faithful_mock_complete(const std::string& prompt) {
  std::size_t q_pos = prompt.rfind("\nQ: ");
  std::size_t q_start;
  if (q_pos != std::string::npos) {
    q_start = q_pos + 4;
  } else if (prompt.rfind("Q: ", 0) == 0) {
    q_start = 3;
  } else {
    throw Error("mock: prompt has no final question block");
  }
  std::size_t q_end = prompt.find("\nA:", q_start);
  if (q_end == std::string::npos) throw Error("mock: final question block has no answer cue");
  std::string question = prompt.substr(q_start, q_end - q_start);

  if (question.find("last letters") != std::string::npos) {
    bool engineered = prompt.find("Add space to \"") != std::string::npos;
    return " " + mock_letcat(question, engineered);
  }
  if (question.find("coin") != std::string::npos) {
    return " " + mock_coinflip(question);
  }
  throw Error("mock: cannot solve question: " + question);
}

std::string FaithfulMockBackend::complete(const std::string& prompt, int) {
  calls_.fetch_add(1);
  return faithful_mock_complete(prompt);
}

// ---------------------------------------------------------------------------
// HTTP backends

namespace {

struct UrlParts {
  std::string base;  // scheme://host[:port]
  std::string path;
};

UrlParts split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error("bad endpoint url: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

json http_post_json(const std::string& endpoint, const json& body) {
  UrlParts parts = split_url(endpoint);
  httplib::Client client(parts.base);
  client.set_read_timeout(60, 0);
  auto res = client.Post(parts.path, body.dump(), "application/json");
  if (!res) throw Error("transport failure posting to " + endpoint);
  if (res->status != 200)
    throw Error("backend returned status " + std::to_string(res->status));
  return json::parse(res->body);
}

}  // namespace

std::string HttpCompletionBackend::complete(const std::string& prompt, int max_tokens) {
  json body = {{"model", model_},
               {"prompt", prompt},
               {"max_tokens", max_tokens},
               {"temperature", 0}};
  json res = http_post_json(endpoint_, body);
  if (res.contains("text")) return res.at("text").get<std::string>();
  if (res.contains("choices") && !res.at("choices").empty())
    return res.at("choices").at(0).at("text").get<std::string>();
  throw Error("backend response has neither 'text' nor 'choices'");
}

std::vector<double> HttpLogprobBackend::token_logprobs(const std::string& prefix,
                                                       const std::string& continuation) {
  json body = {{"model", model_},
               {"prefix", prefix},
               {"continuation", continuation},
               {"want_logprobs", true}};
  std::string last_error;
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      json res = http_post_json(endpoint_, body);
      return res.at("token_logprobs").get<std::vector<double>>();
    } catch (const std::exception& e) {
      last_error = e.what();
      std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
    }
  }
  throw Error("logprob request failed after retries (" +
              util::sha256_hex(prefix + "\x1f" + continuation).substr(0, 12) +
              "): " + last_error);
}

// ---------------------------------------------------------------------------
// Disk cache

std::optional<std::string> DiskCache::get(const std::string& key) const {
  std::filesystem::path p = std::filesystem::path(dir_) / (key + ".txt");
  if (!std::filesystem::exists(p)) return std::nullopt;
  return util::read_file(p.string());
}

void DiskCache::put(const std::string& key, const std::string& value) const {
  std::filesystem::path p = std::filesystem::path(dir_) / (key + ".txt");
  util::write_file_atomic(p.string(), value);
}

std::string completion_cache_key(const std::string& backend_kind, const std::string& model,
                                 const std::string& prompt, int max_tokens) {
  json j = {{"kind", backend_kind},
            {"model", model},
            {"prompt", prompt},
            {"max_tokens", max_tokens}};
  return util::sha256_hex(j.dump());
}

std::string complete(const std::string& prompt, CompletionBackend* backend,
                     const BackendConfig& cfg, const DiskCache* cache,
                     std::string* cache_key_out) {
  // the key is transport-independent so replay mode hits entries recorded live
  std::string key = completion_cache_key("completion", cfg.model, prompt, cfg.max_tokens);
  if (cache_key_out) *cache_key_out = key;
  if (cache) {
    if (auto hit = cache->get(key)) return *hit;
  }
  if (cfg.kind == BackendConfig::Kind::replay_cache_only)
    throw CacheMiss("cache miss in replay-only mode for key " + key);
  if (!backend) throw Error("no backend configured");

  std::string last_error;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    try {
      std::string completion = backend->complete(prompt, cfg.max_tokens);
      if (cache) cache->put(key, completion);
      return completion;
    } catch (const std::exception& e) {
      last_error = e.what();
      if (attempt < cfg.max_retries)
        std::this_thread::sleep_for(std::chrono::milliseconds(50 << attempt));
    }
  }
  throw Error("completion failed after retries for key " + key + ": " + last_error);
}

// ---------------------------------------------------------------------------
// Run configuration

RunConfig load_run_config(const std::string& path) {
  json j = json::parse(util::read_file(path));
  RunConfig cfg;
  cfg.task = task_from_string(j.at("task").get<std::string>());
  cfg.pool_path = j.at("pool").get<std::string>();
  cfg.queries_path = j.at("queries").get<std::string>();
  cfg.strategy = strategy_from_string(j.value("strategy", "random"));
  cfg.scorer = j.value("scorer", "");
  cfg.shots = j.value("shots", 8);
  cfg.lambda = j.value("lambda", 0.5);
  cfg.order = prompt_order_from_string(j.value("order", "selection_order"));
  cfg.seed = j.value("seed", uint64_t{0});
  cfg.embeddings_path = j.value("embeddings", "");
  cfg.lm_length_normalize = j.value("lm_length_normalize", true);
  cfg.cache_dir = j.value("cache_dir", "");
  cfg.workers = j.value("workers", 4);
  if (j.contains("backend")) {
    const json& b = j.at("backend");
    cfg.backend.kind = backend_kind_from_string(b.value("kind", "faithful_mock"));
    cfg.backend.endpoint = b.value("endpoint", "");
    cfg.backend.model = b.value("model", "mock");
    cfg.backend.max_tokens = b.value("max_tokens", 256);
    cfg.backend.max_retries = b.value("retries", 3);
    cfg.backend.concurrency = b.value("concurrency", 4);
  }
  return cfg;
}

std::string run_config_hash(const RunConfig& cfg) {
  json j = {{"task", task_to_string(cfg.task)},
            {"strategy", strategy_to_string(cfg.strategy)},
            {"scorer", cfg.scorer},
            {"shots", cfg.shots},
            {"lambda", cfg.lambda},
            {"order", prompt_order_to_string(cfg.order)},
            {"seed", cfg.seed},
            {"lm_length_normalize", cfg.lm_length_normalize},
            {"backend_kind", backend_kind_to_string(cfg.backend.kind)},
            {"model", cfg.backend.model},
            {"max_tokens", cfg.backend.max_tokens}};
  return util::sha256_hex(j.dump());
}

// ---------------------------------------------------------------------------
// Experiment loop

RunManifest run_experiment(const RunConfig& cfg, const std::vector<Exemplar>& pool,
                           const std::vector<Query>& queries, CompletionBackend* backend,
                           std::shared_ptr<similarity::LogprobBackend> logprob_backend) {
  if (pool.empty()) throw Error("exemplar pool is empty");
  if (static_cast<int>(pool.size()) < cfg.shots)
    throw Error("shot count exceeds pool size");

  std::unique_ptr<DiskCache> cache;
  if (!cfg.cache_dir.empty()) cache = std::make_unique<DiskCache>(cfg.cache_dir);

  // scoring is shared across queries; selection itself is per query
  similarity::EmbeddingStore store;
  std::optional<similarity::Scorer> scorer;
  if (cfg.strategy != Strategy::random_pick) {
    if (cfg.scorer == "cls" || cfg.scorer == "bertscore") {
      if (cfg.embeddings_path.empty())
        throw Error("scorer '" + cfg.scorer + "' needs an embeddings sidecar");
      store.load_sidecar(cfg.embeddings_path);
      scorer = (cfg.scorer == "cls") ? similarity::make_cls_scorer(store)
                                     : similarity::make_bertscore_scorer(store);
    } else if (cfg.scorer == "lm") {
      if (!logprob_backend) {
        if (cfg.backend.endpoint.empty())
          throw Error("lm scorer needs a logprob backend");
        logprob_backend =
            std::make_shared<HttpLogprobBackend>(cfg.backend.endpoint, cfg.backend.model);
      }
      scorer = similarity::make_lm_scorer(logprob_backend, cfg.lm_length_normalize);
    } else {
      throw Error("strategy " + strategy_to_string(cfg.strategy) +
                  " needs a scorer (cls | lm | bertscore)");
    }
  }

  similarity::SimilarityMatrix matrix;
  similarity::QueryScores qscores;
  if (scorer) {
    bool need_pool_matrix = cfg.strategy == Strategy::mmr;
    std::tie(matrix, qscores) = similarity::build_matrices(
        pool, queries, *scorer, cfg.workers);
    if (!need_pool_matrix) matrix.scores.shrink_to_fit();
  }

  std::map<std::string, const Exemplar*> by_id;
  for (const auto& ex : pool) by_id[ex.id] = &ex;
  std::vector<std::string> pool_ids;
  for (const auto& ex : pool) pool_ids.push_back(ex.id);

  RunManifest manifest;
  manifest.config_hash = run_config_hash(cfg);
  manifest.pool_hash =
      cfg.pool_path.empty() ? "" : util::sha256_hex(util::read_file(cfg.pool_path));
  manifest.query_set_hash =
      cfg.queries_path.empty() ? "" : util::sha256_hex(util::read_file(cfg.queries_path));
  manifest.task = task_to_string(cfg.task);
  manifest.strategy = strategy_to_string(cfg.strategy);
  manifest.scorer = cfg.scorer;
  manifest.lambda = cfg.lambda;
  manifest.records.resize(queries.size());

  auto run_one = [&](std::size_t qi) {
    const Query& q = queries[qi];
    RunRecord& rec = manifest.records[qi];
    rec.query_id = q.id;
    try {
      selection::QueryRow row;
      row.pool_ids = pool_ids;
      if (scorer) row.scores = qscores.scores[qi];

      selection::SelectionResult sel;
      switch (cfg.strategy) {
        case Strategy::random_pick: {
          uint64_t seed = cfg.seed ^ std::hash<std::string>{}(q.id);
          sel = selection::select_random(pool_ids, cfg.shots, seed);
          break;
        }
        case Strategy::nn:
          sel = selection::select_nn(row, cfg.shots);
          break;
        case Strategy::mmr:
          sel = selection::select_mmr(matrix, row, cfg.shots, cfg.lambda);
          break;
      }

      std::vector<std::string> ordered;
      if (cfg.order == PromptOrder::selection_order) {
        ordered = sel.ids;
      } else if (cfg.order == PromptOrder::fixed_seeded_shuffle) {
        ordered = selection::order_for_prompt(sel, row, cfg.order, cfg.seed);
      } else {
        if (!scorer) throw Error("similarity-based ordering needs a scorer");
        ordered = selection::order_for_prompt(sel, row, cfg.order);
      }

      std::vector<Exemplar> chosen;
      for (const auto& id : ordered) chosen.push_back(*by_id.at(id));
      promptkit::PromptRecord prompt = promptkit::render_prompt(chosen, q);
      rec.exemplar_ids = prompt.exemplar_ids;
      rec.prompt = prompt.text;

      rec.completion = complete(prompt.text, backend, cfg.backend, cache.get(), &rec.cache_key);
      try {
        rec.predicted = promptkit::parse_answer(rec.completion, q.task);
      } catch (const promptkit::ExtractionFailed&) {
        rec.predicted = std::nullopt;
      }
      if (q.gold_answer) {
        rec.gold = normalize_answer(*q.gold_answer, q.task);
        rec.correct = rec.predicted && *rec.predicted == rec.gold;
      }
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  };

  int workers = std::max(1, std::min(cfg.backend.concurrency, cfg.workers));
  if (workers <= 1 || queries.size() <= 1) {
    for (std::size_t qi = 0; qi < queries.size(); ++qi) run_one(qi);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        while (true) {
          std::size_t qi = next.fetch_add(1);
          if (qi >= queries.size()) break;
          run_one(qi);
        }
      });
    }
    for (auto& t : threads) t.join();
  }

  std::size_t failures = 0;
  std::vector<promptkit::ScoredRecord> scored;
  for (const auto& rec : manifest.records) {
    if (!rec.error.empty()) {
      ++failures;
      continue;
    }
    if (!rec.gold.empty()) scored.push_back({rec.gold, rec.predicted});
  }
  if (!queries.empty() &&
      failures * 10 > queries.size())
    throw Error("more than 10% of queries failed (" + std::to_string(failures) + "/" +
                std::to_string(queries.size()) + ")");
  if (!scored.empty()) manifest.report = promptkit::score_accuracy(scored);
  return manifest;
}

RunManifest run_from_config(const RunConfig& cfg, const std::string& out_path) {
  auto pool = load_pool(cfg.pool_path);
  auto queries = load_queries(cfg.queries_path);
  std::unique_ptr<CompletionBackend> backend;
  switch (cfg.backend.kind) {
    case BackendConfig::Kind::faithful_mock:
      backend = std::make_unique<FaithfulMockBackend>();
      break;
    case BackendConfig::Kind::http_completion:
      backend = std::make_unique<HttpCompletionBackend>(cfg.backend.endpoint, cfg.backend.model);
      break;
    case BackendConfig::Kind::replay_cache_only:
      backend = nullptr;
      break;
  }
  RunManifest m = run_experiment(cfg, pool, queries, backend.get());
  if (!out_path.empty()) write_manifest(m, out_path);
  return m;
}

// ---------------------------------------------------------------------------
// Manifest serialization: line-delimited records plus one summary line.

namespace {

json record_to_json(const RunRecord& r) {
  json j = {{"type", "record"},
            {"query_id", r.query_id},
            {"exemplar_ids", r.exemplar_ids},
            {"prompt", r.prompt},
            {"completion", r.completion},
            {"gold", r.gold},
            {"correct", r.correct},
            {"cache_key", r.cache_key},
            {"error", r.error}};
  if (r.predicted) j["predicted"] = *r.predicted;
  return j;
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.query_id = j.at("query_id").get<std::string>();
  r.exemplar_ids = j.at("exemplar_ids").get<std::vector<std::string>>();
  r.prompt = j.at("prompt").get<std::string>();
  r.completion = j.at("completion").get<std::string>();
  r.gold = j.at("gold").get<std::string>();
  r.correct = j.at("correct").get<bool>();
  r.cache_key = j.at("cache_key").get<std::string>();
  r.error = j.at("error").get<std::string>();
  if (j.contains("predicted")) r.predicted = j.at("predicted").get<std::string>();
  return r;
}

}  // namespace

void write_manifest(const RunManifest& m, const std::string& path) {
  std::string out;
  for (const auto& r : m.records) {
    out += record_to_json(r).dump();
    out += "\n";
  }
  json summary = {{"type", "summary"},
                  {"config_hash", m.config_hash},
                  {"pool_hash", m.pool_hash},
                  {"query_set_hash", m.query_set_hash},
                  {"task", m.task},
                  {"strategy", m.strategy},
                  {"scorer", m.scorer},
                  {"lambda", m.lambda},
                  {"accuracy", m.report.accuracy},
                  {"total", m.report.total},
                  {"correct", m.report.correct},
                  {"incorrect", m.report.incorrect},
                  {"extraction_failures", m.report.extraction_failures}};
  out += summary.dump();
  out += "\n";
  util::write_file_atomic(path, out);
}

RunManifest load_manifest(const std::string& path) {
  RunManifest m;
  bool have_summary = false;
  for (const auto& line : util::read_lines(path)) {
    if (util::trim(line).empty()) continue;
    json j = json::parse(line);
    std::string type = j.value("type", "");
    if (type == "record") {
      m.records.push_back(record_from_json(j));
    } else if (type == "summary") {
      m.config_hash = j.at("config_hash").get<std::string>();
      m.pool_hash = j.at("pool_hash").get<std::string>();
      m.query_set_hash = j.at("query_set_hash").get<std::string>();
      m.task = j.at("task").get<std::string>();
      m.strategy = j.at("strategy").get<std::string>();
      m.scorer = j.at("scorer").get<std::string>();
      m.lambda = j.at("lambda").get<double>();
      m.report.accuracy = j.at("accuracy").get<double>();
      m.report.total = j.at("total").get<int>();
      m.report.correct = j.at("correct").get<int>();
      m.report.incorrect = j.at("incorrect").get<int>();
      m.report.extraction_failures = j.at("extraction_failures").get<int>();
      have_summary = true;
    } else {
      throw Error(path + ": unknown manifest line type '" + type + "'");
    }
  }
  if (!have_summary) throw Error(path + ": manifest has no summary line");
  return m;
}

// ---------------------------------------------------------------------------
// Reporting

ReportOutput report(const std::vector<RunManifest>& manifests) {
  if (manifests.empty()) throw Error("report needs at least one manifest");
  ReportOutput out;

  auto row_key = [](const RunManifest& m) {
    std::string key = m.strategy;
    if (!m.scorer.empty()) key += "/" + m.scorer;
    if (m.strategy == "mmr") {
      std::ostringstream ss;
      ss << "/lambda=" << m.lambda;
      key += ss.str();
    }
    return key;
  };

  std::set<std::string> tasks, rows;
  for (const auto& m : manifests) {
    tasks.insert(m.task);
    rows.insert(row_key(m));
  }

  // query-set alignment check per task column
  std::map<std::string, std::set<std::string>> common_queries;
  for (const auto& task : tasks) {
    std::set<std::string> common;
    bool first = true;
    bool mismatch = false;
    for (const auto& m : manifests) {
      if (m.task != task) continue;
      std::set<std::string> ids;
      for (const auto& r : m.records) ids.insert(r.query_id);
      if (first) {
        common = ids;
        first = false;
      } else if (ids != common) {
        mismatch = true;
        std::set<std::string> inter;
        std::set_intersection(common.begin(), common.end(), ids.begin(), ids.end(),
                              std::inserter(inter, inter.begin()));
        common = inter;
      }
    }
    if (mismatch)
      out.warnings.push_back("query sets differ for task " + task +
                             "; aligned on intersection of " +
                             std::to_string(common.size()) + " queries");
    common_queries[task] = common;
  }

  // accuracy over the aligned query set for each manifest
  struct Cell {
    std::vector<double> values;
  };
  std::map<std::string, std::map<std::string, Cell>> grid;  // row -> task -> cell
  for (const auto& m : manifests) {
    const auto& common = common_queries[m.task];
    int total = 0, correct = 0;
    for (const auto& r : m.records) {
      if (!common.count(r.query_id) || r.gold.empty() || !r.error.empty()) continue;
      ++total;
      if (r.correct) ++correct;
    }
    double acc = total ? static_cast<double>(correct) / total : m.report.accuracy;
    grid[row_key(m)][m.task].values.push_back(acc);
  }

  auto mean_spread = [](const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::make_pair(mean, std::sqrt(var / static_cast<double>(v.size())));
  };

  std::ostringstream table;
  json jout = json::object();
  table << "row";
  for (const auto& t : tasks) table << "\t" << t;
  table << "\n";
  for (const auto& row : rows) {
    table << row;
    for (const auto& t : tasks) {
      table << "\t";
      auto it = grid[row].find(t);
      if (it == grid[row].end() || it->second.values.empty()) {
        table << "-";
        continue;
      }
      auto [mean, spread] = mean_spread(it->second.values);
      std::ostringstream cell;
      cell.setf(std::ios::fixed);
      cell.precision(3);
      cell << mean;
      if (it->second.values.size() > 1) {
        cell << "±";
        cell << spread;
      }
      table << cell.str();
      jout[row][t] = {{"mean", mean},
                      {"spread", spread},
                      {"n", it->second.values.size()},
                      {"values", it->second.values}};
    }
    table << "\n";
  }
  for (const auto& w : out.warnings) table << "warning: " << w << "\n";
  out.text_table = table.str();
  out.json = jout.dump(2);
  return out;
}

}  // namespace forge::runner

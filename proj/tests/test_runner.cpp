#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "forge/promptkit.hpp"
#include "forge/runner.hpp"
#include "forge/taskgen.hpp"

using namespace forge;
using namespace forge::runner;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("forge_test_" + tag);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string str(const std::string& rel = "") const {
    return rel.empty() ? path.string() : (path / rel).string();
  }
};

std::vector<Exemplar> letcat_pool(int n, uint64_t seed = 1) {
  std::vector<Exemplar> pool;
  for (auto& inst : taskgen::gen_letcat(seed, n, taskgen::default_word_lexicon()))
    pool.push_back(std::move(inst.exemplar));
  return pool;
}

std::vector<Query> queries_from(const std::vector<Exemplar>& pool) {
  std::vector<Query> out;
  for (const auto& ex : pool) out.push_back({"q-" + ex.id, ex.question, ex.answer, ex.task});
  return out;
}

}  // namespace

TEST_CASE("faithful mock answers the final question block correctly") {
  auto pool = letcat_pool(4);
  auto queries = queries_from(letcat_pool(3, 2));
  FaithfulMockBackend mock;
  for (const auto& q : queries) {
    auto rec = promptkit::render_prompt(pool, q);
    std::string completion = mock.complete(rec.text, 256);
    CHECK(promptkit::parse_answer(completion, Task::letcat) == *q.gold_answer);
  }
  CHECK(mock.calls() == 3);
}

TEST_CASE("faithful mock handles coinflip and rejects gsm") {
  std::vector<Exemplar> pool;
  for (auto& inst : taskgen::gen_coinflip(3, 4, taskgen::default_name_lexicon()))
    pool.push_back(std::move(inst.exemplar));
  Query q{"q", pool[0].question, pool[0].answer, Task::coinflip};
  FaithfulMockBackend mock;
  auto rec = promptkit::render_prompt(pool, q);
  CHECK(promptkit::parse_answer(mock.complete(rec.text, 256), Task::coinflip) == pool[0].answer);

  std::string gsm_prompt =
      "Q: Leah had 32 chocolates and her sister had 42. If they ate 35, how many are left?\nA:";
  CHECK_THROWS_AS(mock.complete(gsm_prompt, 256), util::Error);
}

TEST_CASE("faithful mock mirrors the engineered template variant") {
  std::vector<Exemplar> pool;
  for (auto& inst :
       taskgen::gen_letcat(9, 4, taskgen::default_word_lexicon(), taskgen::Variant::engineered))
    pool.push_back(std::move(inst.exemplar));
  Query q{"q", pool[0].question, pool[0].answer, Task::letcat};
  FaithfulMockBackend mock;
  std::string completion = mock.complete(promptkit::render_prompt(pool, q).text, 256);
  CHECK(completion.find("Add space to") != std::string::npos);
  CHECK(promptkit::parse_answer(completion, Task::letcat) == pool[0].answer);
}

TEST_CASE("disk cache stores and retrieves by key") {
  TempDir dir("cache");
  DiskCache cache(dir.str());
  std::string key = completion_cache_key("mock", "m", "some prompt", 64);
  CHECK_FALSE(cache.get(key).has_value());
  cache.put(key, "a completion");
  REQUIRE(cache.get(key).has_value());
  CHECK(*cache.get(key) == "a completion");
  // distinct inputs produce distinct keys
  CHECK(completion_cache_key("mock", "m", "some prompt", 65) != key);
  CHECK(completion_cache_key("mock", "m2", "some prompt", 64) != key);
  CHECK(completion_cache_key("mock", "m", "other prompt", 64) != key);
}

TEST_CASE("complete() consults the cache before the backend") {
  TempDir dir("complete");
  DiskCache cache(dir.str());
  auto pool = letcat_pool(3);
  Query q{"q", pool[0].question, pool[0].answer, Task::letcat};
  std::string prompt = promptkit::render_prompt(pool, q).text;

  FaithfulMockBackend mock;
  BackendConfig cfg;
  std::string first = complete(prompt, &mock, cfg, &cache);
  CHECK(mock.calls() == 1);
  std::string second = complete(prompt, &mock, cfg, &cache);
  CHECK(mock.calls() == 1);  // cache hit, no backend call
  CHECK(second == first);

  BackendConfig replay;
  replay.kind = BackendConfig::Kind::replay_cache_only;
  CHECK(complete(prompt, nullptr, replay, &cache) == first);
  CHECK_THROWS_AS(complete("unseen prompt with no cached completion. Q: x\nA:", nullptr,
                           replay, &cache),
                  CacheMiss);
}

TEST_CASE("run_experiment end to end with the mock reaches full accuracy") {
  auto pool = letcat_pool(10);
  auto queries = queries_from(letcat_pool(5, 7));
  RunConfig cfg;
  cfg.task = Task::letcat;
  cfg.strategy = Strategy::random_pick;
  cfg.shots = 4;
  cfg.seed = 3;
  FaithfulMockBackend mock;
  auto manifest = run_experiment(cfg, pool, queries, &mock);
  CHECK(manifest.records.size() == 5);
  CHECK(manifest.report.total == 5);
  CHECK(manifest.report.correct == 5);
  CHECK(manifest.report.accuracy == doctest::Approx(1.0));
  for (const auto& rec : manifest.records) {
    CHECK(rec.correct);
    CHECK(rec.error.empty());
    CHECK(rec.exemplar_ids.size() == 4);
  }
}

TEST_CASE("manifest write/load/write is byte identical") {
  TempDir dir("manifest");
  auto pool = letcat_pool(6);
  auto queries = queries_from(letcat_pool(3, 5));
  RunConfig cfg;
  cfg.task = Task::letcat;
  cfg.strategy = Strategy::random_pick;
  cfg.shots = 3;
  FaithfulMockBackend mock;
  auto manifest = run_experiment(cfg, pool, queries, &mock);

  write_manifest(manifest, dir.str("m.jsonl"));
  std::string bytes = util::read_file(dir.str("m.jsonl"));
  auto loaded = load_manifest(dir.str("m.jsonl"));
  write_manifest(loaded, dir.str("m2.jsonl"));
  CHECK(util::read_file(dir.str("m2.jsonl")) == bytes);
  CHECK(loaded.records.size() == manifest.records.size());
  CHECK(loaded.report.accuracy == doctest::Approx(manifest.report.accuracy));
}

TEST_CASE("run config loads from json and hashes stably") {
  TempDir dir("config");
  std::string cfg_json = R"({
    "task": "letcat",
    "pool": "pool.jsonl",
    "queries": "queries.jsonl",
    "strategy": "mmr",
    "scorer": "cls",
    "shots": 6,
    "lambda": 0.6,
    "seed": 9,
    "embeddings": "emb.jsonl",
    "backend": {"kind": "faithful_mock", "model": "mock"},
    "cache_dir": "cache"
  })";
  util::write_file_atomic(dir.str("run.json"), cfg_json);
  auto cfg = load_run_config(dir.str("run.json"));
  CHECK(cfg.task == Task::letcat);
  CHECK(cfg.strategy == Strategy::mmr);
  CHECK(cfg.scorer == "cls");
  CHECK(cfg.shots == 6);
  CHECK(cfg.lambda == doctest::Approx(0.6));
  CHECK(cfg.seed == 9);
  CHECK(cfg.backend.kind == BackendConfig::Kind::faithful_mock);
  CHECK(run_config_hash(cfg) == run_config_hash(cfg));
  auto cfg2 = cfg;
  cfg2.shots = 7;
  CHECK(run_config_hash(cfg2) != run_config_hash(cfg));
}

TEST_CASE("report aggregates manifests into a strategy x task table") {
  auto pool = letcat_pool(6);
  auto queries = queries_from(letcat_pool(3, 5));
  RunConfig cfg;
  cfg.task = Task::letcat;
  cfg.strategy = Strategy::random_pick;
  cfg.shots = 3;
  FaithfulMockBackend mock;
  auto m1 = run_experiment(cfg, pool, queries, &mock);
  cfg.seed = 1;
  auto m2 = run_experiment(cfg, pool, queries, &mock);
  auto rep = report({m1, m2});
  CHECK(rep.text_table.find("letcat") != std::string::npos);
  CHECK(rep.text_table.find("random") != std::string::npos);
  CHECK_FALSE(rep.json.empty());
}

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "forge/core.hpp"
#include "forge/perturb.hpp"
#include "forge/promptkit.hpp"
#include "forge/runner.hpp"
#include "forge/selection.hpp"
#include "forge/similarity.hpp"
#include "forge/taskgen.hpp"

#include <json.hpp>

using namespace forge;
using selection::QueryRow;
using similarity::SimilarityMatrix;

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail = "") {
  std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", n, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

std::string fixture(const std::string& rel) { return std::string(FIXTURES_DIR) + "/" + rel; }

struct Instance {
  SimilarityMatrix matrix;
  QueryRow row;
  int shots = 0;
};

Instance random_instance(std::mt19937_64& rng, bool force_ties) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int n = 2 + static_cast<int>(rng() % 29);  // pool size 2..30
  Instance inst;
  inst.shots = 1 + static_cast<int>(rng() % static_cast<uint64_t>(n));
  for (int i = 0; i < n; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "e%03d", i);
    inst.row.pool_ids.push_back(buf);
  }
  inst.matrix.ids = inst.row.pool_ids;
  inst.matrix.symmetric = true;
  inst.matrix.scores.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    inst.matrix.scores[i][i] = 1.0;
    for (int j = i + 1; j < n; ++j)
      inst.matrix.scores[i][j] = inst.matrix.scores[j][i] = u(rng);
  }
  for (int i = 0; i < n; ++i) inst.row.scores.push_back(u(rng));
  if (force_ties) {
    for (int i = 0; i + 1 < n; i += 3) inst.row.scores[i + 1] = inst.row.scores[i];
    if (n > 4) inst.row.scores[n - 1] = inst.row.scores[0];
  }
  return inst;
}

// Brute-force per-step argmax of the greedy objective, ties to the smaller id.
std::vector<std::string> brute_force_mmr(const Instance& inst, double lambda) {
  const std::size_t n = inst.row.pool_ids.size();
  std::vector<bool> chosen(n, false);
  std::vector<std::size_t> chosen_idx;
  std::vector<std::string> out;
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(inst.shots), n);
  while (out.size() < take) {
    bool have = false;
    std::size_t best = 0;
    double best_obj = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (chosen[j]) continue;
      double penalty = 0;
      if (!chosen_idx.empty()) {
        penalty = -1e300;
        for (std::size_t i : chosen_idx)
          penalty = std::max(penalty, inst.matrix.at(j, i));
      }
      double obj = lambda * inst.row.scores[j] - (1.0 - lambda) * penalty;
      if (!have || obj > best_obj ||
          (obj == best_obj && inst.row.pool_ids[j] < inst.row.pool_ids[best])) {
        have = true;
        best = j;
        best_obj = obj;
      }
    }
    chosen[best] = true;
    chosen_idx.push_back(best);
    out.push_back(inst.row.pool_ids[best]);
  }
  return out;
}

void criterion_1() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    auto inst = random_instance(rng, trial % 4 == 0);
    double lambda = (trial % 11) / 10.0;
    auto got = selection::select_mmr(inst.matrix, inst.row, inst.shots, lambda).ids;
    auto want = brute_force_mmr(inst, lambda);
    if (got != want) ok = false;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char detail[96];
  std::snprintf(detail, sizeof(detail), "1000 instances, %.2f s (< 10 s)", secs);
  report(1, "every mmr pick equals the brute-force per-step argmax", ok && secs < 10.0, detail);
}

void criterion_2() {
  std::mt19937_64 rng(202);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    auto inst = random_instance(rng, /*force_ties=*/true);
    auto nn = selection::select_nn(inst.row, inst.shots).ids;
    auto mmr = selection::select_mmr(inst.matrix, inst.row, inst.shots, 1.0).ids;
    if (nn != mmr) ok = false;
  }
  report(2, "mmr at lambda=1.0 returns the exact nn id sequence, ties included", ok,
         "1000 instances with forced ties");
}

void criterion_3() {
  // Pool of near-duplicate clusters: 5 clusters of 5 points each on the unit
  // circle; cluster centers well apart, members close together. The query sits
  // on the first cluster's center, so relevance prefers the redundant cluster.
  similarity::EmbeddingStore store;
  std::vector<Exemplar> pool;
  std::vector<std::string> ids;
  for (int c = 0; c < 5; ++c) {
    for (int k = 0; k < 5; ++k) {
      double angle = 0.6 * c + 0.05 * k;
      std::string id = "c" + std::to_string(c) + "m" + std::to_string(k);
      ids.push_back(id);
      Exemplar ex;
      ex.id = id;
      ex.question = id;
      pool.push_back(ex);
      store.add_sequence(id, {std::cos(angle), std::sin(angle)});
    }
  }
  Query q{"q", "q", std::nullopt, Task::letcat};
  store.add_sequence("q", {1.0, 0.0});
  auto scorer = similarity::make_cls_scorer(store);
  auto [matrix, qscores] = similarity::build_matrices(pool, {q}, scorer);
  QueryRow row{ids, qscores.scores[0]};

  std::vector<double> grid = {1.0, 0.8, 0.6, 0.5, 0.4, 0.2, 0.0};
  std::vector<double> avg_sims;
  for (double lambda : grid) {
    auto sel = selection::select_mmr(matrix, row, 5, lambda);
    double total = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < sel.ids.size(); ++i) {
      for (std::size_t j = i + 1; j < sel.ids.size(); ++j) {
        std::size_t a = 0, b = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (ids[k] == sel.ids[i]) a = k;
          if (ids[k] == sel.ids[j]) b = k;
        }
        total += matrix.at(a, b);
        ++pairs;
      }
    }
    avg_sims.push_back(total / pairs);
  }
  bool ok = true;
  for (std::size_t i = 1; i < avg_sims.size(); ++i)
    if (avg_sims[i] > avg_sims[i - 1] + 1e-9) ok = false;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "avg pairwise similarity %.4f -> %.4f over the lambda grid",
                avg_sims.front(), avg_sims.back());
  report(3, "selected-set redundancy is non-increasing as lambda decreases", ok, detail);
}

void criterion_4() {
  similarity::EmbeddingStore store;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  bool ok = true;
  std::vector<std::string> record_ids;
  for (int r = 0; r < 100; ++r) {
    int tokens = 1 + static_cast<int>(rng() % 8);
    std::vector<std::string> names;
    std::vector<std::vector<double>> vecs;
    for (int t = 0; t < tokens; ++t) {
      names.push_back("t" + std::to_string(t));
      vecs.push_back({u(rng), u(rng), u(rng)});
    }
    std::string id = "r" + std::to_string(r);
    record_ids.push_back(id);
    store.add_tokens(id, names, vecs);
  }
  for (const auto& id : record_ids)
    if (std::fabs(similarity::bertscore_f1(id, id, store) - 1.0) > 1e-9) ok = false;
  for (int i = 0; i < 100; i += 7) {
    const auto& a = record_ids[i];
    const auto& b = record_ids[(i + 13) % 100];
    if (std::fabs(similarity::bertscore_f1(a, b, store) -
                  similarity::bertscore_f1(b, a, store)) > 1e-9)
      ok = false;
  }
  // hand case: P = 0.5, R = 1.0 -> F1 = 2/3
  store.add_tokens("hand_a", {"t0", "t1"}, {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  store.add_tokens("hand_b", {"t0"}, {{1.0, 0.0, 0.0}});
  double hand = similarity::bertscore_f1("hand_a", "hand_b", store);
  bool hand_ok = std::fabs(hand - 2.0 / 3.0) <= 1e-12;
  report(4, "bertscore identities: F1(x,x)=1, symmetry, hand case F1=2/3", ok && hand_ok);
}

void criterion_5() {
  std::map<Task, Exemplar> by_task;
  for (const auto& ex : load_pool(fixture("reference_pool.jsonl"))) by_task[ex.task] = ex;
  bool ok = true;
  auto check = [&](const Exemplar& got, const std::string& name) {
    std::string want = util::read_file(fixture("golden/" + name + ".txt"));
    if (render_explanation(got.explanation) != want) ok = false;
  };
  perturb::PerturbSpec inc;
  inc.kind = perturb::Kind::incorrect;
  for (const auto& [task, ex] : by_task) {
    std::string t = task_to_string(task);
    check(perturb::apply_mask_preset(ex, perturb::MaskPreset::mask1, ""), t + "_mask1_empty");
    check(perturb::apply_mask_preset(ex, perturb::MaskPreset::mask1, "_"),
          t + "_mask1_underscore");
    check(perturb::apply_mask_preset(ex, perturb::MaskPreset::mask2, ""), t + "_mask2_empty");
    check(perturb::apply_mask_preset(ex, perturb::MaskPreset::mask2, "_"),
          t + "_mask2_underscore");
    check(perturb::strip_nl(ex), t + "_nonl");
  }
  perturb::CorruptorConfig letcat_cfg;
  letcat_cfg.overrides = {{1, "y"}, {3, "e"}};
  check(perturb::corrupt_states(by_task[Task::letcat], inc, letcat_cfg), "letcat_incorrect");
  check(perturb::corrupt_states(by_task[Task::coinflip], inc), "coinflip_incorrect");
  perturb::CorruptorConfig gsm_cfg;
  gsm_cfg.overrides = {{0, "62"}};
  check(perturb::corrupt_states(by_task[Task::gsm], inc, gsm_cfg), "gsm_incorrect");
  report(5, "perturbation outputs byte-match the transcribed fixtures", ok,
         "mask1/mask2 x {empty,underscore} + incorrect + no-NL, 3 tasks");
}

void criterion_6() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  int total = 0, correct = 0;
  runner::FaithfulMockBackend mock;  // in-process; never opens a socket
  for (Task task : {Task::letcat, Task::coinflip}) {
    std::vector<Exemplar> pool;
    std::vector<Query> queries;
    if (task == Task::letcat) {
      for (auto& i : taskgen::gen_letcat(61, 40, taskgen::default_word_lexicon()))
        pool.push_back(std::move(i.exemplar));
      for (auto& i : taskgen::gen_letcat(62, 200, taskgen::default_word_lexicon()))
        queries.push_back({"q-" + i.exemplar.id, i.exemplar.question, i.exemplar.answer, task});
    } else {
      for (auto& i : taskgen::gen_coinflip(63, 40, taskgen::default_name_lexicon()))
        pool.push_back(std::move(i.exemplar));
      for (auto& i : taskgen::gen_coinflip(64, 200, taskgen::default_name_lexicon()))
        queries.push_back({"q-" + i.exemplar.id, i.exemplar.question, i.exemplar.answer, task});
    }
    runner::RunConfig cfg;
    cfg.task = task;
    cfg.strategy = Strategy::random_pick;
    cfg.shots = 6;
    cfg.seed = 9;
    auto manifest = runner::run_experiment(cfg, pool, queries, &mock);
    total += manifest.report.total;
    correct += manifest.report.correct;
    if (manifest.report.accuracy != 1.0) ok = false;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "%d/%d correct, %d mock calls, %.2f s (< 30 s), zero network", correct, total,
                mock.calls(), secs);
  report(6, "200+200 oracle queries against the faithful mock score accuracy 1.00",
         ok && total == 400 && correct == 400 && secs < 30.0, detail);
}

void criterion_7() {
  std::map<Task, Exemplar> by_task;
  for (const auto& ex : load_pool(fixture("reference_pool.jsonl"))) by_task[ex.task] = ex;
  std::vector<Exemplar> bases;
  for (auto& i : taskgen::gen_letcat(71, 5, taskgen::default_word_lexicon()))
    bases.push_back(std::move(i.exemplar));
  for (auto& i : taskgen::gen_coinflip(72, 5, taskgen::default_name_lexicon()))
    bases.push_back(std::move(i.exemplar));
  bases.push_back(by_task[Task::gsm]);
  std::vector<std::string> errors;
  for (const auto& ex : taskgen::load_gsm(fixture("gsm_partition_50.jsonl"), errors))
    bases.push_back(ex);

  int corruptions = 0, detected = 0;
  perturb::PerturbSpec inc;
  inc.kind = perturb::Kind::incorrect;
  uint64_t seed = 0;
  while (corruptions < 500) {
    const Exemplar& base = bases[corruptions % bases.size()];
    inc.rng_seed = seed++;
    auto bad = perturb::corrupt_states(base, inc);
    ++corruptions;
    if (base.task == Task::gsm) {
      // gsm detection: some equation in the trace is arithmetically false
      try {
        taskgen::verify_trace(bad);
      } catch (const taskgen::TraceInconsistency&) {
        ++detected;
      }
    } else {
      // letcat/coinflip detection: the question-level oracle disagrees
      if (taskgen::oracle_solve(Query{bad.id, bad.question, std::nullopt, bad.task}) !=
          bad.answer)
        ++detected;
    }
  }

  bool masks_ok = true;
  for (const auto& [task, ex] : by_task) {
    for (const auto& token : perturb::mask_token_choices()) {
      for (auto preset : {perturb::MaskPreset::mask1, perturb::MaskPreset::mask2}) {
        auto out = perturb::apply_mask_preset(ex, preset, token);
        if (out.explanation.answer_line != ex.explanation.answer_line) masks_ok = false;
      }
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "%d/%d corruptions detected; masks keep answer lines",
                detected, corruptions);
  report(7, "all seeded corruptions fail verification; masks never alter the answer line",
         detected == corruptions && masks_ok, detail);
}

void criterion_8() {
  std::vector<std::string> errors;
  auto pool = taskgen::load_gsm(fixture("gsm_partition_50.jsonl"), errors);
  auto labels =
      nlohmann::json::parse(util::read_file(fixture("gsm_partition_50.labels.json")));
  bool ok = errors.empty() && pool.size() == 50;
  auto parts = perturb::partition_by_operators(pool);
  std::size_t covered = 0;
  for (const auto& [cls, members] : parts) {
    covered += members.size();
    for (const auto& ex : members)
      if (labels.at(ex.id).get<std::string>() != perturb::operator_class_to_string(cls))
        ok = false;
  }
  if (covered != pool.size()) ok = false;
  report(8, "operator partition matches the 50-record hand labels exactly", ok);
}

void criterion_9() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "forge_acceptance_cache";
  fs::remove_all(dir);
  fs::create_directories(dir);

  std::vector<Exemplar> pool;
  std::vector<Query> queries;
  for (auto& i : taskgen::gen_letcat(91, 12, taskgen::default_word_lexicon()))
    pool.push_back(std::move(i.exemplar));
  for (auto& i : taskgen::gen_letcat(92, 8, taskgen::default_word_lexicon()))
    queries.push_back({"q-" + i.exemplar.id, i.exemplar.question, i.exemplar.answer,
                       Task::letcat});

  runner::RunConfig cfg;
  cfg.task = Task::letcat;
  cfg.strategy = Strategy::random_pick;
  cfg.shots = 4;
  cfg.seed = 5;
  cfg.cache_dir = dir.string();

  runner::FaithfulMockBackend mock;
  auto m1 = runner::run_experiment(cfg, pool, queries, &mock);
  int calls_cold = mock.calls();
  auto m2 = runner::run_experiment(cfg, pool, queries, &mock);
  int calls_warm = mock.calls() - calls_cold;

  runner::write_manifest(m1, (dir / "m1.jsonl").string());
  runner::write_manifest(m2, (dir / "m2.jsonl").string());
  bool identical = util::read_file((dir / "m1.jsonl").string()) ==
                   util::read_file((dir / "m2.jsonl").string());
  fs::remove_all(dir);
  char detail[96];
  std::snprintf(detail, sizeof(detail), "cold pass %d calls, warm pass %d calls", calls_cold,
                calls_warm);
  report(9, "warm rerun makes 0 backend calls and yields a byte-identical manifest",
         calls_cold > 0 && calls_warm == 0 && identical, detail);
}

void criterion_10() {
  int total = 0, recovered = 0;
  auto consume = [&](const Exemplar& ex) {
    ++total;
    try {
      if (promptkit::parse_answer(render_explanation(ex.explanation), ex.task) ==
          normalize_answer(ex.answer, ex.task))
        ++recovered;
    } catch (const std::exception&) {
    }
  };
  for (const auto& file :
       {"reference_pool.jsonl", "qa_pool.jsonl", "gsm_partition_50.jsonl"})
    for (const auto& ex : load_pool(fixture(file))) consume(ex);
  for (auto& i : taskgen::gen_letcat(1001, 300, taskgen::default_word_lexicon()))
    consume(i.exemplar);
  for (auto& i : taskgen::gen_letcat(1002, 200, taskgen::default_word_lexicon(),
                                     taskgen::Variant::engineered))
    consume(i.exemplar);
  for (auto& i : taskgen::gen_coinflip(1003, 500, taskgen::default_name_lexicon()))
    consume(i.exemplar);
  char detail[64];
  std::snprintf(detail, sizeof(detail), "%d/%d records recovered", recovered, total);
  report(10, "parse_answer after render_explanation recovers every stored answer",
         total >= 1000 && recovered == total, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", failures);
  return 1;
}

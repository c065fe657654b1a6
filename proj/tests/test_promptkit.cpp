#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forge/core.hpp"
#include "forge/promptkit.hpp"

using namespace forge;
using namespace forge::promptkit;

namespace {
std::string fixture(const std::string& rel) { return std::string(FIXTURES_DIR) + "/" + rel; }
}  // namespace

TEST_CASE("prompt rendering: Q/A blocks, one blank line apart, bare final cue") {
  auto pool = load_pool(fixture("reference_pool.jsonl"));
  Exemplar letcat;
  for (const auto& ex : pool)
    if (ex.task == Task::letcat) letcat = ex;
  Query q{"q0", "Take the last letters of the words in \"Elon Musk\" and concatenate them.",
          "nk", Task::letcat};
  auto rec = render_prompt({letcat, letcat}, q);
  CHECK(rec.query_id == "q0");
  CHECK(rec.exemplar_ids == std::vector<std::string>{letcat.id, letcat.id});
  std::string block = "Q: " + letcat.question + "\nA: " + render_explanation(letcat.explanation);
  CHECK(rec.text == block + "\n\n" + block + "\n\nQ: " + q.question + "\nA:");
}

TEST_CASE("prompt rendering rejects a task mismatch") {
  auto pool = load_pool(fixture("reference_pool.jsonl"));
  Query q{"q", "total?", std::nullopt, Task::gsm};
  CHECK_THROWS_AS(render_prompt({pool[0]}, q), util::Error);  // letcat exemplar, gsm query
}

TEST_CASE("esnli and ecqa prompts byte-match the golden files") {
  auto pool = load_pool(fixture("qa_pool.jsonl"));
  auto queries = load_queries(fixture("qa_queries.jsonl"));
  REQUIRE(pool.size() == 2);
  REQUIRE(queries.size() == 2);
  for (const auto& q : queries) {
    for (const auto& ex : pool) {
      if (ex.task != q.task) continue;
      auto rec = render_prompt({ex}, q);
      std::string name = task_to_string(q.task) + "_prompt.txt";
      CHECK(rec.text == util::read_file(fixture("golden/" + name)));
    }
  }
}

TEST_CASE("question builders match the documented wording") {
  CHECK(make_esnli_question("A man at a flea market browsing.",
                            "A man is sleeping at a flea market.") ==
        "Premise:\n\"A man at a flea market browsing.\"\n"
        "Based on this premise, can we conclude the hypothesis "
        "\"A man is sleeping at a flea market.\" is true?\n"
        "OPTIONS:\n- yes\n- no\n- not possible to tell");
  CHECK(make_ecqa_question("Where?", {"here", "there"}) ==
        "Where?\nAnswer Choices:\n(a) here\n(b) there");
}

TEST_CASE("parse_answer uses the last cue and normalizes per task") {
  CHECK(parse_answer("The answer is 3. Wait, the answer is 5.", Task::gsm) == "5");
  CHECK(parse_answer("So the answer is ls.", Task::letcat) == "ls");
  CHECK(parse_answer("So the ANSWER IS Yes.", Task::coinflip) == "yes");
  CHECK(parse_answer("blah. The answer is $1,200.", Task::gsm) == "1200");
  CHECK(parse_answer("So the answer is (b).", Task::ecqa) == "b");
  CHECK(parse_answer("The answer is not possible to tell.", Task::esnli) ==
        "not possible to tell");
  CHECK(parse_answer("The answer is no.", Task::esnli) == "no");
  CHECK_THROWS_AS(parse_answer("I refuse to commit.", Task::gsm), ExtractionFailed);
}

TEST_CASE("parse_answer recovers the stored answer for every fixture exemplar") {
  for (const auto& file : {"reference_pool.jsonl", "qa_pool.jsonl",
                           "gsm_partition_50.jsonl"}) {
    for (const auto& ex : load_pool(fixture(file))) {
      CHECK(parse_answer(render_explanation(ex.explanation), ex.task) ==
            normalize_answer(ex.answer, ex.task));
    }
  }
}

TEST_CASE("score_accuracy tallies extraction failures as incorrect") {
  std::vector<ScoredRecord> records = {
      {"39", std::string("39")},
      {"39", std::string("40")},
      {"yes", std::nullopt},
      {"ls", std::string("ls")},
  };
  auto report = score_accuracy(records);
  CHECK(report.total == 4);
  CHECK(report.correct == 2);
  CHECK(report.incorrect == 2);
  CHECK(report.extraction_failures == 1);
  CHECK(report.accuracy == doctest::Approx(0.5).epsilon(1e-12));
}

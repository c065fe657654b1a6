#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/util.hpp"

namespace forge {

enum class Task { letcat, coinflip, gsm, ecqa, esnli };

Task task_from_string(const std::string& s);
std::string task_to_string(Task t);

/// One intermediate state of a computation trace.
struct TraceState {
  int index = 0;
  std::string value;
  std::string role;   // free tag: "word", "letter", "coin-state", "equation", ...
  bool masked = false;
};

/// A computation trace plus the natural-language template that wraps it.
/// The template references states by numbered slots "{0}", "{1}", ...
struct Explanation {
  std::vector<TraceState> states;
  std::string template_text;
  std::string answer_line;  // final "The answer is ..." sentence
};

struct Exemplar {
  std::string id;
  std::string question;
  Explanation explanation;
  std::string answer;  // canonical form
  Task task = Task::letcat;
};

struct Query {
  std::string id;
  std::string question;
  std::optional<std::string> gold_answer;
  Task task = Task::letcat;
};

enum class Strategy { random_pick, nn, mmr };
enum class TieBreak { by_id };
enum class PromptOrder {
  selection_order,
  ascending_similarity,
  descending_similarity,
  fixed_seeded_shuffle
};

struct SelectionConfig {
  Strategy strategy = Strategy::mmr;
  int shots = 8;
  double lambda = 0.5;
  TieBreak tie_break = TieBreak::by_id;
  PromptOrder prompt_order = PromptOrder::selection_order;
};

Strategy strategy_from_string(const std::string& s);
std::string strategy_to_string(Strategy s);
PromptOrder prompt_order_from_string(const std::string& s);
std::string prompt_order_to_string(PromptOrder o);

/// Checks the structural invariants (contiguous indices, slot/state match).
/// Throws util::Error on violation.
void validate_explanation(const Explanation& e);

/// Fills every slot with its state value and appends the answer line.
std::string render_explanation(const Explanation& e);

/// Number of "{i}" slots in a template.
int count_slots(const std::string& template_text);

/// Canonical answer normalization: trimmed; lower-cased for
/// letcat/coinflip/esnli; digit string for gsm (commas, "$", trailing "."
/// stripped); single option letter for ecqa.
std::string normalize_answer(const std::string& raw, Task task);

// JSONL serialization (one record per line, UTF-8).
std::string exemplar_to_json(const Exemplar& ex);
Exemplar exemplar_from_json(const std::string& line);
std::string query_to_json(const Query& q);
Query query_from_json(const std::string& line);

std::vector<Exemplar> load_pool(const std::string& path);
void save_pool(const std::string& path, const std::vector<Exemplar>& pool);
std::vector<Query> load_queries(const std::string& path);
void save_queries(const std::string& path, const std::vector<Query>& queries);

}  // namespace forge

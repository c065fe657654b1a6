#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/core.hpp"

namespace forge::promptkit {

struct PromptRecord {
  std::string query_id;
  std::vector<std::string> exemplar_ids;  // final order
  std::string text;
  std::string format_tag;
};

/// Renders an ordered exemplar list plus the query into the task's prompt
/// format: "Q:/A:" blocks separated by one blank line, ending with the bare
/// "A:" cue. Byte-stable across runs.
PromptRecord render_prompt(const std::vector<Exemplar>& exemplars, const Query& q);

/// The e-SNLI question block (PromptSource-derived wording), kept as a golden template.
std::string make_esnli_question(const std::string& premise, const std::string& hypothesis);

/// The ECQA question block: question text plus lettered answer choices.
std::string make_ecqa_question(const std::string& question,
                               const std::vector<std::string>& choices);

struct ExtractionFailed : util::Error {
  explicit ExtractionFailed(const std::string& what) : util::Error(what) {}
};

/// Extracts the canonical answer after the LAST case-insensitive
/// "answer is" in the completion. Throws ExtractionFailed when no cue exists.
std::string parse_answer(const std::string& completion, Task task);

struct ScoredRecord {
  std::string gold;                    // canonical
  std::optional<std::string> predicted;  // nullopt = extraction failed
};

struct AccuracyReport {
  double accuracy = 0;
  int total = 0;
  int correct = 0;
  int incorrect = 0;
  int extraction_failures = 0;
};

AccuracyReport score_accuracy(const std::vector<ScoredRecord>& records);

}  // namespace forge::promptkit

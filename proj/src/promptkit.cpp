#include "forge/promptkit.hpp"

#include <cctype>

namespace forge::promptkit {

using util::Error;

PromptRecord render_prompt(const std::vector<Exemplar>& exemplars, const Query& q) {
  for (const auto& ex : exemplars) {
    if (ex.task != q.task)
      throw Error("exemplar " + ex.id + " task " + task_to_string(ex.task) +
                  " does not match query task " + task_to_string(q.task));
  }
  std::string text;
  for (const auto& ex : exemplars) {
    text += "Q: " + ex.question + "\n";
    text += "A: " + render_explanation(ex.explanation) + "\n";
    text += "\n";
  }
  text += "Q: " + q.question + "\n";
  text += "A:";

  PromptRecord rec;
  rec.query_id = q.id;
  for (const auto& ex : exemplars) rec.exemplar_ids.push_back(ex.id);
  rec.text = std::move(text);
  rec.format_tag = task_to_string(q.task);
  return rec;
}

std::string make_esnli_question(const std::string& premise, const std::string& hypothesis) {
  return "Premise:\n\"" + premise +
         "\"\nBased on this premise, can we conclude the hypothesis \"" + hypothesis +
         "\" is true?\nOPTIONS:\n- yes\n- no\n- not possible to tell";
}

std::string make_ecqa_question(const std::string& question,
                               const std::vector<std::string>& choices) {
  std::string out = question + "\nAnswer Choices:";
  char letter = 'a';
  for (const auto& c : choices) {
    out += "\n(" + std::string(1, letter) + ") " + c;
    ++letter;
  }
  return out;
}

std::string parse_answer(const std::string& completion, Task task) {
  std::size_t cue = util::rfind_ci(completion, "answer is");
  if (cue == std::string::npos)
    throw ExtractionFailed("completion has no 'answer is' span");
  std::size_t start = cue + 9;
  while (start < completion.size() &&
         std::isspace(static_cast<unsigned char>(completion[start])))
    ++start;
  // span runs to the end of the sentence (a period followed by whitespace
  // or end of text) or end of line
  std::size_t end = start;
  while (end < completion.size()) {
    char c = completion[end];
    if (c == '\n') break;
    if (c == '.' &&
        (end + 1 >= completion.size() ||
         std::isspace(static_cast<unsigned char>(completion[end + 1])))) {
      break;
    }
    ++end;
  }
  std::string span = util::trim(completion.substr(start, end - start));
  if (span.empty()) throw ExtractionFailed("empty answer span");

  if (task == Task::gsm) {
    // first number-like token in the span
    std::string num;
    bool in_number = false;
    for (std::size_t i = 0; i < span.size(); ++i) {
      char c = span[i];
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (in_number && (c == ',' || (c == '.' && i + 1 < span.size() &&
                                      std::isdigit(static_cast<unsigned char>(span[i + 1])))))) {
        num.push_back(c);
        in_number = true;
      } else if (c == '-' && !in_number && num.empty()) {
        num.push_back(c);
      } else if (in_number) {
        break;
      }
    }
    if (num.empty() || num == "-") throw ExtractionFailed("no number in answer span: " + span);
    return normalize_answer(num, Task::gsm);
  }
  if (task == Task::esnli) {
    std::string lowered = util::to_lower(span);
    if (lowered.rfind("not possible", 0) == 0) return "not possible to tell";
  }
  return normalize_answer(span, task);
}

AccuracyReport score_accuracy(const std::vector<ScoredRecord>& records) {
  if (records.empty()) throw Error("score_accuracy needs at least one record");
  AccuracyReport rep;
  rep.total = static_cast<int>(records.size());
  for (const auto& r : records) {
    if (!r.predicted) {
      ++rep.extraction_failures;
      ++rep.incorrect;
    } else if (*r.predicted == r.gold) {
      ++rep.correct;
    } else {
      ++rep.incorrect;
    }
  }
  rep.accuracy = static_cast<double>(rep.correct) / static_cast<double>(rep.total);
  return rep;
}

}  // namespace forge::promptkit

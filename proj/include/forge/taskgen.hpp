#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forge/core.hpp"

namespace forge::taskgen {

/// Template variant for the synthetic tasks: `standard` is the plain
/// chain-of-thought form; `engineered` adds an explicit tokenization step
/// for letter concatenation.
enum class Variant { standard, engineered };

Variant variant_from_string(const std::string& s);

struct TaskInstance {
  Exemplar exemplar;
  // difficulty metadata
  int word_len1 = 0;
  int word_len2 = 0;
  int flip_count = 0;
};

/// Default name lexicons used when the caller supplies none.
const std::vector<std::string>& default_word_lexicon();
const std::vector<std::string>& default_name_lexicon();

std::vector<TaskInstance> gen_letcat(uint64_t seed, int count,
                                     const std::vector<std::string>& lexicon,
                                     Variant variant = Variant::standard);

std::vector<TaskInstance> gen_coinflip(uint64_t seed, int count,
                                       const std::vector<std::string>& lexicon);

/// Loads GSM exemplars from either the core serialization or the raw
/// {id, question, explanation_text, answer} format. Per-record failures are
/// collected into `errors`; a malformed file throws.
std::vector<Exemplar> load_gsm(const std::string& path, std::vector<std::string>& errors);

/// Equations of the form "a OP b = c" extracted from free text, in order.
std::vector<std::string> extract_equations(const std::string& text);

/// Builds a gsm Exemplar from raw question/explanation text by lifting the
/// equations into trace states.
Exemplar gsm_from_raw(const std::string& id, const std::string& question,
                      const std::string& explanation_text, const std::string& answer);

struct OracleError : util::Error {
  explicit OracleError(const std::string& what) : util::Error(what) {}
};
struct TraceInconsistency : util::Error {
  explicit TraceInconsistency(const std::string& what) : util::Error(what) {}
};

/// Solves a letcat/coinflip question directly from its text.
std::string oracle_solve(const Query& q);

/// Flip / no-flip actions parsed from a coinflip question, in order.
std::vector<bool> coinflip_actions(const std::string& question);

/// Evaluates a gsm trace left to right; returns the final right-hand side.
/// Throws TraceInconsistency if any equation is arithmetically false.
std::string solve_gsm_trace(const std::vector<std::string>& equations);

/// Solves from an exemplar: question text for letcat/coinflip, trace for gsm.
std::string oracle_solve(const Exemplar& ex);

/// Checks the whole trace against the question, inferring masked states.
/// Throws TraceInconsistency when an unmasked state disagrees.
void verify_trace(const Exemplar& ex);

}  // namespace forge::taskgen

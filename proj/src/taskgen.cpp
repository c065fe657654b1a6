#include "forge/taskgen.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <regex>

#include <json.hpp>

namespace forge::taskgen {

using util::Error;
using nlohmann::json;

Variant variant_from_string(const std::string& s) {
  if (s == "standard") return Variant::standard;
  if (s == "engineered") return Variant::engineered;
  throw Error("unknown template variant: " + s);
}

const std::vector<std::string>& default_word_lexicon() {
  static const std::vector<std::string> words = {
      "Bill",   "Gates",  "Elon",    "Musk",   "Larry", "Page",  "Sergey",
      "Brin",   "Grace",  "Hopper",  "Alan",   "Turing", "Ada",  "Lovelace",
      "Tim",    "Berners", "Lee",    "Linus",  "Torvalds", "Margaret",
      "Hamilton", "Donald", "Knuth", "Barbara", "Liskov", "John", "Carmack",
      "Radia",  "Perlman", "Ken",    "Thompson", "Dennis", "Ritchie"};
  return words;
}

const std::vector<std::string>& default_name_lexicon() {
  static const std::vector<std::string> names = {
      "Ka",    "Sal",   "Shaunda", "Shalonda", "Maya", "Noah", "Lena",
      "Omar",  "Priya", "Hugo",    "Ines",     "Jude", "Kira", "Liam",
      "Mona",  "Nils",  "Opal",    "Pablo",    "Quinn", "Rosa"};
  return names;
}

namespace {

// Deterministic across platforms, unlike std::uniform_int_distribution.
std::size_t rng_below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

char last_letter(const std::string& w) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(w.back())));
}

std::string spaced(const std::string& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back(w[i]);
  }
  return out;
}

}  // namespace

std::vector<TaskInstance> gen_letcat(uint64_t seed, int count,
                                     const std::vector<std::string>& lexicon,
                                     Variant variant) {
  if (lexicon.size() < 2) throw Error("letcat lexicon needs at least 2 words");
  for (const auto& w : lexicon) {
    if (w.empty()) throw Error("letcat lexicon contains an empty word");
    for (char c : w)
      if (!std::isalpha(static_cast<unsigned char>(c)))
        throw Error("letcat lexicon word not alphabetic: " + w);
  }
  std::mt19937_64 rng(seed);
  std::vector<TaskInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::size_t a = rng_below(rng, lexicon.size());
    std::size_t b = rng_below(rng, lexicon.size() - 1);
    if (b >= a) ++b;
    const std::string& w1 = lexicon[a];
    const std::string& w2 = lexicon[b];
    std::string l1(1, last_letter(w1)), l2(1, last_letter(w2));
    std::string cat = l1 + l2;

    TaskInstance inst;
    Exemplar& ex = inst.exemplar;
    ex.id = "letcat-" + std::to_string(seed) + "-" + std::to_string(i);
    ex.task = Task::letcat;
    ex.question = "Take the last letters of the words in \"" + w1 + " " + w2 +
                  "\" and concatenate them.";
    ex.answer = cat;
    ex.explanation.answer_line = "So the answer is " + cat + ".";
    if (variant == Variant::standard) {
      ex.explanation.template_text =
          "The last letter of {0} is {1}. The last letter of {2} is {3}. "
          "Concatenating {4} and {5} is {6}.";
      ex.explanation.states = {{0, w1, "word", false},  {1, l1, "letter", false},
                               {2, w2, "word", false},  {3, l2, "letter", false},
                               {4, l1, "operand", false}, {5, l2, "operand", false},
                               {6, cat, "concat", false}};
    } else {
      ex.explanation.template_text =
          "Add space to \"{0}\" and get \"{1}\", the last letter is {2}. "
          "Add space to \"{3}\" and get \"{4}\", the last letter is {5}. "
          "Concatenating {6} and {7} is {8}.";
      ex.explanation.states = {{0, w1, "word", false},   {1, spaced(w1), "spaced", false},
                               {2, l1, "letter", false}, {3, w2, "word", false},
                               {4, spaced(w2), "spaced", false}, {5, l2, "letter", false},
                               {6, l1, "operand", false}, {7, l2, "operand", false},
                               {8, cat, "concat", false}};
    }
    inst.word_len1 = static_cast<int>(w1.size());
    inst.word_len2 = static_cast<int>(w2.size());
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TaskInstance> gen_coinflip(uint64_t seed, int count,
                                       const std::vector<std::string>& lexicon) {
  if (lexicon.size() < 2) throw Error("coinflip lexicon needs at least 2 names");
  std::mt19937_64 rng(seed);
  std::vector<TaskInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::size_t a = rng_below(rng, lexicon.size());
    std::size_t b = rng_below(rng, lexicon.size() - 1);
    if (b >= a) ++b;
    bool flip1 = rng() % 2 == 0;
    bool flip2 = rng() % 2 == 0;
    const std::string& n1 = lexicon[a];
    const std::string& n2 = lexicon[b];

    std::string s0 = "heads";
    std::string s1 = flip1 ? "tails" : "heads";
    std::string s2 = flip2 ? (s1 == "heads" ? "tails" : "heads") : s1;
    std::string ans = (s2 == "heads") ? "yes" : "no";

    auto action = [](const std::string& n, bool f) {
      return n + (f ? " flips the coin." : " does not flip the coin.");
    };
    auto clause = [](const std::string& n, bool f) {
      return n + (f ? " flips the coin, so it becomes " : " does not flip the coin, so it becomes ");
    };

    TaskInstance inst;
    Exemplar& ex = inst.exemplar;
    ex.id = "coinflip-" + std::to_string(seed) + "-" + std::to_string(i);
    ex.task = Task::coinflip;
    ex.question = "A coin is heads up. " + action(n1, flip1) + " " + action(n2, flip2) +
                  " Is the coin still heads up?";
    ex.answer = ans;
    ex.explanation.answer_line = "So the answer is " + ans + ".";
    ex.explanation.template_text = "The coin started {0} up. " + clause(n1, flip1) +
                                   "{1} up. " + clause(n2, flip2) + "{2} up.";
    ex.explanation.states = {{0, s0, "coin-state", false},
                             {1, s1, "coin-state", false},
                             {2, s2, "coin-state", false}};
    inst.flip_count = (flip1 ? 1 : 0) + (flip2 ? 1 : 0);
    out.push_back(std::move(inst));
  }
  return out;
}

// ---------------------------------------------------------------------------
// GSM equations

namespace {

const std::regex& equation_regex() {
  static const std::regex re(
      R"(\$?\d[\d,]*(?:\.\d+)?\s*[-+*/]\s*\$?\d[\d,]*(?:\.\d+)?\s*=\s*\$?\d[\d,]*(?:\.\d+)?)");
  return re;
}

struct Rational {
  long long num = 0;
  long long den = 1;
  void reduce() {
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(std::llabs(num), den);
    if (g > 1) { num /= g; den /= g; }
  }
};

Rational parse_number(std::string_view text) {
  std::string clean;
  for (char c : text) {
    if (c == '$' || c == ',' || std::isspace(static_cast<unsigned char>(c))) continue;
    clean.push_back(c);
  }
  Rational r;
  auto dot = clean.find('.');
  if (dot == std::string::npos) {
    r.num = std::stoll(clean);
    r.den = 1;
  } else {
    std::string whole = clean.substr(0, dot);
    std::string frac = clean.substr(dot + 1);
    r.num = std::stoll(whole + frac);
    r.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) r.den *= 10;
  }
  r.reduce();
  return r;
}

Rational apply_op(const Rational& a, char op, const Rational& b) {
  Rational r;
  switch (op) {
    case '+': r.num = a.num * b.den + b.num * a.den; r.den = a.den * b.den; break;
    case '-': r.num = a.num * b.den - b.num * a.den; r.den = a.den * b.den; break;
    case '*': r.num = a.num * b.num; r.den = a.den * b.den; break;
    case '/':
      if (b.num == 0) throw TraceInconsistency("division by zero in trace equation");
      r.num = a.num * b.den;
      r.den = a.den * b.num;
      break;
    default: throw Error(std::string("bad operator: ") + op);
  }
  r.reduce();
  return r;
}

// Exact when both sides reduce equal; otherwise compare at 9 significant
// digits (division may yield non-terminating decimals).
bool rationals_match(const Rational& a, const Rational& b) {
  if (a.num == b.num && a.den == b.den) return true;
  long double x = static_cast<long double>(a.num) / static_cast<long double>(a.den);
  long double y = static_cast<long double>(b.num) / static_cast<long double>(b.den);
  long double scale = std::max<long double>({std::fabs(x), std::fabs(y), 1.0L});
  return std::fabs(x - y) / scale < 5e-10L;
}

struct ParsedEquation {
  Rational lhs_a, lhs_b, rhs;
  char op = '+';
  std::string rhs_text;  // normalized (no $ or commas)
};

ParsedEquation parse_equation(const std::string& eq) {
  // corrupted traces may carry negative values, so operands allow a sign here
  static const std::regex parts(
      R"((-?\$?\d[\d,]*(?:\.\d+)?)\s*([-+*/])\s*(-?\$?\d[\d,]*(?:\.\d+)?)\s*=\s*(-?\$?\d[\d,]*(?:\.\d+)?))");
  std::smatch m;
  if (!std::regex_match(eq, m, parts)) throw OracleError("unparseable equation: " + eq);
  ParsedEquation p;
  p.lhs_a = parse_number(m[1].str());
  p.op = m[2].str()[0];
  p.lhs_b = parse_number(m[3].str());
  p.rhs = parse_number(m[4].str());
  p.rhs_text = normalize_answer(m[4].str(), Task::gsm);
  return p;
}

}  // namespace

std::vector<std::string> extract_equations(const std::string& text) {
  std::vector<std::string> out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), equation_regex());
  for (auto it = begin; it != std::sregex_iterator(); ++it) out.push_back(it->str());
  return out;
}

Exemplar gsm_from_raw(const std::string& id, const std::string& question,
                      const std::string& explanation_text, const std::string& answer) {
  std::size_t cue = util::rfind_ci(explanation_text, "answer is");
  if (cue == std::string::npos)
    throw Error("record " + id + " has no answer line");
  // answer line = the sentence containing the cue
  std::size_t line_start = explanation_text.rfind(". ", cue);
  line_start = (line_start == std::string::npos) ? 0 : line_start + 2;
  std::string body = util::trim(explanation_text.substr(0, line_start));
  std::string answer_line = util::trim(explanation_text.substr(line_start));

  Exemplar ex;
  ex.id = id;
  ex.question = question;
  ex.task = Task::gsm;
  ex.answer = normalize_answer(answer, Task::gsm);
  ex.explanation.answer_line = answer_line;

  // lift equations into trace states, slotting the template
  std::string tmpl;
  int slot = 0;
  std::size_t last = 0;
  auto begin = std::sregex_iterator(body.begin(), body.end(), equation_regex());
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    auto pos = static_cast<std::size_t>(it->position());
    tmpl += body.substr(last, pos - last);
    tmpl += "{" + std::to_string(slot) + "}";
    ex.explanation.states.push_back({slot, it->str(), "equation", false});
    ++slot;
    last = pos + static_cast<std::size_t>(it->length());
  }
  tmpl += body.substr(last);
  if (ex.explanation.states.empty())
    throw Error("record " + id + " has no equations to lift into a trace");
  ex.explanation.template_text = tmpl;
  validate_explanation(ex.explanation);
  return ex;
}

std::vector<Exemplar> load_gsm(const std::string& path, std::vector<std::string>& errors) {
  std::vector<Exemplar> out;
  std::size_t lineno = 0;
  for (const auto& line : util::read_lines(path)) {
    ++lineno;
    if (util::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": malformed JSON: " + e.what());
    }
    try {
      if (j.contains("states") && j.contains("template")) {
        out.push_back(exemplar_from_json(line));
      } else {
        out.push_back(gsm_from_raw(j.at("id").get<std::string>(),
                                   j.at("question").get<std::string>(),
                                   j.at("explanation_text").get<std::string>(),
                                   j.at("answer").get<std::string>()));
      }
    } catch (const std::exception& e) {
      errors.push_back(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

namespace {

std::string solve_letcat_question(const std::string& question) {
  auto open = question.find('"');
  auto close = question.rfind('"');
  if (open == std::string::npos || close <= open)
    throw OracleError("letcat question has no quoted word list: " + question);
  auto words = util::split_words(question.substr(open + 1, close - open - 1));
  if (words.empty()) throw OracleError("letcat question has no words");
  std::string out;
  for (const auto& w : words) out.push_back(last_letter(w));
  return out;
}

}  // namespace

std::vector<bool> coinflip_actions(const std::string& question) {
  std::vector<bool> actions;
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = question.find("flip", pos);
    if (hit == std::string::npos) break;
    std::size_t sentence_start = question.rfind(". ", hit);
    std::size_t start = sentence_start == std::string::npos ? 0 : sentence_start + 2;
    std::string before = question.substr(start, hit - start);
    bool negated = before.find("does not ") != std::string::npos ||
                   before.find("doesn't ") != std::string::npos;
    actions.push_back(!negated);
    pos = hit + 4;
  }
  if (actions.empty()) throw OracleError("coinflip question has no flip actions: " + question);
  return actions;
}

static std::string solve_coinflip_question(const std::string& question) {
  int flips = 0;
  for (bool f : coinflip_actions(question)) flips += f ? 1 : 0;
  return flips % 2 == 0 ? "yes" : "no";
}

std::string solve_gsm_trace(const std::vector<std::string>& equations) {
  if (equations.empty()) throw OracleError("gsm trace has no equations");
  std::string final_rhs;
  for (const auto& eq : equations) {
    ParsedEquation p = parse_equation(eq);
    Rational computed = apply_op(p.lhs_a, p.op, p.lhs_b);
    if (!rationals_match(computed, p.rhs))
      throw TraceInconsistency("equation is arithmetically false: " + eq);
    final_rhs = p.rhs_text;
  }
  return final_rhs;
}

std::string oracle_solve(const Query& q) {
  switch (q.task) {
    case Task::letcat: return solve_letcat_question(q.question);
    case Task::coinflip: return solve_coinflip_question(q.question);
    default:
      throw OracleError("oracle_solve needs a trace for task " + task_to_string(q.task));
  }
}

std::string oracle_solve(const Exemplar& ex) {
  if (ex.task == Task::gsm) {
    std::vector<std::string> eqs;
    for (const auto& st : ex.explanation.states)
      if (!st.masked) eqs.push_back(st.value);
    return solve_gsm_trace(eqs);
  }
  Query q{ex.id, ex.question, std::nullopt, ex.task};
  return oracle_solve(q);
}

void verify_trace(const Exemplar& ex) {
  switch (ex.task) {
    case Task::letcat: {
      auto open = ex.question.find('"');
      auto close = ex.question.rfind('"');
      if (open == std::string::npos || close <= open)
        throw OracleError("letcat question has no quoted word list");
      auto words = util::split_words(ex.question.substr(open + 1, close - open - 1));
      std::string cat;
      for (const auto& w : words) cat.push_back(last_letter(w));
      std::size_t word_i = 0, letter_i = 0, operand_i = 0, spaced_i = 0;
      for (const auto& st : ex.explanation.states) {
        std::string expected;
        if (st.role == "word") {
          if (word_i >= words.size()) throw TraceInconsistency("extra word state");
          expected = words[word_i++];
        } else if (st.role == "letter") {
          if (letter_i >= cat.size()) throw TraceInconsistency("extra letter state");
          expected = std::string(1, cat[letter_i++]);
        } else if (st.role == "operand") {
          if (operand_i >= cat.size()) throw TraceInconsistency("extra operand state");
          expected = std::string(1, cat[operand_i++]);
        } else if (st.role == "spaced") {
          if (spaced_i >= words.size()) throw TraceInconsistency("extra spaced state");
          expected = spaced(words[spaced_i++]);
        } else if (st.role == "concat") {
          expected = cat;
        } else {
          throw TraceInconsistency("unknown letcat state role: " + st.role);
        }
        if (!st.masked && st.value != expected)
          throw TraceInconsistency("letcat state " + std::to_string(st.index) +
                                   " is '" + st.value + "', expected '" + expected + "'");
      }
      break;
    }
    case Task::coinflip: {
      auto actions = coinflip_actions(ex.question);
      std::string cur = "heads";
      std::vector<std::string> expected = {cur};
      for (bool f : actions) {
        if (f) cur = (cur == "heads") ? "tails" : "heads";
        expected.push_back(cur);
      }
      if (ex.explanation.states.size() != expected.size())
        throw TraceInconsistency("coinflip trace length mismatch");
      for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& st = ex.explanation.states[i];
        if (!st.masked && st.value != expected[i])
          throw TraceInconsistency("coin state " + std::to_string(i) + " is '" +
                                   st.value + "', expected '" + expected[i] + "'");
      }
      break;
    }
    case Task::gsm: {
      for (const auto& st : ex.explanation.states) {
        if (st.masked) continue;
        ParsedEquation p = parse_equation(st.value);
        Rational computed = apply_op(p.lhs_a, p.op, p.lhs_b);
        if (!rationals_match(computed, p.rhs))
          throw TraceInconsistency("equation is arithmetically false: " + st.value);
      }
      break;
    }
    default:
      throw OracleError("verify_trace unsupported for task " + task_to_string(ex.task));
  }
}

}  // namespace forge::taskgen

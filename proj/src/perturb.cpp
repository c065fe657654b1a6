#include "forge/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "forge/taskgen.hpp"

namespace forge::perturb {

using util::Error;

const std::vector<std::string>& mask_token_choices() {
  static const std::vector<std::string> tokens = {"", "N/A", "[mask]", "?", "_"};
  return tokens;
}

namespace {

void check_targets(const Exemplar& ex, const std::vector<int>& targets) {
  for (int idx : targets) {
    if (idx < 0 || idx >= static_cast<int>(ex.explanation.states.size()))
      throw Error("target state index out of range: " + std::to_string(idx));
  }
}

std::string replace_answer_in_line(const std::string& line, const std::string& new_answer) {
  std::size_t cue = util::rfind_ci(line, "answer is");
  if (cue == std::string::npos) throw Error("answer line has no 'answer is' cue: " + line);
  std::size_t start = cue + 9;
  while (start < line.size() && line[start] == ' ') ++start;
  bool trailing_period = !line.empty() && line.back() == '.';
  return line.substr(0, start) + new_answer + (trailing_period ? "." : "");
}

std::string format_value(double v) {
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct EqParts {
  std::string left;   // text before '='
  std::string right;  // text after '='
};

EqParts split_equation(const std::string& text) {
  auto pos = text.rfind('=');
  if (pos == std::string::npos) throw Error("state is not an equation: " + text);
  return {text.substr(0, pos), text.substr(pos + 1)};
}

double parse_num(const std::string& s) {
  std::string clean;
  for (char c : s)
    if (c != '$' && c != ',' && !std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
  return std::stod(clean);
}

// "a OP b" -> value
double eval_lhs(const std::string& left, std::string* a_out = nullptr,
                char* op_out = nullptr, std::string* b_out = nullptr) {
  std::size_t op_pos = std::string::npos;
  char op = 0;
  // operator between two numbers; skip a leading sign
  for (std::size_t i = 1; i < left.size(); ++i) {
    char c = left[i];
    if ((c == '+' || c == '-' || c == '*' || c == '/') &&
        left.find_first_of("0123456789", i) != std::string::npos) {
      op_pos = i;
      op = c;
      break;
    }
  }
  if (op_pos == std::string::npos) throw Error("no operator in equation: " + left);
  std::string a = left.substr(0, op_pos);
  std::string b = left.substr(op_pos + 1);
  if (a_out) *a_out = a;
  if (op_out) *op_out = op;
  if (b_out) *b_out = b;
  double av = parse_num(a), bv = parse_num(b);
  switch (op) {
    case '+': return av + bv;
    case '-': return av - bv;
    case '*': return av * bv;
    case '/':
      if (bv == 0) throw Error("division by zero: " + left);
      return av / bv;
  }
  throw Error("bad operator");
}

char wrong_letter(char truth, std::mt19937_64& rng) {
  char c;
  do {
    c = static_cast<char>('a' + rng() % 26);
  } while (c == truth);
  return c;
}

}  // namespace

Exemplar mask_states(const Exemplar& ex, const PerturbSpec& spec) {
  if (spec.kind != Kind::mask) throw Error("mask_states called with non-mask spec");
  check_targets(ex, spec.target_indices);
  Exemplar out = ex;
  for (int idx : spec.target_indices) {
    auto& st = out.explanation.states[static_cast<std::size_t>(idx)];
    st.value = spec.mask_token;
    st.masked = true;
  }
  return out;
}

Exemplar apply_mask_preset(const Exemplar& ex, MaskPreset preset,
                           const std::string& mask_token) {
  PerturbSpec spec;
  spec.kind = Kind::mask;
  spec.mask_token = mask_token;
  switch (ex.task) {
    case Task::letcat: {
      for (const auto& st : ex.explanation.states) {
        bool first_stage = st.role == "letter";
        bool second_stage = st.role == "operand" || st.role == "concat";
        if ((preset == MaskPreset::mask1 && first_stage) ||
            (preset == MaskPreset::mask2 && second_stage))
          spec.target_indices.push_back(st.index);
      }
      return mask_states(ex, spec);
    }
    case Task::coinflip: {
      int n = static_cast<int>(ex.explanation.states.size());
      if (n < 3) throw Error("coinflip trace too short for mask preset");
      spec.target_indices.push_back(preset == MaskPreset::mask1 ? 1 : n - 1);
      return mask_states(ex, spec);
    }
    case Task::gsm: {
      if (preset == MaskPreset::mask2) {
        for (const auto& st : ex.explanation.states) spec.target_indices.push_back(st.index);
        return mask_states(ex, spec);
      }
      // mask1: blank every intermediate result wherever it occurs, keeping
      // the final answer value visible
      Exemplar out = ex;
      std::string final_answer = normalize_answer(ex.answer, Task::gsm);
      std::vector<std::string> intermediates;
      for (const auto& st : ex.explanation.states) {
        EqParts parts = split_equation(st.value);
        std::string rhs = normalize_answer(parts.right, Task::gsm);
        if (rhs != final_answer) intermediates.push_back(rhs);
      }
      for (auto& st : out.explanation.states) {
        std::string before = st.value;
        for (const auto& v : intermediates)
          st.value = util::replace_number_token(st.value, v, mask_token);
        if (st.value != before) st.masked = true;
      }
      return out;
    }
    default:
      throw Error("mask preset unsupported for task " + task_to_string(ex.task));
  }
}

Exemplar corrupt_states(const Exemplar& ex, const PerturbSpec& spec,
                        const CorruptorConfig& corruptor) {
  if (spec.kind != Kind::incorrect) throw Error("corrupt_states called with non-incorrect spec");
  check_targets(ex, spec.target_indices);
  std::mt19937_64 rng(spec.rng_seed);
  Exemplar out = ex;

  switch (ex.task) {
    case Task::letcat: {
      // default targets: the letter-extraction states
      std::vector<int> targets = spec.target_indices;
      if (targets.empty()) {
        for (const auto& st : ex.explanation.states)
          if (st.role == "letter") targets.push_back(st.index);
      }
      std::set<int> target_set(targets.begin(), targets.end());
      std::vector<std::string> letters;
      for (auto& st : out.explanation.states) {
        if (st.role != "letter") continue;
        if (target_set.count(st.index)) {
          auto ov = corruptor.overrides.find(st.index);
          std::string wrong = ov != corruptor.overrides.end()
                                  ? ov->second
                                  : std::string(1, wrong_letter(st.value[0], rng));
          if (wrong == st.value)
            throw Error("corruptor cannot produce a distinct wrong value for state " +
                        std::to_string(st.index));
          st.value = wrong;
        }
        letters.push_back(st.value);
      }
      if (letters.empty()) throw Error("letcat exemplar has no letter states to corrupt");
      // propagate into the concatenation stage
      std::size_t operand_i = 0;
      std::string cat;
      for (const auto& l : letters) cat += l;
      for (auto& st : out.explanation.states) {
        if (st.role == "operand" && operand_i < letters.size()) st.value = letters[operand_i++];
        if (st.role == "concat") st.value = cat;
      }
      out.answer = normalize_answer(cat, Task::letcat);
      out.explanation.answer_line = replace_answer_in_line(ex.explanation.answer_line, cat);
      return out;
    }
    case Task::coinflip: {
      std::vector<int> targets = spec.target_indices;
      if (targets.empty()) targets.push_back(1);
      std::set<int> target_set(targets.begin(), targets.end());
      auto actions = taskgen::coinflip_actions(ex.question);
      if (ex.explanation.states.size() != actions.size() + 1)
        throw Error("coinflip trace length does not match question actions");
      auto flip = [](const std::string& s) { return s == "heads" ? "tails" : "heads"; };
      std::string cur = "heads";
      if (target_set.count(0)) cur = flip(cur);
      out.explanation.states[0].value = cur;
      for (std::size_t i = 0; i < actions.size(); ++i) {
        std::string next = actions[i] ? flip(cur) : cur;
        if (target_set.count(static_cast<int>(i + 1))) next = flip(next);
        out.explanation.states[i + 1].value = next;
        cur = next;
      }
      std::string ans = (cur == "heads") ? "yes" : "no";
      out.answer = ans;
      out.explanation.answer_line = replace_answer_in_line(ex.explanation.answer_line, ans);
      return out;
    }
    case Task::gsm: {
      std::vector<int> targets = spec.target_indices;
      if (targets.empty()) targets.push_back(0);
      std::set<int> target_set(targets.begin(), targets.end());
      // normalized old value -> new text, applied to downstream operands
      std::map<std::string, std::string> subst;
      std::string final_value;
      for (auto& st : out.explanation.states) {
        EqParts parts = split_equation(st.value);
        std::string left = parts.left;
        for (const auto& [old_v, new_v] : subst)
          left = util::replace_number_token(left, old_v, new_v);
        double recomputed = eval_lhs(left);
        std::string stated = normalize_answer(parts.right, Task::gsm);
        std::string new_rhs;
        if (target_set.count(st.index)) {
          auto ov = corruptor.overrides.find(st.index);
          if (ov != corruptor.overrides.end()) {
            new_rhs = ov->second;
          } else {
            long long delta = static_cast<long long>(rng() % 31) - 15;
            if (delta == 0) delta = 7;
            new_rhs = format_value(recomputed + static_cast<double>(delta));
          }
          if (new_rhs == format_value(recomputed))
            throw Error("corruptor cannot produce a distinct wrong value for equation " +
                        std::to_string(st.index));
        } else {
          new_rhs = format_value(recomputed);
        }
        if (new_rhs != stated) subst[stated] = new_rhs;
        std::string right = parts.right;
        right = util::replace_number_token(right, stated, new_rhs);
        st.value = left + "=" + right;
        final_value = new_rhs;
      }
      if (final_value.empty()) throw Error("gsm exemplar has no equations to corrupt");
      out.answer = normalize_answer(final_value, Task::gsm);
      out.explanation.answer_line =
          replace_answer_in_line(ex.explanation.answer_line, final_value);
      return out;
    }
    default:
      throw Error("corrupt_states unsupported for task " + task_to_string(ex.task));
  }
}

Exemplar randomize_trace(const Exemplar& ex, const std::vector<Exemplar>& donor_pool,
                         uint64_t seed, bool replace_answer_line) {
  std::vector<const Exemplar*> donors;
  for (const auto& d : donor_pool)
    if (d.id != ex.id) donors.push_back(&d);
  if (donors.empty()) throw Error("donor pool has no exemplar with a different id");
  std::mt19937_64 rng(seed);
  const Exemplar& donor = *donors[rng() % donors.size()];
  Exemplar out = ex;
  out.explanation.states = donor.explanation.states;
  out.explanation.template_text = donor.explanation.template_text;
  if (replace_answer_line) {
    out.explanation.answer_line = donor.explanation.answer_line;
    out.answer = donor.answer;
  }
  return out;
}

Exemplar strip_nl(const Exemplar& ex) {
  const std::string& t = ex.explanation.template_text;
  // slots per template sentence, in order
  std::vector<std::vector<int>> sentences(1);
  std::size_t i = 0;
  while (i < t.size()) {
    if (t[i] == '{') {
      std::size_t j = i + 1;
      while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
      if (j > i + 1 && j < t.size() && t[j] == '}') {
        sentences.back().push_back(std::stoi(t.substr(i + 1, j - i - 1)));
        i = j + 1;
        continue;
      }
    }
    if (t[i] == '.' && (i + 1 == t.size() || t[i + 1] == ' ')) sentences.emplace_back();
    ++i;
  }
  std::size_t max_per_sentence = 0;
  for (const auto& s : sentences) max_per_sentence = std::max(max_per_sentence, s.size());

  auto slot = [](int idx) { return "{" + std::to_string(idx) + "}"; };
  std::string tmpl;
  if (ex.explanation.states.empty()) {
    tmpl = "";
  } else if (max_per_sentence <= 1) {
    // flat comma join
    for (std::size_t k = 0; k < ex.explanation.states.size(); ++k) {
      if (k) tmpl += ", ";
      tmpl += slot(static_cast<int>(k));
    }
    tmpl += ".";
  } else {
    // one output sentence per template sentence
    bool first = true;
    for (const auto& s : sentences) {
      if (s.empty()) continue;
      if (!first) tmpl += " ";
      first = false;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (k) tmpl += ", ";
        tmpl += slot(s[k]);
      }
      tmpl += ".";
    }
  }
  Exemplar out = ex;
  out.explanation.template_text = tmpl;
  validate_explanation(out.explanation);
  return out;
}

std::string operator_class_to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::add_only: return "add_only";
    case OperatorClass::mul_only: return "mul_only";
    case OperatorClass::mixed: return "mixed";
    case OperatorClass::other: return "other";
  }
  throw Error("bad operator class");
}

OperatorClass classify_operators(const Exemplar& ex) {
  std::set<char> ops;
  for (const auto& st : ex.explanation.states) {
    EqParts parts = split_equation(st.value);
    char op = 0;
    eval_lhs(parts.left, nullptr, &op, nullptr);
    ops.insert(op);
  }
  if (ops == std::set<char>{'+'}) return OperatorClass::add_only;
  if (ops == std::set<char>{'*'}) return OperatorClass::mul_only;
  if (ops == std::set<char>{'+', '*'}) return OperatorClass::mixed;
  return OperatorClass::other;
}

std::map<OperatorClass, std::vector<Exemplar>> partition_by_operators(
    const std::vector<Exemplar>& pool) {
  std::map<OperatorClass, std::vector<Exemplar>> out;
  out[OperatorClass::add_only];
  out[OperatorClass::mul_only];
  out[OperatorClass::mixed];
  out[OperatorClass::other];
  for (const auto& ex : pool) out[classify_operators(ex)].push_back(ex);
  return out;
}

std::vector<Exemplar> make_mixture_set(const std::vector<Exemplar>& set_a,
                                       const std::vector<Exemplar>& set_b, int shots,
                                       uint64_t seed) {
  if (shots <= 0 || shots % 2 != 0) throw Error("mixture shot count must be positive and even");
  std::size_t half = static_cast<std::size_t>(shots) / 2;
  if (set_a.size() < half || set_b.size() < half)
    throw Error("mixture source sets must each have at least shots/2 members");
  std::mt19937_64 rng(seed);
  auto draw = [&](const std::vector<Exemplar>& src) {
    std::vector<std::size_t> idx(src.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    // partial Fisher-Yates
    for (std::size_t k = 0; k < half; ++k) {
      std::size_t j = k + rng() % (idx.size() - k);
      std::swap(idx[k], idx[j]);
    }
    std::vector<Exemplar> picked;
    for (std::size_t k = 0; k < half; ++k) picked.push_back(src[idx[k]]);
    return picked;
  };
  auto from_a = draw(set_a);
  auto from_b = draw(set_b);
  std::vector<Exemplar> out;
  for (std::size_t k = 0; k < half; ++k) {
    out.push_back(from_a[k]);
    out.push_back(from_b[k]);
  }
  return out;
}

}  // namespace forge::perturb

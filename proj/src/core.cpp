#include "forge/core.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include <json.hpp>

namespace forge {

using util::Error;
using nlohmann::json;

Task task_from_string(const std::string& s) {
  if (s == "letcat") return Task::letcat;
  if (s == "coinflip") return Task::coinflip;
  if (s == "gsm") return Task::gsm;
  if (s == "ecqa") return Task::ecqa;
  if (s == "esnli") return Task::esnli;
  throw Error("unknown task: " + s);
}

std::string task_to_string(Task t) {
  switch (t) {
    case Task::letcat: return "letcat";
    case Task::coinflip: return "coinflip";
    case Task::gsm: return "gsm";
    case Task::ecqa: return "ecqa";
    case Task::esnli: return "esnli";
  }
  throw Error("bad task enum");
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "random") return Strategy::random_pick;
  if (s == "nn") return Strategy::nn;
  if (s == "mmr") return Strategy::mmr;
  throw Error("unknown strategy: " + s);
}

std::string strategy_to_string(Strategy s) {
  switch (s) {
    case Strategy::random_pick: return "random";
    case Strategy::nn: return "nn";
    case Strategy::mmr: return "mmr";
  }
  throw Error("bad strategy enum");
}

PromptOrder prompt_order_from_string(const std::string& s) {
  if (s == "selection_order") return PromptOrder::selection_order;
  if (s == "ascending_similarity") return PromptOrder::ascending_similarity;
  if (s == "descending_similarity") return PromptOrder::descending_similarity;
  if (s == "fixed_seeded_shuffle") return PromptOrder::fixed_seeded_shuffle;
  throw Error("unknown prompt order: " + s);
}

std::string prompt_order_to_string(PromptOrder o) {
  switch (o) {
    case PromptOrder::selection_order: return "selection_order";
    case PromptOrder::ascending_similarity: return "ascending_similarity";
    case PromptOrder::descending_similarity: return "descending_similarity";
    case PromptOrder::fixed_seeded_shuffle: return "fixed_seeded_shuffle";
  }
  throw Error("bad prompt order enum");
}

int count_slots(const std::string& t) {
  int n = 0;
  for (std::size_t i = 0; i + 2 < t.size() + 1 && i < t.size(); ++i) {
    if (t[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
    if (j > i + 1 && j < t.size() && t[j] == '}') ++n;
  }
  return n;
}

void validate_explanation(const Explanation& e) {
  for (std::size_t i = 0; i < e.states.size(); ++i) {
    if (e.states[i].index != static_cast<int>(i))
      throw Error("trace state indices must be contiguous from 0");
    if (e.states[i].value.empty() && !e.states[i].masked)
      throw Error("unmasked trace state has empty value (index " + std::to_string(i) + ")");
  }
  std::set<int> referenced;
  const std::string& t = e.template_text;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
    if (j > i + 1 && j < t.size() && t[j] == '}') {
      int idx = std::stoi(t.substr(i + 1, j - i - 1));
      if (idx < 0 || idx >= static_cast<int>(e.states.size()))
        throw Error("template slot {" + std::to_string(idx) + "} has no trace state");
      referenced.insert(idx);
    }
  }
  if (referenced.size() != e.states.size())
    throw Error("template slot count != state count");
}

std::string render_explanation(const Explanation& e) {
  validate_explanation(e);
  const std::string& t = e.template_text;
  std::string out;
  out.reserve(t.size() + 32);
  std::size_t i = 0;
  while (i < t.size()) {
    if (t[i] == '{') {
      std::size_t j = i + 1;
      while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
      if (j > i + 1 && j < t.size() && t[j] == '}') {
        int idx = std::stoi(t.substr(i + 1, j - i - 1));
        if (idx < 0 || idx >= static_cast<int>(e.states.size()))
          throw Error("template slot {" + std::to_string(idx) + "} out of range");
        out += e.states[static_cast<std::size_t>(idx)].value;
        i = j + 1;
        continue;
      }
    }
    out.push_back(t[i]);
    ++i;
  }
  if (!out.empty()) out += " ";
  out += e.answer_line;
  return out;
}

std::string normalize_answer(const std::string& raw, Task task) {
  std::string s = util::trim(raw);
  switch (task) {
    case Task::gsm: {
      std::string out;
      for (char c : s) {
        if (c == ',' || c == '$') continue;
        out.push_back(c);
      }
      while (!out.empty() && out.back() == '.') {
        // keep a decimal point with digits after it; strip a sentence period
        out.pop_back();
      }
      return util::trim(out);
    }
    case Task::ecqa: {
      for (char c : s) {
        if (std::isalpha(static_cast<unsigned char>(c)))
          return std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
      return "";
    }
    default: {
      std::string out = util::to_lower(s);
      while (!out.empty() && (out.back() == '.' || out.back() == '"')) out.pop_back();
      return util::trim(out);
    }
  }
}

static json explanation_fields(const Exemplar& ex) {
  json states = json::array();
  for (const auto& st : ex.explanation.states) {
    states.push_back({{"index", st.index},
                      {"value", st.value},
                      {"role", st.role},
                      {"masked", st.masked}});
  }
  return states;
}

std::string exemplar_to_json(const Exemplar& ex) {
  json j = {{"id", ex.id},
            {"question", ex.question},
            {"states", explanation_fields(ex)},
            {"template", ex.explanation.template_text},
            {"answer_line", ex.explanation.answer_line},
            {"answer", ex.answer},
            {"task", task_to_string(ex.task)}};
  return j.dump();
}

Exemplar exemplar_from_json(const std::string& line) {
  json j = json::parse(line);
  Exemplar ex;
  ex.id = j.at("id").get<std::string>();
  ex.question = j.at("question").get<std::string>();
  ex.explanation.template_text = j.at("template").get<std::string>();
  ex.explanation.answer_line = j.at("answer_line").get<std::string>();
  ex.answer = j.at("answer").get<std::string>();
  ex.task = task_from_string(j.at("task").get<std::string>());
  for (const auto& s : j.at("states")) {
    TraceState st;
    st.index = s.at("index").get<int>();
    st.value = s.at("value").get<std::string>();
    st.role = s.value("role", "");
    st.masked = s.value("masked", false);
    ex.explanation.states.push_back(std::move(st));
  }
  validate_explanation(ex.explanation);
  return ex;
}

std::string query_to_json(const Query& q) {
  json j = {{"id", q.id},
            {"question", q.question},
            {"task", task_to_string(q.task)}};
  if (q.gold_answer) j["gold_answer"] = *q.gold_answer;
  return j.dump();
}

Query query_from_json(const std::string& line) {
  json j = json::parse(line);
  Query q;
  q.id = j.at("id").get<std::string>();
  q.question = j.at("question").get<std::string>();
  if (q.question.empty()) throw Error("query question is empty: " + q.id);
  q.task = task_from_string(j.at("task").get<std::string>());
  if (j.contains("gold_answer"))
    q.gold_answer = j.at("gold_answer").get<std::string>();
  else if (j.contains("answer"))  // exemplar files double as query sets
    q.gold_answer = j.at("answer").get<std::string>();
  return q;
}

std::vector<Exemplar> load_pool(const std::string& path) {
  std::vector<Exemplar> pool;
  std::size_t lineno = 0;
  for (const auto& line : util::read_lines(path)) {
    ++lineno;
    if (util::trim(line).empty()) continue;
    try {
      pool.push_back(exemplar_from_json(line));
    } catch (const std::exception& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return pool;
}

void save_pool(const std::string& path, const std::vector<Exemplar>& pool) {
  std::string out;
  for (const auto& ex : pool) {
    out += exemplar_to_json(ex);
    out += "\n";
  }
  util::write_file_atomic(path, out);
}

std::vector<Query> load_queries(const std::string& path) {
  std::vector<Query> qs;
  std::size_t lineno = 0;
  for (const auto& line : util::read_lines(path)) {
    ++lineno;
    if (util::trim(line).empty()) continue;
    try {
      qs.push_back(query_from_json(line));
    } catch (const std::exception& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return qs;
}

void save_queries(const std::string& path, const std::vector<Query>& queries) {
  std::string out;
  for (const auto& q : queries) {
    out += query_to_json(q);
    out += "\n";
  }
  util::write_file_atomic(path, out);
}

}  // namespace forge

#include "hopchain/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include <json.hpp>

#include "hopchain/error.hpp"
#include "io_util.hpp"

namespace hopchain {

namespace {

using ordered_json = nlohmann::ordered_json;

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Decodes one UTF-8 code point starting at `i`; advances `i` past it.
// Malformed bytes decode as a single-byte replacement (treated as a
// separator).
uint32_t next_code_point(std::string_view s, size_t& i, size_t& len) {
  const auto byte = static_cast<unsigned char>(s[i]);
  size_t n = 1;
  uint32_t cp = byte;
  if (byte >= 0xF0)
    n = 4, cp = byte & 0x07u;
  else if (byte >= 0xE0)
    n = 3, cp = byte & 0x0Fu;
  else if (byte >= 0xC0)
    n = 2, cp = byte & 0x1Fu;
  else if (byte >= 0x80)
    n = 1, cp = 0xFFFD;  // stray continuation byte
  if (n > 1) {
    if (i + n > s.size()) {
      i += 1;
      len = 1;
      return 0xFFFD;
    }
    for (size_t k = 1; k < n; ++k) {
      const auto cont = static_cast<unsigned char>(s[i + k]);
      if ((cont & 0xC0u) != 0x80u) {
        i += 1;
        len = 1;
        return 0xFFFD;
      }
      cp = (cp << 6) | (cont & 0x3Fu);
    }
  }
  i += n;
  len = n;
  return cp;
}

bool separator_code_point(uint32_t cp) {
  if (cp < 0x80) return !ascii_alnum(static_cast<char>(cp));
  if (cp >= 0x00A0 && cp <= 0x00BF) return true;  // Latin-1 punctuation and symbols
  if (cp >= 0x2000 && cp <= 0x206F) return true;  // general punctuation
  if (cp == 0xFFFD) return true;
  return false;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  size_t i = 0;
  while (i < text.size()) {
    const size_t start = i;
    size_t len = 0;
    const uint32_t cp = next_code_point(text, i, len);
    if (separator_code_point(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    if (cp < 0x80) {
      current.push_back(ascii_lower(static_cast<char>(cp)));
    } else {
      current.append(text.substr(start, len));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

void Corpus::add(Passage p) {
  auto [it, inserted] = by_id_.emplace(p.id, passages_.size());
  if (!inserted) raise(errc::invalid_argument, "duplicate id: " + p.id);
  passages_.push_back(std::move(p));
}

const Passage& Corpus::at(const std::string& id) const {
  const Passage* p = find(id);
  if (!p) raise(errc::invalid_argument, "unknown passage id: " + id);
  return *p;
}

const Passage* Corpus::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &passages_[it->second];
}

namespace {

nlohmann::json parse_line(const std::string& path, size_t line_no, const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    raise(errc::parse, path + ":" + std::to_string(line_no) + ": malformed JSON object");
  return j;
}

std::string required_string(const nlohmann::json& j, const char* key, const std::string& path,
                            size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    raise(errc::parse, path + ":" + std::to_string(line_no) + ": missing string field \"" +
                           key + "\"");
  return it->get<std::string>();
}

}  // namespace

Corpus load_corpus(const std::string& path) {
  Corpus corpus;
  io::for_each_line(path, [&](size_t line_no, const std::string& line) {
    const auto j = parse_line(path, line_no, line);
    Passage p;
    p.id = required_string(j, "id", path, line_no);
    p.title = required_string(j, "title", path, line_no);
    p.text = required_string(j, "text", path, line_no);
    p.tokens = tokenize(p.title + " " + p.text);
    try {
      corpus.add(std::move(p));
    } catch (const Error& e) {
      raise(errc::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return corpus;
}

std::vector<QuestionRecord> load_questions(const std::string& path) {
  std::vector<QuestionRecord> questions;
  std::unordered_set<std::string> seen;
  io::for_each_line(path, [&](size_t line_no, const std::string& line) {
    const auto j = parse_line(path, line_no, line);
    QuestionRecord q;
    q.id = required_string(j, "id", path, line_no);
    q.text = required_string(j, "question", path, line_no);
    q.answer = required_string(j, "answer", path, line_no);
    if (auto it = j.find("gold_ids"); it != j.end() && !it->is_null()) {
      if (!it->is_array())
        raise(errc::parse, path + ":" + std::to_string(line_no) + ": gold_ids must be an array");
      for (const auto& g : *it) {
        if (!g.is_string())
          raise(errc::parse,
                path + ":" + std::to_string(line_no) + ": gold_ids entries must be strings");
        q.gold_ids.push_back(g.get<std::string>());
      }
    }
    if (auto it = j.find("type"); it != j.end() && it->is_string()) q.qtype = it->get<std::string>();
    if (!seen.insert(q.id).second)
      raise(errc::parse, path + ":" + std::to_string(line_no) + ": duplicate id: " + q.id);
    questions.push_back(std::move(q));
  });
  return questions;
}

void write_corpus_jsonl(const Corpus& corpus, const std::string& path) {
  auto out = io::open_out(path);
  for (const Passage& p : corpus.passages()) {
    ordered_json j{{"id", p.id}, {"title", p.title}, {"text", p.text}};
    out << j.dump() << "\n";
  }
}

void write_questions_jsonl(const std::vector<QuestionRecord>& questions, const std::string& path) {
  auto out = io::open_out(path);
  for (const QuestionRecord& q : questions) {
    ordered_json j{{"id", q.id}, {"question", q.text}, {"answer", q.answer}};
    if (!q.gold_ids.empty()) j["gold_ids"] = q.gold_ids;
    if (!q.qtype.empty()) j["type"] = q.qtype;
    out << j.dump() << "\n";
  }
}

void validate_questions(const Corpus& corpus, const std::vector<QuestionRecord>& questions) {
  for (const QuestionRecord& q : questions) {
    if (!q.supervised()) continue;
    if (q.gold_ids.size() != 2)
      raise(errc::invalid_argument,
            "question " + q.id + ": expected exactly 2 gold ids, got " +
                std::to_string(q.gold_ids.size()));
    if (q.gold_ids[0] == q.gold_ids[1])
      raise(errc::invalid_argument, "question " + q.id + ": repeated gold id " + q.gold_ids[0]);
    for (const std::string& g : q.gold_ids)
      if (!corpus.find(g))
        raise(errc::invalid_argument, "question " + q.id + ": gold id not in corpus: " + g);
  }
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  const auto eq = [](char a, char b) { return ascii_lower(a) == ascii_lower(b); };
  const auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(), eq);
  return it != haystack.end();
}

std::string passage_match_text(const Passage& p) { return p.title + " " + p.text; }

namespace {

size_t distinct_token_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::unordered_set<std::string> sa(a.begin(), a.end());
  std::unordered_set<std::string> sb(b.begin(), b.end());
  size_t n = 0;
  for (const auto& t : sa) n += sb.count(t);
  return n;
}

}  // namespace

InferredChain infer_hop_order(const QuestionRecord& q, const Corpus& corpus) {
  if (q.gold_ids.size() != 2)
    raise(errc::invalid_argument, "question " + q.id + ": hop order needs exactly 2 gold ids");
  if (q.answer.empty())
    raise(errc::invalid_argument, "question " + q.id + ": empty answer");

  const Passage* a = &corpus.at(q.gold_ids[0]);
  const Passage* b = &corpus.at(q.gold_ids[1]);
  if (a->id > b->id) std::swap(a, b);  // a carries the smaller id

  const bool a_has = contains_ci(passage_match_text(*a), q.answer);
  const bool b_has = contains_ci(passage_match_text(*b), q.answer);

  const auto make = [&](const Passage* first, const Passage* second, bool flagged) {
    return InferredChain{OrderedChain{{first->id, second->id}}, flagged};
  };
  const auto overlap_order = [&](bool flagged) {
    // Larger distinct-token overlap with the question goes first; ties fall
    // back to ascending id (a already holds the smaller id).
    const auto q_tokens = tokenize(q.text);
    const size_t oa = distinct_token_overlap(q_tokens, a->tokens);
    const size_t ob = distinct_token_overlap(q_tokens, b->tokens);
    return ob > oa ? make(b, a, flagged) : make(a, b, flagged);
  };

  if (a_has != b_has) {
    // The answer-bearing passage is the second hop.
    return a_has ? make(b, a, false) : make(a, b, false);
  }
  if (!a_has && !b_has) return overlap_order(true);

  // Both contain the answer: a passage whose title is mentioned in the
  // question becomes the first hop.
  const bool a_title = contains_ci(q.text, a->title);
  const bool b_title = contains_ci(q.text, b->title);
  if (a_title != b_title) return a_title ? make(a, b, false) : make(b, a, false);
  return overlap_order(false);
}

}  // namespace hopchain

namespace hopchain::io {

void for_each_line(const std::string& path,
                   const std::function<void(size_t, const std::string&)>& fn) {
  auto in = open_in(path);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(line_no, line);
  }
}

}  // namespace hopchain::io

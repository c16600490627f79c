#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hopchain {

struct Passage {
  std::string id;
  std::string title;
  std::string text;
  // tokenize(title + " " + text), cached at load time.
  std::vector<std::string> tokens;
};

struct QuestionRecord {
  std::string id;
  std::string text;
  std::string answer;
  // Unordered gold evidence set; empty for test records, exactly two ids
  // for supervised records.
  std::vector<std::string> gold_ids;
  std::string qtype;

  bool supervised() const { return !gold_ids.empty(); }
};

// Ordered evidence chain; ids must not repeat.
struct OrderedChain {
  std::vector<std::string> hops;
  bool operator==(const OrderedChain&) const = default;
};

class Corpus {
 public:
  // Throws errc::invalid_argument on duplicate id.
  void add(Passage p);

  const Passage& at(const std::string& id) const;  // throws if absent
  const Passage* find(const std::string& id) const;
  const std::vector<Passage>& passages() const { return passages_; }
  size_t size() const { return passages_.size(); }
  bool empty() const { return passages_.empty(); }

 private:
  std::vector<Passage> passages_;
  std::unordered_map<std::string, size_t> by_id_;
};

// Lowercases ASCII letters and splits on runs of non-alphanumeric code
// points. The input is treated as UTF-8: code points outside ASCII count as
// word characters, except the Latin-1 punctuation/symbol block
// (U+00A0..U+00BF) and the general punctuation block (U+2000..U+206F), which
// split like ASCII punctuation. Deterministic, locale-independent.
std::vector<std::string> tokenize(std::string_view text);

// JSONL loaders. One UTF-8 JSON object per line; malformed lines and
// duplicate ids are hard errors naming the offending line.
Corpus load_corpus(const std::string& path);
std::vector<QuestionRecord> load_questions(const std::string& path);

void write_corpus_jsonl(const Corpus& corpus, const std::string& path);
void write_questions_jsonl(const std::vector<QuestionRecord>& questions, const std::string& path);

// Checks every supervised record: |gold_ids| == 2, no repeated id, and all
// gold ids resolve against the corpus.
void validate_questions(const Corpus& corpus, const std::vector<QuestionRecord>& questions);

// ASCII-case-insensitive substring test; an empty needle never matches.
bool contains_ci(std::string_view haystack, std::string_view needle);

// Text used for answer matching: title + " " + text.
std::string passage_match_text(const Passage& p);

struct InferredChain {
  OrderedChain chain;
  // Set when the answer string was found in neither gold passage and the
  // token-overlap fallback decided the order.
  bool flagged = false;
};

// Infers hop order for a supervised record. The passage containing the
// answer (case-insensitive substring of title + text) is hop 2; if both
// contain it, the passage whose title occurs in the question is hop 1;
// remaining ties go to the passage with the larger distinct-token overlap
// with the question, then to the ascending id.
InferredChain infer_hop_order(const QuestionRecord& q, const Corpus& corpus);

}  // namespace hopchain

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hopchain/corpus.hpp"

namespace hopchain {

// Synthetic two-hop corpora with controllable lexical overlap. Each chain
// gets an entity token (in the question and the hop-1 passage), a bridge
// token (linking hop 1 to hop 2) and an answer token (hop 2 only), plus
// distractor passages that share surface tokens with the question but not
// the bridge. bridge_overlap is the fraction of hop-2 filler tokens shared
// with the question; at 0 the hop-2 passage has no token in common with the
// question, so retrieving it requires composing hop-1 content.
struct SynthConfig {
  int64_t num_chains = 200;
  int64_t distractors_per_chain = 3;
  int64_t vocab_size = 500;
  int64_t tokens_per_passage = 12;
  double bridge_overlap = 0.0;
  uint64_t seed = 7;
};

struct SynthData {
  Corpus corpus;
  std::vector<QuestionRecord> questions;
};

// Deterministic under seed. Validates feasibility and, when bridge_overlap
// is 0, checks at generation time that a tf-idf search on each bare question
// never ranks the gold hop-2 passage in its top 10.
SynthData generate(const SynthConfig& cfg);

// generate() + JSONL emission in the corpus module's formats.
void generate_files(const SynthConfig& cfg, const std::string& corpus_path,
                    const std::string& questions_path);

SynthConfig synth_config_from_json_text(const std::string& json_text);
std::string synth_config_to_json_text(const SynthConfig& cfg);

}  // namespace hopchain

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hopchain/corpus.hpp"
#include "hopchain/encoder.hpp"
#include "hopchain/vindex.hpp"

namespace hopchain {

// raw_sum:          S_t = S_{t-1} + f(q_t, p_t), i.e. the log of a product of
//                   exponentiated similarities.
// per_step_softmax: S_t = S_{t-1} + log softmax(f | candidate extensions of
//                   the same prefix at step t), the normalized-product form.
enum class ScoreMode { raw_sum, per_step_softmax };

struct ScoredChain {
  std::vector<std::string> hops;
  std::vector<double> step_scores;  // raw per-hop similarities in both modes
  double score = 0.0;
};

struct BeamConfig {
  int64_t beam_size = 10;
  int64_t per_step_k = 0;  // 0 means max(beam_size, 10)
  int64_t chain_len = 2;
  ScoreMode score_mode = ScoreMode::raw_sum;
  int64_t return_top = 10;
  size_t max_len = 256;  // composed-query truncation

  int64_t effective_per_step_k() const {
    return per_step_k > 0 ? per_step_k : (beam_size > 10 ? beam_size : 10);
  }
};

ScoreMode score_mode_from_string(std::string_view name);
std::string_view score_mode_name(ScoreMode mode);

// Beam search over the index. Step 1 turns the top per_step_k hits for the
// bare question into single-hop chains; each later step re-queries the index
// with the question composed with the chain's own hops, skips extensions
// that repeat a passage in that chain, scores them under score_mode (softmax
// normalizes over the surviving extensions of the same prefix), pools all
// extensions, merges identical hop sequences keeping the best score, and
// keeps the beam_size best. Ordering everywhere is score descending, then
// lexicographic hop ids ascending. Returns the top return_top chains;
// beam_size 1 is greedy retrieval.
std::vector<ScoredChain> retrieve_chains(std::span<const std::string> question_tokens,
                                         const EncoderParams& params, const VectorIndex& index,
                                         const Corpus& corpus, const BeamConfig& cfg);

// One scoring step: raw_sum adds the similarity; per_step_softmax adds the
// log of the similarity's softmax within step_candidates (which must contain
// it).
double chain_score_update(double prev_score, double sim, std::span<const double> step_candidates,
                          ScoreMode mode);

struct RunChains {
  std::string question_id;
  std::vector<ScoredChain> chains;  // sorted best-first
};

// Retrieval over a question set, in input order.
std::vector<RunChains> retrieve_run(const std::vector<QuestionRecord>& questions,
                                    const EncoderParams& params, const VectorIndex& index,
                                    const Corpus& corpus, const BeamConfig& cfg);

// Run file: JSONL, one {"question_id", "chains"} object per question, chains
// best-first. The reader validates structure only, not chain invariants, so
// externally produced runs can be evaluated as-is.
void write_run_jsonl(std::span<const RunChains> run, const std::string& path);
std::vector<RunChains> read_run_jsonl(const std::string& path);

// Parses {"beam_size", "per_step_k", "chain_len", "score_mode",
// "return_top", "max_len"}; missing keys keep defaults.
BeamConfig beam_config_from_json_text(const std::string& json_text);
std::string beam_config_to_json_text(const BeamConfig& cfg);

}  // namespace hopchain

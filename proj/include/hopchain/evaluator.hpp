#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hopchain/beamsearch.hpp"
#include "hopchain/corpus.hpp"
#include "hopchain/encoder.hpp"

namespace hopchain {

struct PerQuestionMetrics {
  std::string question_id;
  double ar = 0.0;
  double pr = 0.0;
  double p_em = 0.0;
  double em = 0.0;
};

// Always em <= p_em <= pr; all means over the same question set.
struct RetrievalMetrics {
  double ar = 0.0;
  double pr = 0.0;
  double p_em = 0.0;
  double em = 0.0;
  int64_t n = 0;
  std::vector<PerQuestionMetrics> per_question;
};

// Over the union of passages in each question's top `top_chains` chains:
//   AR   — the answer is a case-insensitive substring of a retrieved
//          passage's title+text;
//   PR   — at least one gold passage retrieved;
//   P EM — both gold passages retrieved;
//   EM   — both gold passages inside the single top chain (order-free).
// Errors: a question missing from the run, non-supervised questions, or a
// top chain whose length is not 2.
RetrievalMetrics evaluate_run(std::span<const RunChains> run,
                              const std::vector<QuestionRecord>& questions, const Corpus& corpus,
                              int64_t top_chains = 10);

std::string metrics_to_json(const RetrievalMetrics& m);
void write_per_question_csv(const RetrievalMetrics& m, const std::string& path);

struct HopReport {
  // Fraction of questions with the gold hop-1 passage in position 1 (resp.
  // hop-2 in position 2) of any top chain.
  double hop1_accuracy = 0.0;
  double hop2_accuracy = 0.0;
  // Mean Jaccard overlap between the position-1 and position-2 passage sets
  // of the top chains.
  double mean_overlap = 0.0;
  int64_t n = 0;
  int64_t flagged = 0;  // hop order fell back to token overlap
};

HopReport hop_report(std::span<const RunChains> run, const std::vector<QuestionRecord>& questions,
                     const Corpus& corpus, int64_t top_chains = 10);

std::string hop_report_to_json(const HopReport& r);

// TSV of labeled vectors: header, then rows [label, id, v0..v{d-1}] with
// labels Q1 (bare question), Q2 (question composed with gold hop 1), P1/P2
// (gold passages), and NEG (every passage that is gold for no question).
// `hops` holds each question's inferred gold order, parallel to `questions`.
void export_embeddings(const EncoderParams& params, const Corpus& corpus,
                       const std::vector<QuestionRecord>& questions,
                       std::span<const OrderedChain> hops, const std::string& path,
                       size_t max_len = 256);

}  // namespace hopchain

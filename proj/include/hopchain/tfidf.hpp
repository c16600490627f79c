#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hopchain/beamsearch.hpp"
#include "hopchain/corpus.hpp"
#include "hopchain/vindex.hpp"

namespace hopchain {

// Smoothed tf-idf with cosine scoring: w(t, p) = tf(t, p) * ln((1+N)/(1+df(t))),
// document vectors L2-normalized. Immutable after fit.
struct TfIdfModel {
  int64_t doc_count = 0;
  std::vector<std::string> ids;  // corpus order
  std::unordered_map<std::string, int64_t> df;
  // term -> (doc position, normalized weight), doc positions ascending
  std::unordered_map<std::string, std::vector<std::pair<int32_t, double>>> postings;
  std::vector<double> doc_norms;  // pre-normalization norms; 0 for all-zero docs

  double idf(const std::string& term) const;
  bool empty() const { return doc_count == 0; }
};

TfIdfModel fit_tfidf(const Corpus& corpus);

// Cosine between the query tf-idf vector and each document vector, over all
// documents (out-of-vocabulary query terms contribute nothing). Sort and
// tie-break contract identical to vindex search: score descending, id
// ascending; returns min(k, N) hits. Scores lie in [0, 1].
std::vector<SearchHit> search_tfidf(const TfIdfModel& model,
                                    std::span<const std::string> query_tokens, int64_t k);

// Term-matching chain baseline: rank passages once for the bare question and
// pair consecutive hits, chain i = (hit_i, hit_i+1), scored by the sum of the
// two cosines. No query composition happens between hops.
std::vector<ScoredChain> tfidf_chains(const TfIdfModel& model,
                                      std::span<const std::string> query_tokens,
                                      int64_t return_top);

std::vector<RunChains> tfidf_run(const TfIdfModel& model,
                                 const std::vector<QuestionRecord>& questions, int64_t return_top);

// Binary checkpoint framed like the vector index (magic, format version,
// counts, tables); round-trips the full model.
void save_tfidf(const TfIdfModel& model, const std::string& path);
TfIdfModel load_tfidf(const std::string& path);

}  // namespace hopchain

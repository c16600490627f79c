#include "hopchain/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hopchain/error.hpp"
#include "io_util.hpp"

namespace hopchain {

double TfIdfModel::idf(const std::string& term) const {
  const auto it = df.find(term);
  const int64_t n = it == df.end() ? 0 : it->second;
  return std::log(static_cast<double>(1 + doc_count) / static_cast<double>(1 + n));
}

TfIdfModel fit_tfidf(const Corpus& corpus) {
  if (corpus.empty()) raise(errc::invalid_argument, "cannot fit tf-idf on an empty corpus");
  TfIdfModel model;
  model.doc_count = static_cast<int64_t>(corpus.size());

  // Sorted term maps keep posting construction and float sums order-stable.
  std::vector<std::map<std::string, double>> tf(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    const Passage& p = corpus.passages()[i];
    model.ids.push_back(p.id);
    for (const auto& t : p.tokens) tf[i][t] += 1.0;
    for (const auto& [term, count] : tf[i]) model.df[term] += 1;
  }

  model.doc_norms.resize(corpus.size(), 0.0);
  for (size_t i = 0; i < corpus.size(); ++i) {
    double sq = 0.0;
    for (const auto& [term, count] : tf[i]) {
      const double w = count * model.idf(term);
      sq += w * w;
    }
    model.doc_norms[i] = std::sqrt(sq);
    if (model.doc_norms[i] == 0.0) continue;  // degenerate doc (all idf zero)
    for (const auto& [term, count] : tf[i]) {
      const double w = count * model.idf(term);
      if (w != 0.0)
        model.postings[term].push_back({static_cast<int32_t>(i), w / model.doc_norms[i]});
    }
  }
  return model;
}

std::vector<SearchHit> search_tfidf(const TfIdfModel& model,
                                    std::span<const std::string> query_tokens, int64_t k) {
  if (model.empty()) raise(errc::invalid_argument, "search over an empty tf-idf model");
  if (k < 1) raise(errc::invalid_argument, "search k must be >= 1");

  std::map<std::string, double> qtf;
  for (const auto& t : query_tokens) qtf[t] += 1.0;
  double q_sq = 0.0;
  for (const auto& [term, count] : qtf) {
    const double w = count * model.idf(term);
    q_sq += w * w;  // out-of-vocabulary terms still contribute to the norm
  }

  const size_t n = static_cast<size_t>(model.doc_count);
  std::vector<double> scores(n, 0.0);
  if (q_sq > 0.0) {
    const double q_norm = std::sqrt(q_sq);
    for (const auto& [term, count] : qtf) {
      const auto it = model.postings.find(term);
      if (it == model.postings.end()) continue;
      const double qw = count * model.idf(term) / q_norm;
      for (const auto& [doc, dw] : it->second) scores[static_cast<size_t>(doc)] += qw * dw;
    }
  }

  std::vector<uint32_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<uint32_t>(i);
  const size_t take = std::min(static_cast<size_t>(k), n);
  const auto better = [&](uint32_t a, uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return model.ids[a] < model.ids[b];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<ptrdiff_t>(take), order.end(),
                    better);

  std::vector<SearchHit> hits;
  hits.reserve(take);
  for (size_t i = 0; i < take; ++i) {
    // cosine of non-negative vectors; clip float overshoot to the contract
    const double s = std::min(1.0, std::max(0.0, scores[order[i]]));
    hits.push_back({model.ids[order[i]], s});
  }
  return hits;
}

std::vector<ScoredChain> tfidf_chains(const TfIdfModel& model,
                                      std::span<const std::string> query_tokens,
                                      int64_t return_top) {
  if (return_top < 1) raise(errc::invalid_argument, "return_top must be >= 1");
  if (model.doc_count < 2)
    raise(errc::infeasible, "tf-idf chain baseline needs at least 2 passages");
  const auto hits = search_tfidf(model, query_tokens, return_top + 1);
  std::vector<ScoredChain> chains;
  for (size_t i = 0; i + 1 < hits.size() && chains.size() < static_cast<size_t>(return_top);
       ++i) {
    ScoredChain c;
    c.hops = {hits[i].id, hits[i + 1].id};
    c.step_scores = {hits[i].score, hits[i + 1].score};
    c.score = hits[i].score + hits[i + 1].score;
    chains.push_back(std::move(c));
  }
  return chains;
}

std::vector<RunChains> tfidf_run(const TfIdfModel& model,
                                 const std::vector<QuestionRecord>& questions,
                                 int64_t return_top) {
  std::vector<RunChains> run;
  run.reserve(questions.size());
  for (const auto& q : questions)
    run.push_back({q.id, tfidf_chains(model, tokenize(q.text), return_top)});
  return run;
}

namespace {
constexpr uint32_t kTfIdfMagic = 0x48435446;  // "HCTF"
constexpr uint32_t kTfIdfVersion = 1;
}  // namespace

void save_tfidf(const TfIdfModel& model, const std::string& path) {
  auto out = io::open_out(path, /*binary=*/true);
  io::write_pod(out, kTfIdfMagic);
  io::write_pod(out, kTfIdfVersion);
  io::write_pod<int64_t>(out, model.doc_count);
  for (const auto& id : model.ids) io::write_string(out, id);
  io::write_doubles(out, model.doc_norms);

  // Terms serialized in sorted order so files are deterministic.
  std::vector<std::string> terms;
  terms.reserve(model.df.size());
  for (const auto& [term, count] : model.df) terms.push_back(term);
  std::sort(terms.begin(), terms.end());
  io::write_pod<uint64_t>(out, terms.size());
  for (const auto& term : terms) {
    io::write_string(out, term);
    io::write_pod<int64_t>(out, model.df.at(term));
    const auto it = model.postings.find(term);
    const size_t plen = it == model.postings.end() ? 0 : it->second.size();
    io::write_pod<uint64_t>(out, plen);
    if (it != model.postings.end()) {
      for (const auto& [doc, w] : it->second) {
        io::write_pod<int32_t>(out, doc);
        io::write_pod<double>(out, w);
      }
    }
  }
  if (!out) raise(errc::io, "write failed: " + path);
}

TfIdfModel load_tfidf(const std::string& path) {
  auto in = io::open_in(path, /*binary=*/true);
  if (io::read_pod<uint32_t>(in, path) != kTfIdfMagic)
    raise(errc::parse, "not a tf-idf checkpoint: " + path);
  if (io::read_pod<uint32_t>(in, path) != kTfIdfVersion)
    raise(errc::parse, "unsupported tf-idf format version: " + path);
  TfIdfModel model;
  model.doc_count = io::read_pod<int64_t>(in, path);
  if (model.doc_count < 0) raise(errc::parse, "negative doc count: " + path);
  model.ids.reserve(static_cast<size_t>(model.doc_count));
  for (int64_t i = 0; i < model.doc_count; ++i) model.ids.push_back(io::read_string(in, path));
  io::read_doubles(in, model.doc_norms, static_cast<size_t>(model.doc_count), path);
  const auto term_count = io::read_pod<uint64_t>(in, path);
  for (uint64_t i = 0; i < term_count; ++i) {
    const std::string term = io::read_string(in, path);
    model.df[term] = io::read_pod<int64_t>(in, path);
    const auto plen = io::read_pod<uint64_t>(in, path);
    auto& plist = model.postings[term];
    plist.reserve(plen);
    for (uint64_t j = 0; j < plen; ++j) {
      const auto doc = io::read_pod<int32_t>(in, path);
      const auto w = io::read_pod<double>(in, path);
      plist.push_back({doc, w});
    }
    if (plist.empty()) model.postings.erase(term);
  }
  io::expect_eof(in, path);
  return model;
}

}  // namespace hopchain

#include "hopchain/beamsearch.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "hopchain/error.hpp"
#include "hopchain/numeric.hpp"
#include "io_util.hpp"

namespace hopchain {

namespace {

using ordered_json = nlohmann::ordered_json;

// score descending, then lexicographic hop ids ascending
bool chain_before(const ScoredChain& a, const ScoredChain& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.hops < b.hops;
}

void sort_truncate(std::vector<ScoredChain>& chains, size_t keep) {
  std::sort(chains.begin(), chains.end(), chain_before);
  if (chains.size() > keep) chains.resize(keep);
}

// Merges identical hop sequences, keeping the first (best-sorted) one.
// Distinct parents cannot produce the same sequence, so this is a guard
// rather than a hot path.
void dedup_sorted(std::vector<ScoredChain>& chains) {
  std::unordered_set<std::string> seen;
  std::vector<ScoredChain> out;
  out.reserve(chains.size());
  for (auto& c : chains) {
    std::string key;
    for (const auto& h : c.hops) {
      key += h;
      key += '\x1f';
    }
    if (seen.insert(std::move(key)).second) out.push_back(std::move(c));
  }
  chains = std::move(out);
}

}  // namespace

double chain_score_update(double prev_score, double sim, std::span<const double> step_candidates,
                          ScoreMode mode) {
  switch (mode) {
    case ScoreMode::raw_sum:
      return prev_score + sim;
    case ScoreMode::per_step_softmax:
      return prev_score + (sim - logsumexp(step_candidates));
  }
  raise(errc::invalid_argument, "unknown score mode");
}

ScoreMode score_mode_from_string(std::string_view name) {
  if (name == "raw-sum") return ScoreMode::raw_sum;
  if (name == "per-step-softmax") return ScoreMode::per_step_softmax;
  raise(errc::invalid_argument, "unknown score_mode: " + std::string(name));
}

std::string_view score_mode_name(ScoreMode mode) {
  return mode == ScoreMode::raw_sum ? "raw-sum" : "per-step-softmax";
}

std::vector<ScoredChain> retrieve_chains(std::span<const std::string> question_tokens,
                                         const EncoderParams& params, const VectorIndex& index,
                                         const Corpus& corpus, const BeamConfig& cfg) {
  if (cfg.beam_size < 1 || cfg.chain_len < 1 || cfg.return_top < 1)
    raise(errc::invalid_argument, "beam_size, chain_len and return_top must be >= 1");
  if (index.ids.empty()) raise(errc::invalid_argument, "retrieve over an empty index");
  check_index_matches(index, params);
  if (static_cast<size_t>(cfg.chain_len) > index.ids.size())
    raise(errc::infeasible, "chain_len " + std::to_string(cfg.chain_len) +
                                " exceeds corpus size " + std::to_string(index.ids.size()));

  const int64_t k = cfg.effective_per_step_k();
  const auto beam_keep = static_cast<size_t>(cfg.beam_size);

  // Step 1: the bare question seeds single-hop chains.
  std::vector<ScoredChain> beam;
  {
    const auto hits = search(index, encode_query(params, question_tokens), k);
    std::vector<double> cand_scores;
    cand_scores.reserve(hits.size());
    for (const auto& h : hits) cand_scores.push_back(h.score);
    for (const auto& h : hits) {
      ScoredChain c;
      c.hops = {h.id};
      c.step_scores = {h.score};
      c.score = chain_score_update(0.0, h.score, cand_scores, cfg.score_mode);
      beam.push_back(std::move(c));
    }
    sort_truncate(beam, beam_keep);
  }

  for (int64_t t = 2; t <= cfg.chain_len; ++t) {
    std::vector<ScoredChain> pooled;
    for (const ScoredChain& parent : beam) {
      std::vector<const Passage*> prefix;
      prefix.reserve(parent.hops.size());
      for (const auto& id : parent.hops) {
        const Passage* p = corpus.find(id);
        if (!p) raise(errc::invalid_argument, "index references passage absent from corpus: " + id);
        prefix.push_back(p);
      }
      const auto composed = compose_query(question_tokens, prefix, cfg.max_len);
      const auto hits = search(index, encode_query(params, composed), k);

      // Extensions repeating a passage in this chain are skipped before the
      // per-prefix softmax normalization.
      std::vector<const SearchHit*> cands;
      std::vector<double> cand_scores;
      for (const auto& h : hits) {
        if (std::find(parent.hops.begin(), parent.hops.end(), h.id) != parent.hops.end())
          continue;
        cands.push_back(&h);
        cand_scores.push_back(h.score);
      }
      for (const SearchHit* h : cands) {
        ScoredChain child;
        child.hops = parent.hops;
        child.hops.push_back(h->id);
        child.step_scores = parent.step_scores;
        child.step_scores.push_back(h->score);
        child.score = chain_score_update(parent.score, h->score, cand_scores, cfg.score_mode);
        pooled.push_back(std::move(child));
      }
    }
    if (pooled.empty())
      raise(errc::infeasible, "beam exhausted at step " + std::to_string(t) +
                                  "; raise per_step_k or shrink chain_len");
    std::sort(pooled.begin(), pooled.end(), chain_before);
    dedup_sorted(pooled);
    if (pooled.size() > beam_keep) pooled.resize(beam_keep);
    beam = std::move(pooled);
  }

  if (beam.size() > static_cast<size_t>(cfg.return_top))
    beam.resize(static_cast<size_t>(cfg.return_top));
  return beam;
}

std::vector<RunChains> retrieve_run(const std::vector<QuestionRecord>& questions,
                                    const EncoderParams& params, const VectorIndex& index,
                                    const Corpus& corpus, const BeamConfig& cfg) {
  std::vector<RunChains> run;
  run.reserve(questions.size());
  for (const auto& q : questions)
    run.push_back({q.id, retrieve_chains(tokenize(q.text), params, index, corpus, cfg)});
  return run;
}

void write_run_jsonl(std::span<const RunChains> run, const std::string& path) {
  auto out = io::open_out(path);
  for (const RunChains& entry : run) {
    ordered_json chains = ordered_json::array();
    for (const ScoredChain& c : entry.chains) {
      if (!std::isfinite(c.score) || !all_finite(c.step_scores))
        raise(errc::internal, "non-finite chain score for question " + entry.question_id);
      chains.push_back(
          ordered_json{{"hops", c.hops}, {"step_scores", c.step_scores}, {"score", c.score}});
    }
    out << ordered_json{{"question_id", entry.question_id}, {"chains", chains}}.dump() << "\n";
  }
  if (!out) raise(errc::io, "write failed: " + path);
}

std::vector<RunChains> read_run_jsonl(const std::string& path) {
  std::vector<RunChains> run;
  io::for_each_line(path, [&](size_t line_no, const std::string& line) {
    const auto fail = [&](const std::string& msg) {
      raise(errc::parse, path + ":" + std::to_string(line_no) + ": " + msg);
    };
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail("malformed JSON object");
    if (!j.contains("question_id") || !j["question_id"].is_string())
      fail("missing string field \"question_id\"");
    if (!j.contains("chains") || !j["chains"].is_array()) fail("missing array field \"chains\"");
    RunChains entry;
    entry.question_id = j["question_id"].get<std::string>();
    for (const auto& cj : j["chains"]) {
      if (!cj.is_object() || !cj.contains("hops") || !cj["hops"].is_array() ||
          !cj.contains("score"))
        fail("malformed chain object");
      ScoredChain c;
      for (const auto& h : cj["hops"]) {
        if (!h.is_string()) fail("chain hops must be strings");
        c.hops.push_back(h.get<std::string>());
      }
      if (cj.contains("step_scores")) {
        if (!cj["step_scores"].is_array()) fail("step_scores must be an array");
        for (const auto& s : cj["step_scores"]) c.step_scores.push_back(s.get<double>());
      }
      c.score = cj["score"].get<double>();
      entry.chains.push_back(std::move(c));
    }
    run.push_back(std::move(entry));
  });
  return run;
}

BeamConfig beam_config_from_json_text(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    raise(errc::parse, "beam config is not a JSON object");
  BeamConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "beam_size")
      cfg.beam_size = value.get<int64_t>();
    else if (key == "per_step_k")
      cfg.per_step_k = value.get<int64_t>();
    else if (key == "chain_len")
      cfg.chain_len = value.get<int64_t>();
    else if (key == "score_mode")
      cfg.score_mode = score_mode_from_string(value.get<std::string>());
    else if (key == "return_top")
      cfg.return_top = value.get<int64_t>();
    else if (key == "max_len")
      cfg.max_len = value.get<size_t>();
    else
      raise(errc::parse, "unknown beam config key: " + key);
  }
  return cfg;
}

std::string beam_config_to_json_text(const BeamConfig& cfg) {
  return ordered_json{{"beam_size", cfg.beam_size},
                      {"per_step_k", cfg.per_step_k},
                      {"chain_len", cfg.chain_len},
                      {"score_mode", score_mode_name(cfg.score_mode)},
                      {"return_top", cfg.return_top},
                      {"max_len", cfg.max_len}}
      .dump();
}

}  // namespace hopchain

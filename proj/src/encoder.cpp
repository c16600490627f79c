#include "hopchain/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hopchain/error.hpp"
#include "hopchain/numeric.hpp"
#include "hopchain/rng.hpp"
#include "io_util.hpp"

namespace hopchain {

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;
constexpr uint64_t kSeedMix = 0x9E3779B97F4A7C15ULL;
constexpr unsigned char kBigramSep = 0x1F;

uint64_t fnv1a_init(uint64_t seed) { return kFnvOffset ^ (seed * kSeedMix + 1); }

uint64_t fnv1a_feed(uint64_t h, std::string_view bytes) {
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

int64_t to_bucket(uint64_t h, int64_t hash_dim) {
  return static_cast<int64_t>(h % static_cast<uint64_t>(hash_dim));
}

void check_dims(const EncoderParams& p) {
  if (p.hash_dim <= 0 || p.emb_dim <= 0)
    raise(errc::invalid_argument, "encoder dims must be positive");
  const auto want = static_cast<size_t>(p.hash_dim) * static_cast<size_t>(p.emb_dim);
  if (p.w_query.size() != want || p.w_passage.size() != want)
    raise(errc::dim_mismatch, "encoder matrices do not match hash_dim x emb_dim");
}

DenseVector project(const std::vector<double>& w, int64_t emb_dim, int64_t hash_dim,
                    const SparseFeatures& f) {
  DenseVector out(static_cast<size_t>(emb_dim), 0.0);
  for (size_t k = 0; k < f.buckets.size(); ++k) {
    const auto col = static_cast<size_t>(f.buckets[k]);
    const double wt = f.weights[k];
    for (int64_t i = 0; i < emb_dim; ++i)
      out[static_cast<size_t>(i)] += wt * w[static_cast<size_t>(i * hash_dim) + col];
  }
  return out;
}

// grad += scale * outer(dense, features)
void accumulate_outer(std::vector<double>& grad, int64_t hash_dim, const DenseVector& dense,
                      const SparseFeatures& f, double scale) {
  for (size_t k = 0; k < f.buckets.size(); ++k) {
    const auto col = static_cast<size_t>(f.buckets[k]);
    const double wt = scale * f.weights[k];
    for (size_t i = 0; i < dense.size(); ++i)
      grad[i * static_cast<size_t>(hash_dim) + col] += wt * dense[i];
  }
}

}  // namespace

EncoderParams init_params(int64_t hash_dim, int64_t emb_dim, uint64_t seed) {
  if (hash_dim <= 0 || emb_dim <= 0)
    raise(errc::invalid_argument, "encoder dims must be positive");
  EncoderParams p;
  p.hash_dim = hash_dim;
  p.emb_dim = emb_dim;
  p.seed = seed;
  const auto n = static_cast<size_t>(hash_dim) * static_cast<size_t>(emb_dim);
  const double stddev = 1.0 / std::sqrt(static_cast<double>(hash_dim));
  Rng rng(seed);
  p.w_query.resize(n);
  for (auto& v : p.w_query) v = stddev * rng.next_gaussian();
  p.w_passage.resize(n);
  for (auto& v : p.w_passage) v = stddev * rng.next_gaussian();
  return p;
}

int64_t hash_bucket(std::string_view token, uint64_t seed, int64_t hash_dim) {
  return to_bucket(fnv1a_feed(fnv1a_init(seed), token), hash_dim);
}

int64_t hash_bucket_bigram(std::string_view first, std::string_view second, uint64_t seed,
                           int64_t hash_dim) {
  uint64_t h = fnv1a_feed(fnv1a_init(seed), first);
  h ^= kBigramSep;
  h *= kFnvPrime;
  h = fnv1a_feed(h, second);
  return to_bucket(h, hash_dim);
}

SparseFeatures featurize(std::span<const std::string> tokens, int64_t hash_dim, uint64_t seed) {
  if (hash_dim <= 0) raise(errc::invalid_argument, "hash_dim must be positive");
  // std::map keeps buckets sorted, which pins the float summation order.
  std::map<int64_t, double> counts;
  for (const auto& t : tokens) counts[hash_bucket(t, seed, hash_dim)] += 1.0;
  for (size_t i = 0; i + 1 < tokens.size(); ++i)
    counts[hash_bucket_bigram(tokens[i], tokens[i + 1], seed, hash_dim)] += 1.0;

  SparseFeatures f;
  f.buckets.reserve(counts.size());
  f.weights.reserve(counts.size());
  double sq = 0.0;
  for (const auto& [bucket, count] : counts) {
    f.buckets.push_back(bucket);
    f.weights.push_back(count);
    sq += count * count;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& w : f.weights) w *= inv;
  }
  return f;
}

DenseVector project_query(const EncoderParams& params, const SparseFeatures& features) {
  check_dims(params);
  return project(params.w_query, params.emb_dim, params.hash_dim, features);
}

DenseVector project_passage(const EncoderParams& params, const SparseFeatures& features) {
  check_dims(params);
  return project(params.w_passage, params.emb_dim, params.hash_dim, features);
}

DenseVector encode_passage(const EncoderParams& params, const Passage& passage) {
  return project_passage(params, featurize(passage.tokens, params.hash_dim, params.seed));
}

DenseVector encode_query(const EncoderParams& params,
                         std::span<const std::string> composed_tokens) {
  return project_query(params, featurize(composed_tokens, params.hash_dim, params.seed));
}

double similarity(const DenseVector& query_vec, const DenseVector& passage_vec) {
  if (query_vec.size() != passage_vec.size())
    raise(errc::dim_mismatch, "similarity: dims " + std::to_string(query_vec.size()) + " vs " +
                                  std::to_string(passage_vec.size()));
  double dot = 0.0;
  for (size_t i = 0; i < query_vec.size(); ++i) dot += query_vec[i] * passage_vec[i];
  return dot;
}

std::vector<std::string> compose_query(std::span<const std::string> question_tokens,
                                       std::span<const Passage* const> hops, size_t max_len) {
  std::vector<std::string> out;
  out.reserve(question_tokens.size());
  for (const auto& t : question_tokens) {
    if (out.size() >= max_len) return out;
    out.push_back(t);
  }
  for (const Passage* hop : hops) {
    if (out.size() >= max_len) return out;
    out.emplace_back(kSepToken);
    for (const auto& t : hop->tokens) {
      if (out.size() >= max_len) return out;
      out.push_back(t);
    }
  }
  return out;
}

LossGradient zero_gradient(const EncoderParams& params) {
  const auto n = static_cast<size_t>(params.hash_dim) * static_cast<size_t>(params.emb_dim);
  return LossGradient{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

namespace {

// Per-step candidate: the composed-query features for this chain's own
// prefix and the step passage's features.
struct StepCandidate {
  SparseFeatures query_features;
  SparseFeatures passage_features;
  double logit = 0.0;
};

struct StepInputs {
  std::vector<StepCandidate> candidates;  // [0] is the positive
};

// Builds the per-step logits for the positive chain and every negative,
// each composed with its own prefix.
std::vector<StepInputs> build_steps(const EncoderParams& params, const Corpus& corpus,
                                    std::span<const std::string> question_tokens,
                                    const OrderedChain& positive,
                                    std::span<const OrderedChain> negatives, size_t max_len) {
  const size_t n = positive.hops.size();
  if (n == 0) raise(errc::invalid_argument, "positive chain is empty");
  for (const auto& neg : negatives)
    if (neg.hops.size() != n)
      raise(errc::invalid_argument, "negative chain length " + std::to_string(neg.hops.size()) +
                                        " does not match positive length " + std::to_string(n));

  const auto candidate_at = [&](const OrderedChain& chain, size_t t) {
    std::vector<const Passage*> prefix;
    prefix.reserve(t);
    for (size_t i = 0; i < t; ++i) prefix.push_back(&corpus.at(chain.hops[i]));
    StepCandidate c;
    c.query_features = featurize(compose_query(question_tokens, prefix, max_len), params.hash_dim,
                                 params.seed);
    c.passage_features =
        featurize(corpus.at(chain.hops[t]).tokens, params.hash_dim, params.seed);
    c.logit = similarity(project_query(params, c.query_features),
                         project_passage(params, c.passage_features));
    return c;
  };

  std::vector<StepInputs> steps(n);
  for (size_t t = 0; t < n; ++t) {
    steps[t].candidates.reserve(negatives.size() + 1);
    steps[t].candidates.push_back(candidate_at(positive, t));
    for (const auto& neg : negatives) steps[t].candidates.push_back(candidate_at(neg, t));
  }
  return steps;
}

}  // namespace

double chain_nll_loss(const EncoderParams& params, const Corpus& corpus,
                      std::span<const std::string> question_tokens, const OrderedChain& positive,
                      std::span<const OrderedChain> negatives, size_t max_len) {
  const auto steps = build_steps(params, corpus, question_tokens, positive, negatives, max_len);
  double loss = 0.0;
  for (const auto& step : steps) {
    std::vector<double> logits;
    logits.reserve(step.candidates.size());
    for (const auto& c : step.candidates) logits.push_back(c.logit);
    loss += logsumexp(logits) - logits[0];
  }
  return loss;
}

double loss_gradient(const EncoderParams& params, const Corpus& corpus,
                     std::span<const std::string> question_tokens, const OrderedChain& positive,
                     std::span<const OrderedChain> negatives, size_t max_len, LossGradient& grad) {
  const auto want = static_cast<size_t>(params.hash_dim) * static_cast<size_t>(params.emb_dim);
  if (grad.w_query.size() != want || grad.w_passage.size() != want)
    raise(errc::dim_mismatch, "gradient buffers do not match parameter shape");

  const auto steps = build_steps(params, corpus, question_tokens, positive, negatives, max_len);
  double loss = 0.0;
  for (const auto& step : steps) {
    std::vector<double> logits;
    logits.reserve(step.candidates.size());
    for (const auto& c : step.candidates) logits.push_back(c.logit);
    const double lse = logsumexp(logits);
    loss += lse - logits[0];
    for (size_t k = 0; k < step.candidates.size(); ++k) {
      // d loss / d logit_k: softmax minus the one-hot positive.
      const double residual = std::exp(logits[k] - lse) - (k == 0 ? 1.0 : 0.0);
      if (residual == 0.0) continue;
      const auto& c = step.candidates[k];
      accumulate_outer(grad.w_query, params.hash_dim,
                       project_passage(params, c.passage_features), c.query_features, residual);
      accumulate_outer(grad.w_passage, params.hash_dim, project_query(params, c.query_features),
                       c.passage_features, residual);
    }
  }
  return loss;
}

void apply_sgd(EncoderParams& params, const LossGradient& grad, double learning_rate,
               double scale) {
  check_dims(params);
  if (grad.w_query.size() != params.w_query.size() ||
      grad.w_passage.size() != params.w_passage.size())
    raise(errc::dim_mismatch, "gradient shape does not match parameters");
  const double step = learning_rate * scale;
  for (size_t i = 0; i < params.w_query.size(); ++i) params.w_query[i] -= step * grad.w_query[i];
  for (size_t i = 0; i < params.w_passage.size(); ++i)
    params.w_passage[i] -= step * grad.w_passage[i];
  ++params.revision;
}

namespace {
constexpr uint32_t kParamsMagic = 0x48434550;  // "HCEP"
constexpr uint32_t kParamsVersion = 1;
}  // namespace

void save_params(const EncoderParams& params, const std::string& path) {
  check_dims(params);
  auto out = io::open_out(path, /*binary=*/true);
  io::write_pod(out, kParamsMagic);
  io::write_pod(out, kParamsVersion);
  io::write_pod<int64_t>(out, params.hash_dim);
  io::write_pod<int64_t>(out, params.emb_dim);
  io::write_pod<uint64_t>(out, params.seed);
  io::write_doubles(out, params.w_query);
  io::write_doubles(out, params.w_passage);
  if (!out) raise(errc::io, "write failed: " + path);
}

EncoderParams load_params(const std::string& path) {
  auto in = io::open_in(path, /*binary=*/true);
  if (io::read_pod<uint32_t>(in, path) != kParamsMagic)
    raise(errc::parse, "not an encoder checkpoint: " + path);
  if (io::read_pod<uint32_t>(in, path) != kParamsVersion)
    raise(errc::parse, "unsupported checkpoint format version: " + path);
  EncoderParams p;
  p.hash_dim = io::read_pod<int64_t>(in, path);
  p.emb_dim = io::read_pod<int64_t>(in, path);
  p.seed = io::read_pod<uint64_t>(in, path);
  if (p.hash_dim <= 0 || p.emb_dim <= 0)
    raise(errc::parse, "checkpoint has non-positive dims: " + path);
  const auto n = static_cast<size_t>(p.hash_dim) * static_cast<size_t>(p.emb_dim);
  io::read_doubles(in, p.w_query, n, path);
  io::read_doubles(in, p.w_passage, n, path);
  io::expect_eof(in, path);
  if (!all_finite(p.w_query) || !all_finite(p.w_passage))
    raise(errc::parse, "checkpoint contains non-finite values: " + path);
  return p;
}

}  // namespace hopchain

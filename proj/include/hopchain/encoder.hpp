#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopchain/corpus.hpp"

namespace hopchain {

using DenseVector = std::vector<double>;

// L2-normalized bag of hashed unigrams + adjacent bigrams; buckets strictly
// increasing.
struct SparseFeatures {
  std::vector<int64_t> buckets;
  std::vector<double> weights;

  bool empty() const { return buckets.empty(); }
};

// Dual-encoder parameters: two independent linear projections over the same
// feature-hash space. `revision` stamps the in-memory parameter state (it
// advances on every update and on index refresh) and is not serialized;
// loading a checkpoint starts it at 0.
struct EncoderParams {
  int64_t hash_dim = 0;  // V, feature-hash buckets
  int64_t emb_dim = 0;   // d
  uint64_t seed = 0;
  std::vector<double> w_query;    // emb_dim x hash_dim, row-major
  std::vector<double> w_passage;  // emb_dim x hash_dim, row-major
  uint64_t revision = 0;
};

// Seeded Gaussian init, standard deviation 1/sqrt(hash_dim).
EncoderParams init_params(int64_t hash_dim, int64_t emb_dim, uint64_t seed);

// Stable seeded hash into [0, hash_dim); identical across runs and platforms.
int64_t hash_bucket(std::string_view token, uint64_t seed, int64_t hash_dim);
int64_t hash_bucket_bigram(std::string_view first, std::string_view second, uint64_t seed,
                           int64_t hash_dim);

// Empty token sequence yields empty features (the zero vector).
SparseFeatures featurize(std::span<const std::string> tokens, int64_t hash_dim, uint64_t seed);

DenseVector project_query(const EncoderParams& params, const SparseFeatures& features);
DenseVector project_passage(const EncoderParams& params, const SparseFeatures& features);

DenseVector encode_passage(const EncoderParams& params, const Passage& passage);
DenseVector encode_query(const EncoderParams& params, std::span<const std::string> composed_tokens);

// Inner product; dimensions must agree.
double similarity(const DenseVector& query_vec, const DenseVector& passage_vec);

inline constexpr std::string_view kSepToken = "[sep]";

// question tokens, then per hop: "[sep]" followed by the hop's tokens;
// truncated to max_len by dropping trailing tokens.
std::vector<std::string> compose_query(std::span<const std::string> question_tokens,
                                       std::span<const Passage* const> hops, size_t max_len);

struct LossGradient {
  std::vector<double> w_query;
  std::vector<double> w_passage;
};

LossGradient zero_gradient(const EncoderParams& params);

// Chain NLL: sum over steps t of -log softmax of the positive step logit
// against the negative chains' step logits, where every chain (positive and
// each negative) composes the step-t query from its own prefix. Zero when
// there are no negatives. All chains must have the positive's length.
double chain_nll_loss(const EncoderParams& params, const Corpus& corpus,
                      std::span<const std::string> question_tokens, const OrderedChain& positive,
                      std::span<const OrderedChain> negatives, size_t max_len);

// Exact analytic gradient of chain_nll_loss, accumulated into `grad`
// (caller zeroes it); returns the loss value. The encoders are linear in
// their parameters, so the gradient is a sum of outer products of softmax
// residuals with feature vectors.
double loss_gradient(const EncoderParams& params, const Corpus& corpus,
                     std::span<const std::string> question_tokens, const OrderedChain& positive,
                     std::span<const OrderedChain> negatives, size_t max_len, LossGradient& grad);

// params -= learning_rate * scale * grad; bumps `revision`.
void apply_sgd(EncoderParams& params, const LossGradient& grad, double learning_rate,
               double scale = 1.0);

// Versioned little-endian binary checkpoint holding hash_dim, emb_dim, seed
// and both matrices row-major. Loading validates dimensions and starts
// `revision` at 0.
void save_params(const EncoderParams& params, const std::string& path);
EncoderParams load_params(const std::string& path);

}  // namespace hopchain

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hopchain/beamsearch.hpp"
#include "hopchain/corpus.hpp"
#include "hopchain/encoder.hpp"
#include "hopchain/tfidf.hpp"
#include "hopchain/vindex.hpp"

namespace hopchain {

enum class NegativeSource { warmup, refreshed };

// Per-question negative chains. Every chain has at least one passage outside
// the gold set and never equals the gold set; pool_version 0 is the tf-idf
// warm-up pool, each refresh increments it.
struct NegativePool {
  struct Entry {
    OrderedChain chain;
    NegativeSource source = NegativeSource::warmup;
  };
  std::vector<Entry> chains;
  uint64_t pool_version = 0;
  uint64_t mined_with_version = 0;  // index.model_version at mining time; 0 for warm-up
  bool short_pool = false;          // fewer chains available than requested
};

enum class RefreshUnit { epochs, steps };
enum class TrainMode { sequential_refresh, concurrent_refresh };

struct TrainConfig {
  int64_t negatives_per_question = 4;  // m
  double learning_rate = 0.1;
  int64_t epochs = 16;
  int64_t batch_size = 8;
  // Refresh cadence; 0 disables refresh entirely (warm-up negatives only).
  int64_t refresh_every = 2;
  RefreshUnit refresh_unit = RefreshUnit::epochs;
  TrainMode mode = TrainMode::sequential_refresh;
  uint64_t seed = 7;
  size_t max_len = 256;
  BeamConfig mining;     // beam used to mine hard negative chains
  BeamConfig dev_eval;   // beam used for per-epoch dev passage-EM logging
  std::string checkpoint_dir;  // when set, a checkpoint is written per refresh

  TrainConfig() {
    mining.beam_size = 10;
    mining.return_top = 10;
    dev_eval.beam_size = 10;
    dev_eval.return_top = 10;
  }
};

struct StepRecord {
  int64_t step = 0;
  double loss = 0.0;
  uint64_t pool_version = 0;
};

struct EpochRecord {
  int64_t epoch = 0;
  double mean_loss = 0.0;
  bool has_dev = false;
  double dev_p_em = 0.0;
};

struct TrainResult {
  std::vector<StepRecord> steps;
  std::vector<EpochRecord> epochs;
  int64_t refreshes = 0;
  int64_t flagged_questions = 0;  // hop order decided by the fallback rule
  uint64_t final_pool_version = 0;
  // Final per-question pools, parallel to question_ids (train-set order).
  std::vector<std::string> question_ids;
  std::vector<NegativePool> final_pools;
};

// Warm-up negatives: top tf-idf hits for the question with the gold passages
// removed, paired consecutively (hit_i, hit_i+1). Exactly m chains;
// errc::infeasible when the corpus cannot supply them.
std::vector<OrderedChain> mine_warmup_negatives(const TfIdfModel& model, const Corpus& corpus,
                                                const QuestionRecord& q, const OrderedChain& gold,
                                                int64_t m);

struct MinedNegatives {
  std::vector<OrderedChain> chains;
  bool short_pool = false;
};

// Hard negatives: beam-search the current index, drop the chain whose
// passage set equals the gold set, keep the m best. Chains containing one
// gold passage remain valid negatives. Returns fewer than m (flagged) when
// the corpus runs out.
MinedNegatives mine_hard_negative_chains(const EncoderParams& params, const VectorIndex& index,
                                         const Corpus& corpus, const QuestionRecord& q,
                                         const OrderedChain& gold, const BeamConfig& cfg,
                                         int64_t m);

// Full procedure: tf-idf warm-up pools, minibatch SGD on the chain NLL, and
// periodic hard-negative refresh from the current parameters. Sequential
// mode is a deterministic function of (data, cfg, seed); concurrent mode
// runs the refresher on a background thread over checkpoint snapshots and
// completes at least one refresh per run. Aborts with errc::diverged on a
// non-finite loss.
TrainResult train(const Corpus& corpus, const std::vector<QuestionRecord>& train_questions,
                  const std::vector<QuestionRecord>& dev_questions, const TrainConfig& cfg,
                  EncoderParams& params);

// Step records as JSONL lines {"step", "loss", "pool_version"}, followed by
// one {"epoch", "mean_loss", "dev_p_em"} line per epoch.
void write_training_log(const TrainResult& result, const std::string& path);

TrainConfig train_config_from_json_text(const std::string& json_text);
std::string train_config_to_json_text(const TrainConfig& cfg);

}  // namespace hopchain

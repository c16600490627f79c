/* C interface to the hopchain evidence-chain retrieval engine.
 *
 * Every object is an opaque handle created by a *_load / *_build / *_init
 * call and released by the matching *_free. Functions return HC_OK or an
 * error code; hc_last_error() returns a thread-local message for the most
 * recent failure on the calling thread. Strings returned through char**
 * outputs are heap-allocated and must be released with hc_string_free().
 * Config arguments are JSON text; unknown keys are rejected, missing keys
 * keep their defaults.
 */

#ifndef HOPCHAIN_H
#define HOPCHAIN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifdef _WIN32
#define HC_API __declspec(dllexport)
#else
#define HC_API __attribute__((visibility("default")))
#endif

typedef enum hc_status {
  HC_OK = 0,
  HC_ERR_IO = 1,
  HC_ERR_PARSE = 2,
  HC_ERR_INVALID = 3,
  HC_ERR_DIM_MISMATCH = 4,
  HC_ERR_STALE_INDEX = 5,
  HC_ERR_INFEASIBLE = 6,
  HC_ERR_DIVERGED = 7,
  HC_ERR_INTERNAL = 8
} hc_status;

typedef struct hc_corpus hc_corpus;
typedef struct hc_questions hc_questions;
typedef struct hc_encoder hc_encoder;
typedef struct hc_index hc_index;
typedef struct hc_tfidf hc_tfidf;

HC_API const char* hc_last_error(void);
HC_API const char* hc_status_name(hc_status status);
HC_API void hc_string_free(char* s);

/* ---- corpus and questions (JSONL, one object per line) ---- */

HC_API hc_status hc_corpus_load(const char* path, hc_corpus** out);
HC_API void hc_corpus_free(hc_corpus* corpus);
HC_API int64_t hc_corpus_size(const hc_corpus* corpus);

HC_API hc_status hc_questions_load(const char* path, hc_questions** out);
HC_API void hc_questions_free(hc_questions* questions);
HC_API int64_t hc_questions_size(const hc_questions* questions);

/* Checks gold ids resolve against the corpus and supervised records are
 * well-formed. */
HC_API hc_status hc_validate(const hc_corpus* corpus, const hc_questions* questions);

/* ---- synthetic data ---- */

/* config keys: num_chains, distractors_per_chain, vocab_size,
 * tokens_per_passage, bridge_overlap, seed. Writes both JSONL files and, if
 * summary_json_out is non-NULL, returns a one-line JSON summary. */
HC_API hc_status hc_synth_generate(const char* config_json, const char* corpus_path,
                                   const char* questions_path, char** summary_json_out);

/* ---- tf-idf baseline ---- */

HC_API hc_status hc_tfidf_fit(const hc_corpus* corpus, hc_tfidf** out);
HC_API hc_status hc_tfidf_save(const hc_tfidf* model, const char* path);
HC_API hc_status hc_tfidf_load(const char* path, hc_tfidf** out);
HC_API void hc_tfidf_free(hc_tfidf* model);

/* Writes a run file of consecutive-pair chains from the single-query tf-idf
 * ranking of each question. */
HC_API hc_status hc_tfidf_run(const hc_tfidf* model, const hc_corpus* corpus,
                              const hc_questions* questions, int64_t return_top,
                              const char* run_path);

/* ---- encoder ---- */

HC_API hc_status hc_encoder_init(int64_t hash_dim, int64_t emb_dim, uint64_t seed,
                                 hc_encoder** out);
HC_API hc_status hc_encoder_save(const hc_encoder* encoder, const char* path);
HC_API hc_status hc_encoder_load(const char* path, hc_encoder** out);
HC_API hc_status hc_encoder_dims(const hc_encoder* encoder, int64_t* hash_dim, int64_t* emb_dim);
HC_API void hc_encoder_free(hc_encoder* encoder);

/* out must hold emb_dim doubles; emb_dim must match the encoder. */
HC_API hc_status hc_encode_question(const hc_encoder* encoder, const char* question_text,
                                    double* out, int64_t emb_dim);
HC_API hc_status hc_encode_passage(const hc_encoder* encoder, const hc_corpus* corpus,
                                   const char* passage_id, double* out, int64_t emb_dim);
/* Composed query: question plus the listed hop passages, truncated to
 * max_len tokens. */
HC_API hc_status hc_encode_composed(const hc_encoder* encoder, const hc_corpus* corpus,
                                    const char* question_text, const char* const* hop_ids,
                                    int64_t num_hops, int64_t max_len, double* out,
                                    int64_t emb_dim);

/* ---- vector index ---- */

HC_API hc_status hc_index_build(const hc_encoder* encoder, const hc_corpus* corpus,
                                hc_index** out);
HC_API hc_status hc_index_save(const hc_index* index, const char* path);
HC_API hc_status hc_index_load(const char* path, hc_index** out);
HC_API hc_status hc_index_info(const hc_index* index, int64_t* count, int64_t* dim,
                               uint64_t* model_version);
HC_API void hc_index_free(hc_index* index);

/* Exact top-k inner-product search; returns JSON {"hits": [{"id", "score"}]}
 * ordered score descending, id ascending. */
HC_API hc_status hc_index_search(const hc_index* index, const double* query, int64_t dim,
                                 int64_t k, char** hits_json_out);

/* ---- training ---- */

/* config keys: negatives, learning_rate, epochs, batch_size, refresh_every,
 * refresh_unit ("epochs"|"steps"), mode
 * ("sequential-refresh"|"concurrent-refresh"), seed, max_len, checkpoint_dir,
 * mining {beam config}, dev_eval {beam config}.
 * dev may be NULL. When log_path is non-NULL the training log is written
 * there as JSONL. summary_json_out (optional) reports final loss, refreshes
 * and dev passage EM. */
HC_API hc_status hc_train(hc_encoder* encoder, const hc_corpus* corpus,
                          const hc_questions* train_questions, const hc_questions* dev_questions,
                          const char* config_json, const char* log_path, char** summary_json_out);

/* ---- retrieval and evaluation ---- */

/* beam config keys: beam_size, per_step_k, chain_len, score_mode
 * ("raw-sum"|"per-step-softmax"), return_top, max_len. */
HC_API hc_status hc_retrieve_run(const hc_encoder* encoder, const hc_index* index,
                                 const hc_corpus* corpus, const hc_questions* questions,
                                 const char* beam_config_json, const char* run_path);

/* Metrics JSON {"ar","pr","p_em","em","n"}; per_question_csv_path may be
 * NULL. */
HC_API hc_status hc_evaluate_run(const char* run_path, const hc_questions* questions,
                                 const hc_corpus* corpus, int64_t top_chains,
                                 const char* per_question_csv_path, char** metrics_json_out);

HC_API hc_status hc_hop_report(const char* run_path, const hc_questions* questions,
                               const hc_corpus* corpus, int64_t top_chains,
                               char** report_json_out);

HC_API hc_status hc_export_embeddings(const hc_encoder* encoder, const hc_corpus* corpus,
                                      const hc_questions* questions, int64_t max_len,
                                      const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HOPCHAIN_H */

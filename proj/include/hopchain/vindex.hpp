#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hopchain/corpus.hpp"
#include "hopchain/encoder.hpp"

namespace hopchain {

struct SearchHit {
  std::string id;
  double score;
};

// Exact inner-product index: one row per passage, rows aligned with ids.
// Immutable after build; concurrent searches are safe.
struct VectorIndex {
  std::vector<std::string> ids;
  std::vector<double> matrix;  // |ids| x dim, row-major
  int64_t dim = 0;
  uint64_t model_version = 0;  // EncoderParams::revision the rows were encoded with

  size_t size() const { return ids.size(); }
  std::span<const double> row(size_t i) const {
    return {matrix.data() + static_cast<size_t>(dim) * i, static_cast<size_t>(dim)};
  }
};

// Encodes every passage with the given params; model_version records
// params.revision. Corpus must be non-empty.
VectorIndex build_index(const EncoderParams& params, const Corpus& corpus);

// Exact top-k by inner product over a full scan. Results sorted by score
// descending, then id ascending; returns min(k, |ids|) hits.
std::vector<SearchHit> search(const VectorIndex& index, const DenseVector& query_vec, int64_t k);

// Re-encodes the corpus with `params` as a new checkpoint event: bumps
// params.revision past the old index's stamp and returns a fresh index
// carrying the new stamp. Matrix content equals build_index(params, corpus).
VectorIndex refresh(const VectorIndex& index, EncoderParams& params, const Corpus& corpus);

// Little-endian binary container: magic, format version, |ids|, dim,
// model_version, id table, row-major matrix. Round-trips bit-exactly.
void save_index(const VectorIndex& index, const std::string& path);
VectorIndex load_index(const std::string& path);

// Raise dim_mismatch / stale_index unless the index was built from this
// exact parameter state.
void check_index_matches(const VectorIndex& index, const EncoderParams& params);

}  // namespace hopchain

#include "hopchain/vindex.hpp"

#include <algorithm>

#include "hopchain/error.hpp"
#include "hopchain/numeric.hpp"
#include "io_util.hpp"

namespace hopchain {

VectorIndex build_index(const EncoderParams& params, const Corpus& corpus) {
  if (corpus.empty()) raise(errc::invalid_argument, "cannot index an empty corpus");
  VectorIndex index;
  index.dim = params.emb_dim;
  index.model_version = params.revision;
  index.ids.reserve(corpus.size());
  index.matrix.reserve(corpus.size() * static_cast<size_t>(params.emb_dim));
  for (const Passage& p : corpus.passages()) {
    index.ids.push_back(p.id);
    const DenseVector v = encode_passage(params, p);
    index.matrix.insert(index.matrix.end(), v.begin(), v.end());
  }
  return index;
}

std::vector<SearchHit> search(const VectorIndex& index, const DenseVector& query_vec, int64_t k) {
  if (index.ids.empty()) raise(errc::invalid_argument, "search over an empty index");
  if (k < 1) raise(errc::invalid_argument, "search k must be >= 1");
  if (static_cast<int64_t>(query_vec.size()) != index.dim)
    raise(errc::dim_mismatch, "query dim " + std::to_string(query_vec.size()) +
                                  " does not match index dim " + std::to_string(index.dim));

  const size_t n = index.size();
  std::vector<std::pair<double, uint32_t>> scored(n);
  for (size_t i = 0; i < n; ++i) {
    const auto row = index.row(i);
    double dot = 0.0;
    for (size_t j = 0; j < row.size(); ++j) dot += query_vec[j] * row[j];
    scored[i] = {dot, static_cast<uint32_t>(i)};
  }

  const size_t take = std::min(static_cast<size_t>(k), n);
  const auto better = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return index.ids[a.second] < index.ids[b.second];
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<ptrdiff_t>(take), scored.end(),
                    better);

  std::vector<SearchHit> hits;
  hits.reserve(take);
  for (size_t i = 0; i < take; ++i) hits.push_back({index.ids[scored[i].second], scored[i].first});
  return hits;
}

VectorIndex refresh(const VectorIndex& index, EncoderParams& params, const Corpus& corpus) {
  // A refresh is a new checkpoint event even when the weights are unchanged.
  params.revision = std::max(params.revision, index.model_version + 1);
  return build_index(params, corpus);
}

namespace {
constexpr uint32_t kIndexMagic = 0x48435649;  // "HCVI"
constexpr uint32_t kIndexVersion = 1;
}  // namespace

void save_index(const VectorIndex& index, const std::string& path) {
  auto out = io::open_out(path, /*binary=*/true);
  io::write_pod(out, kIndexMagic);
  io::write_pod(out, kIndexVersion);
  io::write_pod<uint64_t>(out, index.ids.size());
  io::write_pod<int64_t>(out, index.dim);
  io::write_pod<uint64_t>(out, index.model_version);
  for (const auto& id : index.ids) io::write_string(out, id);
  io::write_doubles(out, index.matrix);
  if (!out) raise(errc::io, "write failed: " + path);
}

VectorIndex load_index(const std::string& path) {
  auto in = io::open_in(path, /*binary=*/true);
  if (io::read_pod<uint32_t>(in, path) != kIndexMagic)
    raise(errc::parse, "not a vector index file: " + path);
  if (io::read_pod<uint32_t>(in, path) != kIndexVersion)
    raise(errc::parse, "unsupported index format version: " + path);
  VectorIndex index;
  const auto count = io::read_pod<uint64_t>(in, path);
  index.dim = io::read_pod<int64_t>(in, path);
  index.model_version = io::read_pod<uint64_t>(in, path);
  if (index.dim <= 0) raise(errc::parse, "index has non-positive dim: " + path);
  index.ids.reserve(count);
  for (uint64_t i = 0; i < count; ++i) index.ids.push_back(io::read_string(in, path));
  io::read_doubles(in, index.matrix, count * static_cast<uint64_t>(index.dim), path);
  io::expect_eof(in, path);
  if (!all_finite(index.matrix)) raise(errc::parse, "index contains non-finite values: " + path);
  return index;
}

void check_index_matches(const VectorIndex& index, const EncoderParams& params) {
  if (index.dim != params.emb_dim)
    raise(errc::dim_mismatch, "index dim " + std::to_string(index.dim) +
                                  " does not match encoder dim " + std::to_string(params.emb_dim));
  if (index.model_version != params.revision)
    raise(errc::stale_index, "index model_version " + std::to_string(index.model_version) +
                                 " does not match encoder revision " +
                                 std::to_string(params.revision) + "; rebuild the index");
}

}  // namespace hopchain

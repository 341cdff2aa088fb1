#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qsumm/corpus.hpp"

namespace qsumm {

/// Sparse vector with strictly increasing indices and no stored zeros.
struct SparseVector {
    std::vector<int> indices;
    std::vector<double> values;

    std::size_t nnz() const { return indices.size(); }
};

double dot(const SparseVector& u, const SparseVector& v);
double norm(const SparseVector& u);

/// Cosine similarity; 0 when either norm is 0.
double cosine(const SparseVector& u, const SparseVector& v);
double cosine(std::span<const double> u, std::span<const double> v);

/// tf.idf model fit on a document collection (here: one sentence = one
/// document). idf(term) = ln(n_docs / df(term)); vocabulary columns are
/// assigned in lexicographic term order, contiguous from 0.
struct TfidfModel {
    std::unordered_map<std::string, int> vocabulary; // term -> column
    std::vector<double> idf;                         // per column
    int n_docs = 0;

    std::size_t vocab_size() const { return idf.size(); }

    /// Column of `term`, or -1 when out of vocabulary.
    int column(std::string_view term) const;
    /// tf.idf weight of `term` inside `tokens` (raw count x idf); 0 for
    /// out-of-vocabulary terms.
    double weight_in(const std::vector<std::string>& tokens,
                     std::string_view term) const;

    std::string to_json() const;
    static TfidfModel from_json(std::string_view text);
};

/// Fits vocabulary and idf on the documents. documents must be non-empty.
TfidfModel fit_tfidf(const std::vector<std::vector<std::string>>& documents);

/// tf.idf vector of the tokens: raw count x idf per in-vocabulary term,
/// zero-weight entries dropped.
SparseVector vectorize(const TfidfModel& model,
                       const std::vector<std::string>& tokens);

/// Immutable token -> dense vector table loaded from a text file.
struct EmbeddingTable {
    int dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;

    const std::vector<double>* find(std::string_view token) const;
};

/// Loads embeddings from a text file: an optional "count dim" header line,
/// then one "token v1 ... v_dim" line per token. Duplicate tokens keep the
/// last entry (a warning goes to stderr). Throws FormatError on dimension
/// mismatches, non-numeric values or an empty table.
EmbeddingTable load_embeddings(const std::string& path);
EmbeddingTable parse_embeddings(std::string_view text);

/// Elementwise sum of the vectors of in-vocabulary tokens; all-OOV or empty
/// input yields the zero vector of length table.dim.
std::vector<double> sum_embedding(const EmbeddingTable& table,
                                  const std::vector<std::string>& tokens);

/// Mean of the vectors of in-vocabulary tokens; zero vector when none.
std::vector<double> mean_embedding(const EmbeddingTable& table,
                                   const std::vector<std::string>& tokens);

inline constexpr int kDenseFeatureCount = 20;

/// Statistics over the pairwise cosine similarities between distinct
/// in-table question tokens and distinct in-table sentence tokens.
///
/// Unweighted block (8): mean, median, max, min, mean of the 2 highest,
/// mean of the 3 highest, mean of the 2 lowest, mean of the 3 lowest.
/// "Mean of k highest/lowest" uses all pairs when fewer than k exist; the
/// median of an even-sized set is the mean of the two middle values.
///
/// Weighted block (8): the same statistics where a pair (q, s) carries
/// weight w(q) * w(s), w being the token's tf.idf weight inside its own
/// text. Weighted mean and top/bottom-k means are weight-averaged over the
/// selected pairs; the weighted median is taken on the ascending-similarity
/// ranking at half the cumulative weight, averaging the two straddling
/// similarities when the half-point lands exactly on a boundary. Selections
/// with zero total weight and empty pair sets produce zeros.
std::array<double, 16> pairwise_stats(const std::vector<std::string>& q_tokens,
                                      const std::vector<std::string>& s_tokens,
                                      const EmbeddingTable& table,
                                      const TfidfModel& tfidf);

/// Feature vector of one candidate sentence: its tf.idf vector plus a
/// 20-slot dense block [cos(q, s) over tf.idf, max snippet cosine,
/// cos of summed embeddings, 8 pairwise stats, 8 weighted pairwise stats,
/// normalised sentence position].
struct FeatureVector {
    SparseVector tfidf;
    std::array<double, kDenseFeatureCount> dense{};
};

FeatureVector build_features(const Sample& sample, int sentence_index,
                             const TfidfModel& tfidf,
                             const EmbeddingTable& table);

} // namespace qsumm

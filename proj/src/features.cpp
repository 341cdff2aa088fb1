#include "qsumm/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qsumm/errors.hpp"
#include "qsumm/text.hpp"

namespace qsumm {

namespace {

using ordered_json = nlohmann::ordered_json;

std::unordered_map<std::string, int> term_counts(
    const std::vector<std::string>& tokens) {
    std::unordered_map<std::string, int> counts;
    for (const std::string& token : tokens) ++counts[token];
    return counts;
}

// Distinct tokens in first-occurrence order, restricted to the embedding
// table.
std::vector<std::string> distinct_in_table(const std::vector<std::string>& tokens,
                                           const EmbeddingTable& table) {
    std::vector<std::string> out;
    for (const std::string& token : tokens) {
        if (!table.find(token)) continue;
        if (std::find(out.begin(), out.end(), token) == out.end()) {
            out.push_back(token);
        }
    }
    return out;
}

struct ScoredPair {
    double similarity;
    double weight;
};

double plain_mean(std::span<const ScoredPair> pairs) {
    if (pairs.empty()) return 0.0;
    double sum = 0.0;
    for (const ScoredPair& p : pairs) sum += p.similarity;
    return sum / static_cast<double>(pairs.size());
}

double weighted_mean(std::span<const ScoredPair> pairs) {
    double num = 0.0;
    double den = 0.0;
    for (const ScoredPair& p : pairs) {
        num += p.weight * p.similarity;
        den += p.weight;
    }
    return den > 0.0 ? num / den : 0.0;
}

double plain_median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Weighted median on the ascending-similarity ranking: the similarity where
// the cumulative weight crosses half of the total; when a prefix weight hits
// exactly half, the two straddling similarities are averaged.
double weighted_median(std::vector<ScoredPair> pairs) {
    double total = 0.0;
    for (const ScoredPair& p : pairs) total += p.weight;
    if (pairs.empty() || total <= 0.0) return 0.0;
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const ScoredPair& a, const ScoredPair& b) {
                         return a.similarity < b.similarity;
                     });
    const double half = 0.5 * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        cum += pairs[i].weight;
        if (cum > half) return pairs[i].similarity;
        if (cum == half) {
            for (std::size_t j = i + 1; j < pairs.size(); ++j) {
                if (pairs[j].weight > 0.0) {
                    return 0.5 * (pairs[i].similarity + pairs[j].similarity);
                }
            }
            return pairs[i].similarity;
        }
    }
    return pairs.back().similarity;
}

// Top/bottom-k pairs by similarity (ties by enumeration order), then either
// a plain or a weight-averaged mean over the selection.
std::vector<ScoredPair> select_extreme(std::span<const ScoredPair> pairs,
                                       std::size_t k, bool highest) {
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return highest ? pairs[a].similarity > pairs[b].similarity
                       : pairs[a].similarity < pairs[b].similarity;
    });
    std::vector<ScoredPair> out;
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
        out.push_back(pairs[order[i]]);
    }
    return out;
}

double mean_of_extreme(std::span<const ScoredPair> pairs, std::size_t k,
                       bool highest, bool weighted) {
    std::vector<ScoredPair> selected = select_extreme(pairs, k, highest);
    return weighted ? weighted_mean(selected) : plain_mean(selected);
}

} // namespace

double dot(const SparseVector& u, const SparseVector& v) {
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < u.indices.size() && j < v.indices.size()) {
        if (u.indices[i] == v.indices[j]) {
            sum += u.values[i] * v.values[j];
            ++i;
            ++j;
        } else if (u.indices[i] < v.indices[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

double norm(const SparseVector& u) {
    double sum = 0.0;
    for (double value : u.values) sum += value * value;
    return std::sqrt(sum);
}

double cosine(const SparseVector& u, const SparseVector& v) {
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot(u, v) / (nu * nv);
}

double cosine(std::span<const double> u, std::span<const double> v) {
    const std::size_t n = std::min(u.size(), v.size());
    double uv = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < n; ++i) uv += u[i] * v[i];
    for (double x : u) uu += x * x;
    for (double x : v) vv += x * x;
    if (uu == 0.0 || vv == 0.0) return 0.0;
    return uv / (std::sqrt(uu) * std::sqrt(vv));
}

int TfidfModel::column(std::string_view term) const {
    auto it = vocabulary.find(std::string(term));
    return it == vocabulary.end() ? -1 : it->second;
}

double TfidfModel::weight_in(const std::vector<std::string>& tokens,
                             std::string_view term) const {
    const int col = column(term);
    if (col < 0) return 0.0;
    int count = 0;
    for (const std::string& token : tokens) {
        if (token == term) ++count;
    }
    return count * idf[static_cast<std::size_t>(col)];
}

std::string TfidfModel::to_json() const {
    // Columns are lexicographic term ranks, so sorting terms recovers the
    // column order.
    std::vector<const std::string*> terms(vocabulary.size());
    for (const auto& [term, col] : vocabulary) {
        terms[static_cast<std::size_t>(col)] = &term;
    }
    ordered_json doc;
    doc["format"] = "qsumm-tfidf";
    doc["version"] = 1;
    doc["n_docs"] = n_docs;
    ordered_json entries = ordered_json::array();
    for (std::size_t col = 0; col < terms.size(); ++col) {
        entries.push_back(ordered_json::array({*terms[col], idf[col]}));
    }
    doc["terms"] = entries;
    return doc.dump();
}

TfidfModel TfidfModel::from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("tfidf model: malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != "qsumm-tfidf") {
        throw SchemaError("tfidf model: missing format tag 'qsumm-tfidf'");
    }
    TfidfModel model;
    model.n_docs = doc.at("n_docs").get<int>();
    const auto& entries = doc.at("terms");
    int col = 0;
    for (const auto& entry : entries) {
        model.vocabulary[entry.at(0).get<std::string>()] = col++;
        model.idf.push_back(entry.at(1).get<double>());
    }
    return model;
}

TfidfModel fit_tfidf(const std::vector<std::vector<std::string>>& documents) {
    if (documents.empty()) {
        throw std::invalid_argument("fit_tfidf: document list must be non-empty");
    }
    std::map<std::string, int> df;
    for (const auto& document : documents) {
        std::vector<std::string> seen;
        for (const auto& [term, count] : term_counts(document)) {
            seen.push_back(term);
        }
        for (const std::string& term : seen) ++df[term];
    }
    TfidfModel model;
    model.n_docs = static_cast<int>(documents.size());
    model.idf.reserve(df.size());
    int col = 0;
    for (const auto& [term, doc_freq] : df) {
        model.vocabulary[term] = col++;
        model.idf.push_back(std::log(static_cast<double>(model.n_docs) / doc_freq));
    }
    return model;
}

SparseVector vectorize(const TfidfModel& model,
                       const std::vector<std::string>& tokens) {
    std::map<int, double> weights;
    for (const auto& [term, count] : term_counts(tokens)) {
        const int col = model.column(term);
        if (col < 0) continue;
        const double weight = count * model.idf[static_cast<std::size_t>(col)];
        if (weight != 0.0) weights[col] = weight;
    }
    SparseVector out;
    out.indices.reserve(weights.size());
    out.values.reserve(weights.size());
    for (const auto& [col, weight] : weights) {
        out.indices.push_back(col);
        out.values.push_back(weight);
    }
    return out;
}

const std::vector<double>* EmbeddingTable::find(std::string_view token) const {
    auto it = vectors.find(std::string(token));
    return it == vectors.end() ? nullptr : &it->second;
}

EmbeddingTable parse_embeddings(std::string_view text) {
    EmbeddingTable table;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    bool first_content_line = true;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(begin, end - begin));
        ++line_no;
        begin = end + 1;
        if (end == text.size() && line.empty()) break;
        std::istringstream stream(line);
        std::vector<std::string> fields;
        std::string field;
        while (stream >> field) fields.push_back(field);
        if (fields.empty()) continue;

        if (first_content_line && fields.size() == 2) {
            // Optional "count dim" header.
            char* end_count = nullptr;
            char* end_dim = nullptr;
            long count = std::strtol(fields[0].c_str(), &end_count, 10);
            long dim = std::strtol(fields[1].c_str(), &end_dim, 10);
            if (*end_count == '\0' && *end_dim == '\0' && count >= 0 && dim > 0) {
                table.dim = static_cast<int>(dim);
                first_content_line = false;
                continue;
            }
        }
        first_content_line = false;

        if (fields.size() < 2) {
            throw FormatError("embeddings line " + std::to_string(line_no) +
                              ": expected 'token v1 ... v_dim'");
        }
        std::vector<double> vec;
        vec.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            char* endp = nullptr;
            double value = std::strtod(fields[i].c_str(), &endp);
            if (endp == fields[i].c_str() || *endp != '\0') {
                throw FormatError("embeddings line " + std::to_string(line_no) +
                                  ": non-numeric value '" + fields[i] + "'");
            }
            vec.push_back(value);
        }
        if (table.dim == 0) {
            table.dim = static_cast<int>(vec.size());
        } else if (static_cast<int>(vec.size()) != table.dim) {
            throw FormatError("embeddings line " + std::to_string(line_no) +
                              ": expected " + std::to_string(table.dim) +
                              " values, got " + std::to_string(vec.size()));
        }
        auto it = table.vectors.find(fields[0]);
        if (it != table.vectors.end()) {
            std::cerr << "warning: duplicate embedding token '" << fields[0]
                      << "' at line " << line_no << ", keeping the last entry\n";
            it->second = std::move(vec);
        } else {
            table.vectors.emplace(fields[0], std::move(vec));
        }
        if (end == text.size()) break;
    }
    if (table.vectors.empty()) {
        throw FormatError("embeddings file contains no vectors");
    }
    return table;
}

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw FormatError("cannot open embeddings file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_embeddings(buffer.str());
}

std::vector<double> sum_embedding(const EmbeddingTable& table,
                                  const std::vector<std::string>& tokens) {
    std::vector<double> sum(static_cast<std::size_t>(table.dim), 0.0);
    for (const std::string& token : tokens) {
        if (const std::vector<double>* vec = table.find(token)) {
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*vec)[i];
        }
    }
    return sum;
}

std::vector<double> mean_embedding(const EmbeddingTable& table,
                                   const std::vector<std::string>& tokens) {
    std::vector<double> sum(static_cast<std::size_t>(table.dim), 0.0);
    int hits = 0;
    for (const std::string& token : tokens) {
        if (const std::vector<double>* vec = table.find(token)) {
            ++hits;
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*vec)[i];
        }
    }
    if (hits > 0) {
        for (double& value : sum) value /= hits;
    }
    return sum;
}

std::array<double, 16> pairwise_stats(const std::vector<std::string>& q_tokens,
                                      const std::vector<std::string>& s_tokens,
                                      const EmbeddingTable& table,
                                      const TfidfModel& tfidf) {
    std::array<double, 16> stats{};
    const std::vector<std::string> q_distinct = distinct_in_table(q_tokens, table);
    const std::vector<std::string> s_distinct = distinct_in_table(s_tokens, table);
    if (q_distinct.empty() || s_distinct.empty()) return stats;

    std::vector<ScoredPair> pairs;
    pairs.reserve(q_distinct.size() * s_distinct.size());
    for (const std::string& q : q_distinct) {
        const std::vector<double>& qv = *table.find(q);
        const double wq = tfidf.weight_in(q_tokens, q);
        for (const std::string& s : s_distinct) {
            const std::vector<double>& sv = *table.find(s);
            const double ws = tfidf.weight_in(s_tokens, s);
            pairs.push_back(ScoredPair{cosine(qv, sv), wq * ws});
        }
    }

    std::vector<double> similarities;
    similarities.reserve(pairs.size());
    double max_sim = pairs.front().similarity;
    double min_sim = pairs.front().similarity;
    for (const ScoredPair& p : pairs) {
        similarities.push_back(p.similarity);
        max_sim = std::max(max_sim, p.similarity);
        min_sim = std::min(min_sim, p.similarity);
    }

    stats[0] = plain_mean(pairs);
    stats[1] = plain_median(similarities);
    stats[2] = max_sim;
    stats[3] = min_sim;
    stats[4] = mean_of_extreme(pairs, 2, true, false);
    stats[5] = mean_of_extreme(pairs, 3, true, false);
    stats[6] = mean_of_extreme(pairs, 2, false, false);
    stats[7] = mean_of_extreme(pairs, 3, false, false);

    stats[8] = weighted_mean(pairs);
    stats[9] = weighted_median(pairs);
    stats[10] = mean_of_extreme(pairs, 1, true, true);
    stats[11] = mean_of_extreme(pairs, 1, false, true);
    stats[12] = mean_of_extreme(pairs, 2, true, true);
    stats[13] = mean_of_extreme(pairs, 3, true, true);
    stats[14] = mean_of_extreme(pairs, 2, false, true);
    stats[15] = mean_of_extreme(pairs, 3, false, true);
    return stats;
}

FeatureVector build_features(const Sample& sample, int sentence_index,
                             const TfidfModel& tfidf,
                             const EmbeddingTable& table) {
    if (sentence_index < 0 ||
        static_cast<std::size_t>(sentence_index) >= sample.sentences.size()) {
        throw std::invalid_argument("build_features: sentence index out of range");
    }
    const Sentence& sentence =
        sample.sentences[static_cast<std::size_t>(sentence_index)];
    const std::vector<std::string> q_tokens = sample.question_tokens();

    FeatureVector fv;
    fv.tfidf = vectorize(tfidf, sentence.tokens);

    const SparseVector q_vec = vectorize(tfidf, q_tokens);
    fv.dense[0] = cosine(q_vec, fv.tfidf);

    double max_snippet_cos = 0.0;
    for (const std::string& snippet : sample.snippets) {
        const SparseVector snippet_vec = vectorize(tfidf, tokenize(snippet));
        max_snippet_cos = std::max(max_snippet_cos, cosine(fv.tfidf, snippet_vec));
    }
    fv.dense[1] = max_snippet_cos;

    const std::vector<double> q_emb = sum_embedding(table, q_tokens);
    const std::vector<double> s_emb = sum_embedding(table, sentence.tokens);
    fv.dense[2] = cosine(std::span<const double>(q_emb),
                         std::span<const double>(s_emb));

    const std::array<double, 16> stats =
        pairwise_stats(q_tokens, sentence.tokens, table, tfidf);
    std::copy(stats.begin(), stats.end(), fv.dense.begin() + 3);

    const std::size_t n_sentences = sample.sentences.size();
    fv.dense[19] =
        n_sentences > 1
            ? static_cast<double>(sentence_index) / static_cast<double>(n_sentences - 1)
            : 0.0;
    return fv;
}

} // namespace qsumm

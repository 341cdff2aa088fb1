#include "qsumm/rouge.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace qsumm {

namespace {

using CountMap = std::unordered_map<std::string, int>;

double f_measure(double precision, double recall) {
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

RougeScore score_from_counts(int match, int candidate_units, int reference_units) {
    RougeScore score;
    score.precision =
        candidate_units > 0 ? static_cast<double>(match) / candidate_units : 0.0;
    score.recall =
        reference_units > 0 ? static_cast<double>(match) / reference_units : 0.0;
    score.f1 = f_measure(score.precision, score.recall);
    return score;
}

int total(const CountMap& counts) {
    int sum = 0;
    for (const auto& [unit, count] : counts) sum += count;
    return sum;
}

int clipped_intersection(const CountMap& a, const CountMap& b) {
    int match = 0;
    for (const auto& [unit, count] : a) {
        auto it = b.find(unit);
        if (it != b.end()) match += std::min(count, it->second);
    }
    return match;
}

// Tokens never contain spaces (the tokenizer strips them), so joining with a
// space gives collision-free multiset keys; a lone token doubles as its
// unigram key.
CountMap ngram_counts(const TokenList& tokens, int n) {
    CountMap counts;
    if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j) {
            key += ' ';
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

CountMap skip_unit_counts(const TokenList& tokens, int max_gap) {
    CountMap counts;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        ++counts[tokens[i]];
        std::size_t last = std::min(tokens.size(),
                                    i + 2 + static_cast<std::size_t>(max_gap));
        for (std::size_t j = i + 1; j < last; ++j) {
            ++counts[tokens[i] + ' ' + tokens[j]];
        }
    }
    return counts;
}

int lcs_length(const TokenList& a, const TokenList& b) {
    if (a.empty() || b.empty()) return 0;
    // Two-row dynamic programming table.
    std::vector<int> prev(b.size() + 1, 0);
    std::vector<int> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                cur[j] = prev[j - 1] + 1;
            } else {
                cur[j] = std::max(prev[j], cur[j - 1]);
            }
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

template <typename PerReference>
RougeScore best_over_references(const std::vector<TokenList>& references,
                                PerReference&& score_one) {
    if (references.empty()) {
        throw std::invalid_argument("rouge: references must be non-empty");
    }
    RougeScore best = score_one(references.front());
    for (std::size_t r = 1; r < references.size(); ++r) {
        RougeScore s = score_one(references[r]);
        if (s.f1 > best.f1) best = s;
    }
    return best;
}

} // namespace

RougeScore rouge_n(const TokenList& candidate,
                   const std::vector<TokenList>& references, int n) {
    if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
    const CountMap cand = ngram_counts(candidate, n);
    const int cand_total = total(cand);
    return best_over_references(references, [&](const TokenList& reference) {
        const CountMap ref = ngram_counts(reference, n);
        return score_from_counts(clipped_intersection(cand, ref), cand_total,
                                 total(ref));
    });
}

RougeScore rouge_su(const TokenList& candidate,
                    const std::vector<TokenList>& references, int max_gap) {
    if (max_gap < 0) throw std::invalid_argument("rouge_su: max_gap must be >= 0");
    const CountMap cand = skip_unit_counts(candidate, max_gap);
    const int cand_total = total(cand);
    return best_over_references(references, [&](const TokenList& reference) {
        const CountMap ref = skip_unit_counts(reference, max_gap);
        return score_from_counts(clipped_intersection(cand, ref), cand_total,
                                 total(ref));
    });
}

RougeScore rouge_l(const TokenList& candidate,
                   const std::vector<TokenList>& references) {
    return best_over_references(references, [&](const TokenList& reference) {
        const int lcs = lcs_length(candidate, reference);
        RougeScore score;
        score.precision =
            candidate.empty() ? 0.0 : static_cast<double>(lcs) / candidate.size();
        score.recall =
            reference.empty() ? 0.0 : static_cast<double>(lcs) / reference.size();
        score.f1 = f_measure(score.precision, score.recall);
        return score;
    });
}

double reward(const TokenList& candidate,
              const std::vector<TokenList>& references, RewardScheme scheme) {
    switch (scheme) {
        case RewardScheme::su4_f1:
            return rouge_su(candidate, references, 4).f1;
        case RewardScheme::mean_2_l_f1:
            return 0.5 * (rouge_n(candidate, references, 2).f1 +
                          rouge_l(candidate, references).f1);
    }
    return 0.0;
}

} // namespace qsumm

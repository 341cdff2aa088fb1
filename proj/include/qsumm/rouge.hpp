#pragma once

#include <string>
#include <vector>

namespace qsumm {

/// Precision/recall/F1 triple for one candidate-vs-references comparison.
/// f1 is the balanced harmonic mean and 0 when precision + recall is 0.
struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// The two reward schemes used for policy training: ROUGE-SU4 F1, or the
/// mean of ROUGE-2 F1 and ROUGE-L F1.
enum class RewardScheme { su4_f1, mean_2_l_f1 };

using TokenList = std::vector<std::string>;

/// N-gram co-occurrence with clipped multiset counts. Multi-reference
/// aggregation is best-match: the per-reference score with maximal F1, ties
/// resolved in favour of the first reference. references must be non-empty.
RougeScore rouge_n(const TokenList& candidate,
                   const std::vector<TokenList>& references, int n);

/// Skip-bigram co-occurrence. Counting units of a sequence are all ordered
/// pairs (w_i, w_j), i < j, with at most max_gap intervening tokens
/// (adjacent tokens have gap 0), plus all unigrams. Otherwise as rouge_n.
RougeScore rouge_su(const TokenList& candidate,
                    const std::vector<TokenList>& references, int max_gap = 4);

/// Longest-common-subsequence scoring: with LCS length l, precision is
/// l/|candidate| and recall l/|reference| (0 on empty sequences).
RougeScore rouge_l(const TokenList& candidate,
                   const std::vector<TokenList>& references);

/// Summary-level reward in [0, 1] under the given scheme.
double reward(const TokenList& candidate,
              const std::vector<TokenList>& references, RewardScheme scheme);

} // namespace qsumm

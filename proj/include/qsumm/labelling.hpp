#pragma once

#include <string>
#include <vector>

#include "qsumm/corpus.hpp"

namespace qsumm {

/// Rule converting per-sentence ROUGE scores into binary training labels:
/// either "score strictly above t" or "the m highest-scoring sentences".
struct LabellingPolicy {
    enum class Kind { threshold, top_m };

    Kind kind = Kind::top_m;
    double t = 0.2; // threshold variant, in [0, 1]
    int m = 5;      // top-m variant, >= 1

    static LabellingPolicy make_threshold(double t);
    static LabellingPolicy make_top_m(int m);

    /// Parses "threshold:0.2" or "topm:5". Throws ConfigError otherwise.
    static LabellingPolicy parse(const std::string& text);
    std::string name() const;
};

/// Per-sentence regression targets and, once a policy is applied, binary
/// labels.
struct SentenceTargets {
    std::vector<double> scores;
    std::vector<bool> labels;
};

/// scores[i] = ROUGE-SU4 F1 (max_gap 4) of sentence i against the sample's
/// references. Throws std::invalid_argument when the sample has none.
std::vector<double> score_sentences(const Sample& sample);

/// Applies the policy. Threshold labels scores strictly above t; top-m
/// labels exactly min(m, |scores|) sentences, ties broken by lower index.
std::vector<bool> apply_policy(const std::vector<double>& scores,
                               const LabellingPolicy& policy);

} // namespace qsumm

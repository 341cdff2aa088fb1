#include "qsumm/labelling.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "qsumm/errors.hpp"
#include "qsumm/rouge.hpp"

namespace qsumm {

LabellingPolicy LabellingPolicy::make_threshold(double t) {
    if (t < 0.0 || t > 1.0) {
        throw std::invalid_argument("labelling threshold must be in [0, 1]");
    }
    LabellingPolicy policy;
    policy.kind = Kind::threshold;
    policy.t = t;
    return policy;
}

LabellingPolicy LabellingPolicy::make_top_m(int m) {
    if (m < 1) throw std::invalid_argument("labelling top-m requires m >= 1");
    LabellingPolicy policy;
    policy.kind = Kind::top_m;
    policy.m = m;
    return policy;
}

LabellingPolicy LabellingPolicy::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg =
        colon == std::string::npos ? std::string() : text.substr(colon + 1);
    try {
        if (head == "threshold" && !arg.empty()) {
            return make_threshold(std::stod(arg));
        }
        if (head == "topm" && !arg.empty()) {
            return make_top_m(std::stoi(arg));
        }
    } catch (const std::invalid_argument&) {
        // fall through to the ConfigError below
    } catch (const std::out_of_range&) {
    }
    throw ConfigError("invalid labelling '" + text +
                      "' (expected threshold:T or topm:M)");
}

std::string LabellingPolicy::name() const {
    char buf[32];
    if (kind == Kind::threshold) {
        std::snprintf(buf, sizeof buf, "threshold:%g", t);
    } else {
        std::snprintf(buf, sizeof buf, "topm:%d", m);
    }
    return buf;
}

std::vector<double> score_sentences(const Sample& sample) {
    if (sample.references.empty()) {
        throw std::invalid_argument("score_sentences: sample '" + sample.id +
                                    "' has no references");
    }
    const std::vector<std::vector<std::string>> refs = sample.reference_tokens();
    std::vector<double> scores;
    scores.reserve(sample.sentences.size());
    for (const Sentence& sentence : sample.sentences) {
        scores.push_back(rouge_su(sentence.tokens, refs, 4).f1);
    }
    return scores;
}

std::vector<bool> apply_policy(const std::vector<double>& scores,
                               const LabellingPolicy& policy) {
    std::vector<bool> labels(scores.size(), false);
    if (policy.kind == LabellingPolicy::Kind::threshold) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            labels[i] = scores[i] > policy.t;
        }
        return labels;
    }
    if (scores.empty()) {
        throw std::invalid_argument("apply_policy: top-m requires scores");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0u);
    // Highest score first; equal scores keep the lower sentence index.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(policy.m), scores.size());
    for (std::size_t i = 0; i < take; ++i) labels[order[i]] = true;
    return labels;
}

} // namespace qsumm

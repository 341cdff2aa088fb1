#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsumm/corpus.hpp"
#include "qsumm/features.hpp"
#include "qsumm/rng.hpp"
#include "qsumm/rouge.hpp"
#include "qsumm/summarise.hpp"

namespace qsumm {

/// Mid-episode state: the candidate under consideration and the sentences
/// already selected (all with lower indices).
struct PolicyState {
    int candidate_index = 0;
    std::vector<int> selected; // ascending subset of indices < candidate_index
    const Sample* sample = nullptr;
};

/// Single-hidden-layer policy network over sparse state features.
struct PolicyParams {
    int feature_dim = 0; // 5V+1 (tf.idf mode) or 5d+1 (embedding mode)
    int h = 0;
    std::vector<double> w1; // h x feature_dim, row-major
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

enum class PolicyFeatureMode { tfidf, embeddings };

struct RLConfig {
    int episodes = 2000;
    double lr = 0.02;
    RewardScheme reward_scheme = RewardScheme::su4_f1;
    double baseline_decay = 0.9;
    std::uint64_t seed = 1;
    int h = 20;
    PolicyFeatureMode feature_mode = PolicyFeatureMode::tfidf;
};

/// State features in tf.idf mode: five concatenated tf.idf blocks —
/// candidate sentence; the entire input; the summary so far; the candidates
/// still to be processed; the question — followed by one scalar, the number
/// of sentences selected so far. Length 5V+1.
SparseVector policy_features(const PolicyState& state, const TfidfModel& tfidf);

/// State features in embedding mode: the same five blocks as mean word
/// embeddings (dimension d each) plus the selected-count scalar. Length
/// 5d+1.
SparseVector policy_features_embeddings(const PolicyState& state,
                                        const EmbeddingTable& table);

/// Bundles the feature mode with whichever model it needs.
struct PolicyFeaturizer {
    PolicyFeatureMode mode = PolicyFeatureMode::tfidf;
    const TfidfModel* tfidf = nullptr;
    const EmbeddingTable* table = nullptr;

    int feature_dim() const;
    SparseVector features(const PolicyState& state) const;
};

PolicyParams policy_init(int feature_dim, int h, std::uint64_t seed);

/// Probability of the action "include the candidate". Throws
/// std::invalid_argument when the feature vector does not fit the network.
double policy_forward(const PolicyParams& params, const SparseVector& features);

struct PolicyGrads {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

/// log pi(action | features) and its analytic gradient with respect to every
/// parameter. Exposed for the REINFORCE update and finite-difference checks.
double policy_logprob_and_grads(const PolicyParams& params,
                                const SparseVector& features, bool action,
                                PolicyGrads& grads);

enum class RolloutMode { sample, greedy };

struct RolloutStep {
    int sentence_index = 0;
    bool action = false;
    double probability = 0.0; // p(include)
    double log_prob = 0.0;    // log pi(action)
};

struct RolloutResult {
    std::vector<int> selected; // ascending
    std::vector<RolloutStep> steps;
};

/// One pass over the candidates in sentence order. Sampling draws each
/// action from Bernoulli(p) using the given rng; greedy includes when
/// p > 0.5. Zero-sentence samples yield an empty trace.
RolloutResult rollout(const PolicyParams& params, const Sample& sample,
                      const PolicyFeaturizer& featurizer, RolloutMode mode,
                      Rng& rng);

/// REINFORCE with an exponential-moving-average reward baseline
/// (initialised at 0, updated after each parameter step). Samples are
/// visited in a seeded order, cyclically, one episode each. Every sample
/// needs references.
PolicyParams reinforce_train(const std::vector<Sample>& samples,
                             const PolicyFeaturizer& featurizer,
                             const RLConfig& config);

/// Greedy-rollout summary with the classification backoff: when fewer than
/// n sentences are selected, the top n by include-probability instead.
Summary summarise_policy(const PolicyParams& params, const Sample& sample,
                         const PolicyFeaturizer& featurizer, int n);

/// Versioned JSON container; tf.idf-mode models embed their tf.idf model.
std::string policy_model_to_json(const PolicyParams& params,
                                 PolicyFeatureMode mode,
                                 const TfidfModel* tfidf);
struct PolicyModelFile {
    PolicyParams params;
    PolicyFeatureMode mode = PolicyFeatureMode::tfidf;
    TfidfModel tfidf; // valid when mode == tfidf
};
PolicyModelFile policy_model_from_json(std::string_view text);

} // namespace qsumm

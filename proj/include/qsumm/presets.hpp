#pragma once

#include <string>

#include "qsumm/evaluation.hpp"

namespace qsumm {

/// One of the five submitted run configurations (MQ1..MQ5) for a given test
/// batch (1..5): first-n baseline, SVC, NNR, NNC and the policy-gradient
/// system, with per-batch batch sizes and reward/feature variants.
struct RunPreset {
    std::string name;
    int batch = 1;
    Method method = Method::firstn;
    std::string labelling = "none"; // "topm:5", "su4f1" or "none"
    int batch_size = 0;             // neural methods only
    RewardScheme reward = RewardScheme::mean_2_l_f1; // rl only
    PolicyFeatureMode features = PolicyFeatureMode::tfidf; // rl only

    /// Applies the preset onto a MethodSpec (labels, batch size, reward,
    /// feature mode), leaving unrelated knobs at their defaults.
    MethodSpec to_method_spec() const;
    std::string describe() const;
};

/// Resolves a preset by run name and batch; throws ConfigError on unknown
/// names or batches outside 1..5.
RunPreset resolve_preset(const std::string& name, int batch);

} // namespace qsumm

#include "qsumm/presets.hpp"

#include "qsumm/errors.hpp"

namespace qsumm {

RunPreset resolve_preset(const std::string& name, int batch) {
    if (batch < 1 || batch > 5) {
        throw ConfigError("preset batch must be in 1..5, got " +
                          std::to_string(batch));
    }
    RunPreset preset;
    preset.name = name;
    preset.batch = batch;
    // Batches 1-3 trained the neural systems with batch size 4096, batches
    // 4-5 with 1024. The policy system used the mean of ROUGE-2 and ROUGE-L
    // as its reward except in batch 5 (ROUGE-SU4), and embedding features
    // only in batch 2.
    const int neural_batch_size = batch <= 3 ? 4096 : 1024;
    if (name == "MQ1") {
        preset.method = Method::firstn;
    } else if (name == "MQ2") {
        preset.method = Method::svc;
        preset.labelling = "topm:5";
    } else if (name == "MQ3") {
        preset.method = Method::nnr;
        preset.labelling = "su4f1";
        preset.batch_size = neural_batch_size;
    } else if (name == "MQ4") {
        preset.method = Method::nnc;
        preset.labelling = "topm:5";
        preset.batch_size = neural_batch_size;
    } else if (name == "MQ5") {
        preset.method = Method::rl;
        preset.reward =
            batch == 5 ? RewardScheme::su4_f1 : RewardScheme::mean_2_l_f1;
        preset.features = batch == 2 ? PolicyFeatureMode::embeddings
                                     : PolicyFeatureMode::tfidf;
    } else {
        throw ConfigError("unknown preset '" + name +
                          "' (expected MQ1, MQ2, MQ3, MQ4 or MQ5)");
    }
    return preset;
}

MethodSpec RunPreset::to_method_spec() const {
    MethodSpec spec;
    spec.method = method;
    if (labelling == "su4f1") {
        spec.score_labels = true;
    } else if (labelling != "none") {
        spec.policy = LabellingPolicy::parse(labelling);
    }
    if (batch_size > 0) spec.nn.batch_size = batch_size;
    spec.rl.reward_scheme = reward;
    spec.rl.feature_mode = features;
    return spec;
}

std::string RunPreset::describe() const {
    std::string out;
    out += "preset: " + name + "\n";
    out += "batch: " + std::to_string(batch) + "\n";
    out += "method: " + std::string(method_name(method)) + "\n";
    out += "labelling: " + labelling + "\n";
    if (method == Method::nnc || method == Method::nnr) {
        out += "batch_size: " + std::to_string(batch_size) + "\n";
    }
    if (method == Method::rl) {
        out += std::string("reward: ") +
               (reward == RewardScheme::su4_f1 ? "su4f1" : "mean2l") + "\n";
        out += std::string("features: ") +
               (features == PolicyFeatureMode::tfidf ? "tfidf" : "emb200") + "\n";
    }
    return out;
}

} // namespace qsumm

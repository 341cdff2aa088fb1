#include "qsumm/policy_rl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "qsumm/errors.hpp"

namespace qsumm {

namespace {

using ordered_json = nlohmann::ordered_json;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log sigmoid(z), stable for large |z|.
double log_sigmoid(double z) {
    if (z >= 0.0) return -std::log1p(std::exp(-z));
    return z - std::log1p(std::exp(z));
}

void append_block(SparseVector& out, const SparseVector& block, int offset) {
    for (std::size_t i = 0; i < block.nnz(); ++i) {
        out.indices.push_back(block.indices[i] + offset);
        out.values.push_back(block.values[i]);
    }
}

void append_dense_block(SparseVector& out, const std::vector<double>& block,
                        int offset) {
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (block[i] != 0.0) {
            out.indices.push_back(offset + static_cast<int>(i));
            out.values.push_back(block[i]);
        }
    }
}

struct StateTokens {
    std::vector<std::string> candidate;
    std::vector<std::string> input;
    std::vector<std::string> selected;
    std::vector<std::string> remaining;
    std::vector<std::string> question;
};

StateTokens gather_state_tokens(const PolicyState& state) {
    if (!state.sample) {
        throw std::invalid_argument("policy_features: state has no sample");
    }
    const Sample& sample = *state.sample;
    const std::size_t candidate =
        static_cast<std::size_t>(state.candidate_index);
    if (candidate >= sample.sentences.size()) {
        throw std::invalid_argument("policy_features: candidate out of range");
    }
    StateTokens tokens;
    tokens.candidate = sample.sentences[candidate].tokens;
    for (const Sentence& sentence : sample.sentences) {
        tokens.input.insert(tokens.input.end(), sentence.tokens.begin(),
                            sentence.tokens.end());
        if (sentence.index > state.candidate_index) {
            tokens.remaining.insert(tokens.remaining.end(),
                                    sentence.tokens.begin(),
                                    sentence.tokens.end());
        }
    }
    for (int index : state.selected) {
        const auto& sentence_tokens =
            sample.sentences[static_cast<std::size_t>(index)].tokens;
        tokens.selected.insert(tokens.selected.end(), sentence_tokens.begin(),
                               sentence_tokens.end());
    }
    tokens.question = sample.question_tokens();
    return tokens;
}

struct ForwardTrace {
    std::vector<double> hidden_pre;
    std::vector<double> hidden;
    double raw = 0.0;
};

ForwardTrace policy_trace(const PolicyParams& params, const SparseVector& x) {
    if (!x.indices.empty() && x.indices.back() >= params.feature_dim) {
        throw std::invalid_argument("policy_forward: feature dimension mismatch");
    }
    ForwardTrace trace;
    const std::size_t h = static_cast<std::size_t>(params.h);
    const std::size_t in = static_cast<std::size_t>(params.feature_dim);
    trace.hidden_pre.resize(h);
    trace.hidden.resize(h);
    for (std::size_t row = 0; row < h; ++row) {
        double z = params.b1[row];
        const double* w_row = params.w1.data() + row * in;
        for (std::size_t i = 0; i < x.nnz(); ++i) {
            z += w_row[static_cast<std::size_t>(x.indices[i])] * x.values[i];
        }
        trace.hidden_pre[row] = z;
        trace.hidden[row] = z > 0.0 ? z : 0.0;
    }
    trace.raw = params.b2;
    for (std::size_t row = 0; row < h; ++row) {
        trace.raw += params.w2[row] * trace.hidden[row];
    }
    return trace;
}

} // namespace

SparseVector policy_features(const PolicyState& state, const TfidfModel& tfidf) {
    const StateTokens tokens = gather_state_tokens(state);
    const int v = static_cast<int>(tfidf.vocab_size());
    SparseVector out;
    append_block(out, vectorize(tfidf, tokens.candidate), 0);
    append_block(out, vectorize(tfidf, tokens.input), v);
    append_block(out, vectorize(tfidf, tokens.selected), 2 * v);
    append_block(out, vectorize(tfidf, tokens.remaining), 3 * v);
    append_block(out, vectorize(tfidf, tokens.question), 4 * v);
    if (!state.selected.empty()) {
        out.indices.push_back(5 * v);
        out.values.push_back(static_cast<double>(state.selected.size()));
    }
    return out;
}

SparseVector policy_features_embeddings(const PolicyState& state,
                                        const EmbeddingTable& table) {
    const StateTokens tokens = gather_state_tokens(state);
    const int d = table.dim;
    SparseVector out;
    append_dense_block(out, mean_embedding(table, tokens.candidate), 0);
    append_dense_block(out, mean_embedding(table, tokens.input), d);
    append_dense_block(out, mean_embedding(table, tokens.selected), 2 * d);
    append_dense_block(out, mean_embedding(table, tokens.remaining), 3 * d);
    append_dense_block(out, mean_embedding(table, tokens.question), 4 * d);
    if (!state.selected.empty()) {
        out.indices.push_back(5 * d);
        out.values.push_back(static_cast<double>(state.selected.size()));
    }
    return out;
}

int PolicyFeaturizer::feature_dim() const {
    if (mode == PolicyFeatureMode::tfidf) {
        if (!tfidf) throw std::invalid_argument("featurizer: tfidf model missing");
        return 5 * static_cast<int>(tfidf->vocab_size()) + 1;
    }
    if (!table) throw std::invalid_argument("featurizer: embedding table missing");
    return 5 * table->dim + 1;
}

SparseVector PolicyFeaturizer::features(const PolicyState& state) const {
    if (mode == PolicyFeatureMode::tfidf) {
        if (!tfidf) throw std::invalid_argument("featurizer: tfidf model missing");
        return policy_features(state, *tfidf);
    }
    if (!table) throw std::invalid_argument("featurizer: embedding table missing");
    return policy_features_embeddings(state, *table);
}

PolicyParams policy_init(int feature_dim, int h, std::uint64_t seed) {
    if (feature_dim < 1 || h < 1) {
        throw std::invalid_argument("policy_init: dimensions must be >= 1");
    }
    PolicyParams params;
    params.feature_dim = feature_dim;
    params.h = h;
    Rng rng(seed);
    params.w1.resize(static_cast<std::size_t>(h) *
                     static_cast<std::size_t>(feature_dim));
    for (double& weight : params.w1) weight = 0.1 * rng.normal();
    params.b1.assign(static_cast<std::size_t>(h), 0.0);
    params.w2.resize(static_cast<std::size_t>(h));
    for (double& weight : params.w2) weight = 0.1 * rng.normal();
    params.b2 = 0.0;
    return params;
}

double policy_forward(const PolicyParams& params, const SparseVector& features) {
    return sigmoid(policy_trace(params, features).raw);
}

double policy_logprob_and_grads(const PolicyParams& params,
                                const SparseVector& features, bool action,
                                PolicyGrads& grads) {
    const ForwardTrace trace = policy_trace(params, features);
    grads.w1.assign(params.w1.size(), 0.0);
    grads.b1.assign(params.b1.size(), 0.0);
    grads.w2.assign(params.w2.size(), 0.0);
    grads.b2 = 0.0;

    const double p = sigmoid(trace.raw);
    const double d_raw = (action ? 1.0 : 0.0) - p;
    const std::size_t h = static_cast<std::size_t>(params.h);
    const std::size_t in = static_cast<std::size_t>(params.feature_dim);
    grads.b2 = d_raw;
    for (std::size_t row = 0; row < h; ++row) {
        grads.w2[row] = d_raw * trace.hidden[row];
        if (trace.hidden_pre[row] <= 0.0) continue;
        const double d_hidden = d_raw * params.w2[row];
        grads.b1[row] = d_hidden;
        double* g_row = grads.w1.data() + row * in;
        for (std::size_t i = 0; i < features.nnz(); ++i) {
            g_row[static_cast<std::size_t>(features.indices[i])] +=
                d_hidden * features.values[i];
        }
    }
    return action ? log_sigmoid(trace.raw) : log_sigmoid(-trace.raw);
}

RolloutResult rollout(const PolicyParams& params, const Sample& sample,
                      const PolicyFeaturizer& featurizer, RolloutMode mode,
                      Rng& rng) {
    RolloutResult result;
    PolicyState state;
    state.sample = &sample;
    for (const Sentence& sentence : sample.sentences) {
        state.candidate_index = sentence.index;
        const SparseVector x = featurizer.features(state);
        const double p = policy_forward(params, x);
        bool include;
        if (mode == RolloutMode::sample) {
            include = rng.uniform() < p;
        } else {
            include = p > 0.5;
        }
        RolloutStep step;
        step.sentence_index = sentence.index;
        step.action = include;
        step.probability = p;
        step.log_prob = include ? std::log(p) : std::log1p(-p);
        result.steps.push_back(step);
        if (include) {
            state.selected.push_back(sentence.index);
            result.selected.push_back(sentence.index);
        }
    }
    return result;
}

PolicyParams reinforce_train(const std::vector<Sample>& samples,
                             const PolicyFeaturizer& featurizer,
                             const RLConfig& config) {
    if (samples.empty()) {
        throw std::invalid_argument("reinforce_train: no samples");
    }
    for (const Sample& sample : samples) {
        if (sample.references.empty()) {
            throw std::invalid_argument("reinforce_train: sample '" + sample.id +
                                        "' has no references");
        }
    }
    if (config.episodes < 1) {
        throw std::invalid_argument("reinforce_train: episodes must be >= 1");
    }
    if (config.baseline_decay < 0.0 || config.baseline_decay >= 1.0) {
        throw std::invalid_argument(
            "reinforce_train: baseline_decay must be in [0, 1)");
    }

    Rng rng(config.seed);
    std::vector<const Sample*> visit_order;
    visit_order.reserve(samples.size());
    for (const Sample& sample : samples) visit_order.push_back(&sample);
    rng.shuffle(visit_order);

    PolicyParams params =
        policy_init(featurizer.feature_dim(), config.h, rng.next_u64());

    std::vector<std::vector<std::vector<std::string>>> reference_tokens;
    reference_tokens.reserve(visit_order.size());
    for (const Sample* sample : visit_order) {
        reference_tokens.push_back(sample->reference_tokens());
    }

    // The reward EMA is seeded with the first episode's reward, so the
    // first update is differential rather than absolute.
    double baseline = 0.0;
    bool baseline_seeded = false;
    PolicyGrads step_grads;
    PolicyGrads episode_grads;
    for (int episode = 0; episode < config.episodes; ++episode) {
        const std::size_t which =
            static_cast<std::size_t>(episode) % visit_order.size();
        const Sample& sample = *visit_order[which];
        if (sample.sentences.empty()) continue;

        // Re-walk the trajectory accumulating grad log pi per step.
        PolicyState state;
        state.sample = &sample;
        episode_grads.w1.assign(params.w1.size(), 0.0);
        episode_grads.b1.assign(params.b1.size(), 0.0);
        episode_grads.w2.assign(params.w2.size(), 0.0);
        episode_grads.b2 = 0.0;
        std::vector<int> selected;
        for (const Sentence& sentence : sample.sentences) {
            state.candidate_index = sentence.index;
            const SparseVector x = featurizer.features(state);
            const double p = policy_forward(params, x);
            const bool include = rng.uniform() < p;
            policy_logprob_and_grads(params, x, include, step_grads);
            for (std::size_t i = 0; i < episode_grads.w1.size(); ++i) {
                episode_grads.w1[i] += step_grads.w1[i];
            }
            for (std::size_t i = 0; i < episode_grads.b1.size(); ++i) {
                episode_grads.b1[i] += step_grads.b1[i];
            }
            for (std::size_t i = 0; i < episode_grads.w2.size(); ++i) {
                episode_grads.w2[i] += step_grads.w2[i];
            }
            episode_grads.b2 += step_grads.b2;
            if (include) {
                state.selected.push_back(sentence.index);
                selected.push_back(sentence.index);
            }
        }

        std::vector<std::string> candidate;
        for (int index : selected) {
            const auto& tokens =
                sample.sentences[static_cast<std::size_t>(index)].tokens;
            candidate.insert(candidate.end(), tokens.begin(), tokens.end());
        }
        const double episode_reward =
            reward(candidate, reference_tokens[which], config.reward_scheme);
        if (!baseline_seeded) {
            baseline = episode_reward;
            baseline_seeded = true;
        }
        const double advantage = episode_reward - baseline;
        const double scale = config.lr * advantage;
        if (scale != 0.0) {
            for (std::size_t i = 0; i < params.w1.size(); ++i) {
                params.w1[i] += scale * episode_grads.w1[i];
            }
            for (std::size_t i = 0; i < params.b1.size(); ++i) {
                params.b1[i] += scale * episode_grads.b1[i];
            }
            for (std::size_t i = 0; i < params.w2.size(); ++i) {
                params.w2[i] += scale * episode_grads.w2[i];
            }
            params.b2 += scale * episode_grads.b2;
        }
        baseline = config.baseline_decay * baseline +
                   (1.0 - config.baseline_decay) * episode_reward;
    }
    return params;
}

Summary summarise_policy(const PolicyParams& params, const Sample& sample,
                         const PolicyFeaturizer& featurizer, int n) {
    Rng rng(0); // greedy mode draws nothing
    const RolloutResult result =
        rollout(params, sample, featurizer, RolloutMode::greedy, rng);
    std::vector<double> values(sample.sentences.size(), 0.0);
    std::vector<bool> positive(sample.sentences.size(), false);
    for (const RolloutStep& step : result.steps) {
        const std::size_t i = static_cast<std::size_t>(step.sentence_index);
        values[i] = step.probability;
        positive[i] = step.action;
    }
    return select_classified(sample, values, positive, n);
}

std::string policy_model_to_json(const PolicyParams& params,
                                 PolicyFeatureMode mode,
                                 const TfidfModel* tfidf) {
    ordered_json doc;
    doc["format"] = "qsumm-model";
    doc["version"] = 1;
    doc["kind"] = "policy";
    doc["feature_mode"] =
        mode == PolicyFeatureMode::tfidf ? "tfidf" : "embeddings";
    doc["feature_dim"] = params.feature_dim;
    doc["h"] = params.h;
    doc["w1"] = params.w1;
    doc["b1"] = params.b1;
    doc["w2"] = params.w2;
    doc["b2"] = params.b2;
    if (mode == PolicyFeatureMode::tfidf) {
        if (!tfidf) {
            throw std::invalid_argument(
                "policy_model_to_json: tfidf mode requires the tf.idf model");
        }
        doc["tfidf"] = ordered_json::parse(tfidf->to_json());
    }
    return doc.dump();
}

PolicyModelFile policy_model_from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model file: malformed JSON: ") + e.what());
    }
    if (doc.value("format", "") != "qsumm-model" ||
        doc.value("kind", "") != "policy") {
        throw SchemaError("model file: expected a qsumm-model of kind 'policy'");
    }
    PolicyModelFile file;
    const std::string mode = doc.at("feature_mode").get<std::string>();
    if (mode == "tfidf") {
        file.mode = PolicyFeatureMode::tfidf;
        file.tfidf = TfidfModel::from_json(doc.at("tfidf").dump());
    } else if (mode == "embeddings") {
        file.mode = PolicyFeatureMode::embeddings;
    } else {
        throw SchemaError("model file: unknown feature_mode '" + mode + "'");
    }
    file.params.feature_dim = doc.at("feature_dim").get<int>();
    file.params.h = doc.at("h").get<int>();
    file.params.w1 = doc.at("w1").get<std::vector<double>>();
    file.params.b1 = doc.at("b1").get<std::vector<double>>();
    file.params.w2 = doc.at("w2").get<std::vector<double>>();
    file.params.b2 = doc.at("b2").get<double>();
    const std::size_t expected = static_cast<std::size_t>(file.params.h) *
                                 static_cast<std::size_t>(file.params.feature_dim);
    if (file.params.w1.size() != expected ||
        file.params.b1.size() != static_cast<std::size_t>(file.params.h) ||
        file.params.w2.size() != static_cast<std::size_t>(file.params.h)) {
        throw SchemaError("model file: inconsistent policy parameter shapes");
    }
    return file;
}

} // namespace qsumm

#include "qsumm/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "qsumm/errors.hpp"
#include "qsumm/rng.hpp"
#include "qsumm/rouge.hpp"
#include "qsumm/summarise.hpp"

namespace qsumm {

namespace {

using ordered_json = nlohmann::ordered_json;

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// BCE of a sigmoid output written on the raw logit, stable for large |raw|.
double bce_from_raw(double raw, double target) {
    return std::max(raw, 0.0) - raw * target + std::log1p(std::exp(-std::abs(raw)));
}

double feature_at(const FeatureVector& x, std::size_t vocab_size,
                  std::span<const double> weights) {
    double value = 0.0;
    for (std::size_t i = 0; i < x.tfidf.nnz(); ++i) {
        const std::size_t col = static_cast<std::size_t>(x.tfidf.indices[i]);
        if (col < vocab_size) value += weights[col] * x.tfidf.values[i];
    }
    for (std::size_t j = 0; j < x.dense.size(); ++j) {
        value += weights[vocab_size + j] * x.dense[j];
    }
    return value;
}

// w is stored as scale * direction so that the L2 decay of every step is a
// single multiplication.
struct ScaledVector {
    std::vector<double> direction;
    double scale = 1.0;

    void decay(double factor) {
        scale *= factor;
        if (scale < 1e-9) materialise();
    }

    void add(const FeatureVector& x, std::size_t vocab_size, double step) {
        const double adjusted = step / scale;
        for (std::size_t i = 0; i < x.tfidf.nnz(); ++i) {
            const std::size_t col = static_cast<std::size_t>(x.tfidf.indices[i]);
            if (col < vocab_size) direction[col] += adjusted * x.tfidf.values[i];
        }
        for (std::size_t j = 0; j < x.dense.size(); ++j) {
            direction[vocab_size + j] += adjusted * x.dense[j];
        }
    }

    void materialise() {
        for (double& value : direction) value *= scale;
        scale = 1.0;
    }
};

} // namespace

LinearModel train_linear(const std::vector<FeatureVector>& X,
                         const std::vector<double>& y, Task task,
                         const LinearHyper& hyper, std::size_t vocab_size) {
    if (X.empty()) throw std::invalid_argument("train_linear: empty data");
    if (X.size() != y.size()) {
        throw std::invalid_argument("train_linear: |X| != |y|");
    }
    if (hyper.c <= 0.0) throw std::invalid_argument("train_linear: c must be > 0");

    const double lambda = 1.0 / hyper.c;
    ScaledVector w;
    w.direction.assign(vocab_size + kDenseFeatureCount, 0.0);
    double bias = 0.0;

    std::vector<std::size_t> order(X.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(hyper.seed);

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t index : order) {
            const FeatureVector& x = X[index];
            const double value =
                w.scale * feature_at(x, vocab_size, w.direction) + bias;
            w.decay(1.0 - hyper.lr * lambda);
            if (task == Task::classify) {
                const double label = y[index] > 0.5 ? 1.0 : -1.0;
                if (label * value < 1.0) {
                    w.add(x, vocab_size, hyper.lr * label);
                    bias += hyper.lr * label;
                }
            } else {
                const double residual = value - y[index];
                if (std::abs(residual) > hyper.epsilon) {
                    const double sign = residual > 0.0 ? 1.0 : -1.0;
                    w.add(x, vocab_size, -hyper.lr * sign);
                    bias -= hyper.lr * sign;
                }
            }
        }
    }
    w.materialise();

    LinearModel model;
    model.task = task;
    model.weights = std::move(w.direction);
    model.bias = bias;
    model.hyper = hyper;
    return model;
}

double predict_linear(const LinearModel& model, const FeatureVector& x) {
    return feature_at(x, model.vocab_size(), model.weights) + model.bias;
}

std::vector<LinearHyper> default_linear_grid(Task task) {
    std::vector<LinearHyper> grid;
    for (double c : {0.01, 0.1, 1.0, 10.0}) {
        if (task == Task::classify) {
            LinearHyper hyper;
            hyper.c = c;
            grid.push_back(hyper);
        } else {
            for (double epsilon : {0.01, 0.1}) {
                LinearHyper hyper;
                hyper.c = c;
                hyper.epsilon = epsilon;
                grid.push_back(hyper);
            }
        }
    }
    return grid;
}

NeuralParams nn_init(Task task, int d, int h, std::uint64_t seed) {
    if (d < 1 || h < 1) {
        throw std::invalid_argument("nn_init: d and h must be >= 1");
    }
    NeuralParams params;
    params.task = task;
    params.d = d;
    params.h = h;
    Rng rng(seed);
    params.w1.resize(static_cast<std::size_t>(h) * params.input_dim());
    for (double& weight : params.w1) weight = 0.1 * rng.normal();
    params.b1.assign(static_cast<std::size_t>(h), 0.0);
    params.w2.resize(static_cast<std::size_t>(h));
    for (double& weight : params.w2) weight = 0.1 * rng.normal();
    params.b2 = 0.0;
    return params;
}

namespace {

// [e_s ; e_s * e_q ; position]
std::vector<double> nn_input(const NeuralParams& params,
                             const EmbeddingTable& table,
                             const std::vector<std::string>& q_tokens,
                             const std::vector<std::string>& s_tokens,
                             double position) {
    const std::vector<double> e_s = sum_embedding(table, s_tokens);
    const std::vector<double> e_q = sum_embedding(table, q_tokens);
    std::vector<double> input(static_cast<std::size_t>(params.input_dim()));
    const std::size_t d = static_cast<std::size_t>(params.d);
    for (std::size_t i = 0; i < d; ++i) {
        input[i] = e_s[i];
        input[d + i] = e_s[i] * e_q[i];
    }
    input[2 * d] = position;
    return input;
}

struct ForwardTrace {
    std::vector<double> input;
    std::vector<double> hidden_pre;
    std::vector<double> hidden;
    double raw = 0.0;
};

ForwardTrace nn_forward_trace(const NeuralParams& params,
                              const std::vector<double>& input) {
    ForwardTrace trace;
    trace.input = input;
    const std::size_t h = static_cast<std::size_t>(params.h);
    const std::size_t in = static_cast<std::size_t>(params.input_dim());
    trace.hidden_pre.resize(h);
    trace.hidden.resize(h);
    for (std::size_t row = 0; row < h; ++row) {
        double z = params.b1[row];
        const double* w_row = params.w1.data() + row * in;
        for (std::size_t col = 0; col < in; ++col) z += w_row[col] * input[col];
        trace.hidden_pre[row] = z;
        trace.hidden[row] = z > 0.0 ? z : 0.0;
    }
    trace.raw = params.b2;
    for (std::size_t row = 0; row < h; ++row) {
        trace.raw += params.w2[row] * trace.hidden[row];
    }
    return trace;
}

// Accumulates dLoss/draw back through the net.
void backprop_raw(const NeuralParams& params, const ForwardTrace& trace,
                  double d_raw, NeuralGrads& grads) {
    const std::size_t h = static_cast<std::size_t>(params.h);
    const std::size_t in = static_cast<std::size_t>(params.input_dim());
    grads.b2 += d_raw;
    for (std::size_t row = 0; row < h; ++row) {
        grads.w2[row] += d_raw * trace.hidden[row];
        if (trace.hidden_pre[row] <= 0.0) continue;
        const double d_hidden = d_raw * params.w2[row];
        grads.b1[row] += d_hidden;
        double* g_row = grads.w1.data() + row * in;
        for (std::size_t col = 0; col < in; ++col) {
            g_row[col] += d_hidden * trace.input[col];
        }
    }
}

NeuralGrads zero_grads(const NeuralParams& params) {
    NeuralGrads grads;
    grads.w1.assign(params.w1.size(), 0.0);
    grads.b1.assign(params.b1.size(), 0.0);
    grads.w2.assign(params.w2.size(), 0.0);
    grads.b2 = 0.0;
    return grads;
}

} // namespace

double nn_forward(const NeuralParams& params, const EmbeddingTable& table,
                  const std::vector<std::string>& q_tokens,
                  const std::vector<std::string>& s_tokens, double position) {
    const ForwardTrace trace = nn_forward_trace(
        params, nn_input(params, table, q_tokens, s_tokens, position));
    return params.task == Task::classify ? sigmoid(trace.raw) : trace.raw;
}

double nn_loss_and_grads(const NeuralParams& params, const EmbeddingTable& table,
                         std::span<const NnExample> batch, NeuralGrads& grads) {
    if (batch.empty()) {
        throw std::invalid_argument("nn_loss_and_grads: empty batch");
    }
    grads = zero_grads(params);
    double loss = 0.0;
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    for (const NnExample& example : batch) {
        const ForwardTrace trace = nn_forward_trace(
            params, nn_input(params, table, example.q_tokens, example.s_tokens,
                             example.position));
        double d_raw;
        if (params.task == Task::classify) {
            loss += bce_from_raw(trace.raw, example.target) * inv_batch;
            d_raw = (sigmoid(trace.raw) - example.target) * inv_batch;
        } else {
            const double residual = trace.raw - example.target;
            loss += residual * residual * inv_batch;
            d_raw = 2.0 * residual * inv_batch;
        }
        backprop_raw(params, trace, d_raw, grads);
    }
    return loss;
}

NeuralParams nn_train(const std::vector<NnExample>& dataset,
                      const NeuralParams& init, const TrainConfig& config,
                      const EmbeddingTable& table) {
    if (dataset.empty()) throw std::invalid_argument("nn_train: empty dataset");
    if (config.batch_size < 1) {
        throw std::invalid_argument("nn_train: batch_size must be >= 1");
    }

    NeuralParams params = init;
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(config.seed);
    NeuralGrads grads;
    std::vector<NnExample> batch;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        std::size_t cursor = 0;
        int batch_no = 0;
        while (cursor < order.size()) {
            batch.clear();
            const std::size_t end = std::min(
                order.size(), cursor + static_cast<std::size_t>(config.batch_size));
            for (std::size_t i = cursor; i < end; ++i) {
                batch.push_back(dataset[order[i]]);
            }
            cursor = end;
            const double loss = nn_loss_and_grads(params, table, batch, grads);
            if (std::isnan(loss)) {
                throw TrainingError("nn_train: NaN loss at epoch " +
                                    std::to_string(epoch) + ", batch " +
                                    std::to_string(batch_no));
            }
            for (std::size_t i = 0; i < params.w1.size(); ++i) {
                params.w1[i] -= config.lr * grads.w1[i];
            }
            for (std::size_t i = 0; i < params.b1.size(); ++i) {
                params.b1[i] -= config.lr * grads.b1[i];
            }
            for (std::size_t i = 0; i < params.w2.size(); ++i) {
                params.w2[i] -= config.lr * grads.w2[i];
            }
            params.b2 -= config.lr * grads.b2;
            ++batch_no;
        }
    }
    return params;
}

LinearHyper grid_search(const std::vector<Sample>& samples, Task task,
                        const std::vector<LinearHyper>& param_grid,
                        const LabellingPolicy& policy,
                        const EmbeddingTable& table, int k, std::uint64_t seed) {
    if (param_grid.empty()) {
        throw std::invalid_argument("grid_search: empty parameter grid");
    }
    if (k < 2) throw std::invalid_argument("grid_search: k must be >= 2");

    std::vector<std::string> ids;
    ids.reserve(samples.size());
    for (const Sample& sample : samples) ids.push_back(sample.id);
    const FoldAssignment folds = make_folds(ids, k, seed);

    const SummaryLengthPolicy lengths;
    double best_score = -1.0;
    std::size_t best_index = 0;

    for (std::size_t g = 0; g < param_grid.size(); ++g) {
        double fold_sum = 0.0;
        for (int fold = 0; fold < k; ++fold) {
            std::vector<const Sample*> train;
            std::vector<const Sample*> val;
            for (const Sample& sample : samples) {
                (folds.assignment.at(sample.id) == fold ? val : train)
                    .push_back(&sample);
            }

            std::vector<std::vector<std::string>> documents;
            for (const Sample* sample : train) {
                for (const Sentence& sentence : sample->sentences) {
                    documents.push_back(sentence.tokens);
                }
            }
            const TfidfModel tfidf = fit_tfidf(documents);

            std::vector<FeatureVector> X;
            std::vector<double> y;
            for (const Sample* sample : train) {
                const std::vector<double> scores = score_sentences(*sample);
                const std::vector<bool> labels = apply_policy(scores, policy);
                for (const Sentence& sentence : sample->sentences) {
                    const std::size_t i = static_cast<std::size_t>(sentence.index);
                    X.push_back(build_features(*sample, sentence.index, tfidf, table));
                    y.push_back(task == Task::classify ? (labels[i] ? 1.0 : 0.0)
                                                       : scores[i]);
                }
            }
            LinearHyper hyper = param_grid[g];
            hyper.seed = derive_seed(seed, static_cast<std::uint64_t>(fold));
            const LinearModel model =
                train_linear(X, y, task, hyper, tfidf.vocab_size());

            double sample_sum = 0.0;
            for (const Sample* sample : val) {
                const int n = lengths.n_for(sample->question_type);
                const Summary summary =
                    task == Task::classify
                        ? summarise_classification(model, *sample, n, tfidf, table)
                        : summarise_regression(model, *sample, n, tfidf, table);
                std::vector<std::string> candidate;
                for (int index : summary.selected) {
                    const auto& tokens =
                        sample->sentences[static_cast<std::size_t>(index)].tokens;
                    candidate.insert(candidate.end(), tokens.begin(), tokens.end());
                }
                sample_sum +=
                    rouge_su(candidate, sample->reference_tokens(), 4).f1;
            }
            fold_sum += val.empty() ? 0.0 : sample_sum / val.size();
        }
        const double mean = fold_sum / k;
        if (mean > best_score) {
            best_score = mean;
            best_index = g;
        }
    }
    return param_grid[best_index];
}

std::string linear_model_to_json(const LinearModel& model,
                                 const TfidfModel& tfidf) {
    ordered_json doc;
    doc["format"] = "qsumm-model";
    doc["version"] = 1;
    doc["kind"] = "linear";
    doc["task"] = model.task == Task::classify ? "classify" : "regress";
    doc["hyper"] = {{"c", model.hyper.c},
                    {"epochs", model.hyper.epochs},
                    {"lr", model.hyper.lr},
                    {"seed", model.hyper.seed},
                    {"epsilon", model.hyper.epsilon}};
    doc["bias"] = model.bias;
    doc["weights"] = model.weights;
    doc["tfidf"] = ordered_json::parse(tfidf.to_json());
    return doc.dump();
}

std::pair<LinearModel, TfidfModel> linear_model_from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model file: malformed JSON: ") + e.what());
    }
    if (doc.value("format", "") != "qsumm-model" ||
        doc.value("kind", "") != "linear") {
        throw SchemaError("model file: expected a qsumm-model of kind 'linear'");
    }
    LinearModel model;
    model.task = doc.at("task").get<std::string>() == "classify"
                     ? Task::classify
                     : Task::regress;
    const auto& hyper = doc.at("hyper");
    model.hyper.c = hyper.at("c").get<double>();
    model.hyper.epochs = hyper.at("epochs").get<int>();
    model.hyper.lr = hyper.at("lr").get<double>();
    model.hyper.seed = hyper.at("seed").get<std::uint64_t>();
    model.hyper.epsilon = hyper.at("epsilon").get<double>();
    model.bias = doc.at("bias").get<double>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    TfidfModel tfidf = TfidfModel::from_json(doc.at("tfidf").dump());
    return {std::move(model), std::move(tfidf)};
}

std::string neural_model_to_json(const NeuralParams& params) {
    ordered_json doc;
    doc["format"] = "qsumm-model";
    doc["version"] = 1;
    doc["kind"] = "neural";
    doc["task"] = params.task == Task::classify ? "classify" : "regress";
    doc["encoder"] = "sum_pool";
    doc["d"] = params.d;
    doc["h"] = params.h;
    doc["w1"] = params.w1;
    doc["b1"] = params.b1;
    doc["w2"] = params.w2;
    doc["b2"] = params.b2;
    return doc.dump();
}

NeuralParams neural_model_from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model file: malformed JSON: ") + e.what());
    }
    if (doc.value("format", "") != "qsumm-model" ||
        doc.value("kind", "") != "neural") {
        throw SchemaError("model file: expected a qsumm-model of kind 'neural'");
    }
    if (doc.value("encoder", "sum_pool") != "sum_pool") {
        throw SchemaError("model file: unsupported encoder '" +
                          doc.value("encoder", "") + "'");
    }
    NeuralParams params;
    params.task = doc.at("task").get<std::string>() == "classify"
                      ? Task::classify
                      : Task::regress;
    params.d = doc.at("d").get<int>();
    params.h = doc.at("h").get<int>();
    params.w1 = doc.at("w1").get<std::vector<double>>();
    params.b1 = doc.at("b1").get<std::vector<double>>();
    params.w2 = doc.at("w2").get<std::vector<double>>();
    params.b2 = doc.at("b2").get<double>();
    const std::size_t expected =
        static_cast<std::size_t>(params.h) * params.input_dim();
    if (params.w1.size() != expected ||
        params.b1.size() != static_cast<std::size_t>(params.h) ||
        params.w2.size() != static_cast<std::size_t>(params.h)) {
        throw SchemaError("model file: inconsistent neural parameter shapes");
    }
    return params;
}

} // namespace qsumm

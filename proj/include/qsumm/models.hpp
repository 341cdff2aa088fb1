#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsumm/corpus.hpp"
#include "qsumm/features.hpp"
#include "qsumm/labelling.hpp"

namespace qsumm {

enum class Task { classify, regress };

/// Hyper-parameters of the linear max-margin models. c is the usual SVM
/// trade-off (regularisation strength 1/c), epsilon the regression tube.
struct LinearHyper {
    double c = 1.0;
    int epochs = 100;
    double lr = 0.01;
    std::uint64_t seed = 1;
    double epsilon = 0.1;
};

/// Linear model over the fixed feature space: tf.idf columns followed by
/// the 20 dense slots. Trained by seeded stochastic subgradient descent on
/// L2-regularised hinge (classify) or epsilon-insensitive (regress) loss.
struct LinearModel {
    Task task = Task::classify;
    std::vector<double> weights; // |vocabulary| + kDenseFeatureCount
    double bias = 0.0;
    LinearHyper hyper;

    std::size_t vocab_size() const {
        return weights.size() - kDenseFeatureCount;
    }
};

/// Fits a linear model. X and y must have equal, non-zero length; classify
/// expects y in {0, 1}, regress y in [0, 1]. Training is bit-reproducible
/// for fixed data and seed.
LinearModel train_linear(const std::vector<FeatureVector>& X,
                         const std::vector<double>& y, Task task,
                         const LinearHyper& hyper, std::size_t vocab_size);

/// Raw decision value w.x + b. Classification labels are value > 0; ranking
/// for backoff uses the raw value.
double predict_linear(const LinearModel& model, const FeatureVector& x);

/// Default grids mirroring the documented search space.
std::vector<LinearHyper> default_linear_grid(Task task);

/// Exhaustive grid search: each grid point is scored by k-fold
/// cross-validation (mean summary-level ROUGE-SU4 F1 on validation folds,
/// summaries generated with the task's strategy) and the best mean wins,
/// ties resolved by grid order.
LinearHyper grid_search(const std::vector<Sample>& samples, Task task,
                        const std::vector<LinearHyper>& param_grid,
                        const LabellingPolicy& policy,
                        const EmbeddingTable& table, int k, std::uint64_t seed);

/// Sentence encoders for the neural models. Only sum pooling is
/// implemented; the enum leaves room for a recurrent encoder.
enum class Encoder { sum_pool };

/// Parameters of the neural classifier (NNC) / regressor (NNR): a single
/// relu hidden layer over [sentence embedding ; sentence*question product ;
/// position], then a scalar output, sigmoid-activated for NNC.
struct NeuralParams {
    Encoder encoder = Encoder::sum_pool;
    Task task = Task::classify;
    int d = 0; // embedding dimension
    int h = 0; // hidden width
    std::vector<double> w1; // h x (2d+1), row-major
    std::vector<double> b1; // h
    std::vector<double> w2; // h
    double b2 = 0.0;

    int input_dim() const { return 2 * d + 1; }
};

struct TrainConfig {
    int batch_size = 32;
    int epochs = 10;
    double lr = 0.01;
    std::uint64_t seed = 1;
};

struct NnExample {
    std::vector<std::string> q_tokens;
    std::vector<std::string> s_tokens;
    double position = 0.0;
    double target = 0.0;
};

/// Seeded small-normal initialisation of all weights (biases zero).
NeuralParams nn_init(Task task, int d, int h, std::uint64_t seed);

/// Forward pass. NNC returns sigmoid(raw) in (0,1); NNR the raw value.
double nn_forward(const NeuralParams& params, const EmbeddingTable& table,
                  const std::vector<std::string>& q_tokens,
                  const std::vector<std::string>& s_tokens, double position);

struct NeuralGrads {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

/// Mean loss over the batch (binary cross-entropy for NNC, squared error
/// for NNR) and its analytic gradients. Exposed so gradients can be checked
/// against finite differences.
double nn_loss_and_grads(const NeuralParams& params, const EmbeddingTable& table,
                         std::span<const NnExample> batch, NeuralGrads& grads);

/// Mini-batch gradient descent with seeded shuffling; embeddings stay
/// frozen. Throws std::invalid_argument on an empty dataset and
/// TrainingError (naming epoch and batch) when the loss turns NaN.
NeuralParams nn_train(const std::vector<NnExample>& dataset,
                      const NeuralParams& init, const TrainConfig& config,
                      const EmbeddingTable& table);

/// Versioned JSON model container for linear and neural models. The tf.idf
/// model that defines a linear model's feature space travels with it.
std::string linear_model_to_json(const LinearModel& model,
                                 const TfidfModel& tfidf);
std::pair<LinearModel, TfidfModel> linear_model_from_json(std::string_view text);
std::string neural_model_to_json(const NeuralParams& params);
NeuralParams neural_model_from_json(std::string_view text);

} // namespace qsumm

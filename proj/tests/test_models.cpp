#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qsumm/errors.hpp"
#include "qsumm/evaluation.hpp"
#include "qsumm/features.hpp"
#include "qsumm/models.hpp"
#include "qsumm/rng.hpp"
#include "support/fixture.hpp"

using namespace qsumm;

namespace {

FeatureVector dense_only(std::initializer_list<double> values) {
    FeatureVector fv;
    std::size_t i = 0;
    for (double value : values) fv.dense[i++] = value;
    return fv;
}

EmbeddingTable random_table(Rng& rng, int dim, int vocab) {
    EmbeddingTable table;
    table.dim = dim;
    for (int t = 0; t < vocab; ++t) {
        std::vector<double> vec(static_cast<std::size_t>(dim));
        for (double& value : vec) value = rng.normal();
        table.vectors.emplace("t" + std::to_string(t), std::move(vec));
    }
    return table;
}

std::vector<std::string> random_tokens(Rng& rng, int vocab, std::size_t max_len) {
    std::vector<std::string> tokens;
    const std::size_t length = 1 + rng.below(max_len);
    for (std::size_t i = 0; i < length; ++i) {
        tokens.push_back("t" + std::to_string(rng.below(vocab)));
    }
    return tokens;
}

std::vector<double*> parameter_cells(NeuralParams& params) {
    std::vector<double*> cells;
    for (double& w : params.w1) cells.push_back(&w);
    for (double& b : params.b1) cells.push_back(&b);
    for (double& w : params.w2) cells.push_back(&w);
    cells.push_back(&params.b2);
    return cells;
}

std::vector<double> flat_grads(const NeuralGrads& grads) {
    std::vector<double> flat;
    flat.insert(flat.end(), grads.w1.begin(), grads.w1.end());
    flat.insert(flat.end(), grads.b1.begin(), grads.b1.end());
    flat.insert(flat.end(), grads.w2.begin(), grads.w2.end());
    flat.push_back(grads.b2);
    return flat;
}

} // namespace

TEST_CASE("predict_linear is a plain dot product") {
    LinearModel model;
    model.task = Task::regress;
    model.weights.assign(kDenseFeatureCount, 0.0);
    model.bias = 0.0;
    CHECK(predict_linear(model, dense_only({1.0, 2.0})) == 0.0);

    model.weights[2] = 1.0; // dense slot 2 (vocab is empty)
    model.bias = 0.25;
    CHECK(predict_linear(model, dense_only({0.0, 0.0, 0.7})) ==
          doctest::Approx(0.95).epsilon(1e-12));

    // Hand-checked 3-weight model over a sparse tf.idf block of size 2.
    LinearModel sparse_model;
    sparse_model.task = Task::regress;
    sparse_model.weights.assign(2 + kDenseFeatureCount, 0.0);
    sparse_model.weights[0] = 2.0;
    sparse_model.weights[1] = -1.0;
    sparse_model.weights[2] = 0.5; // first dense slot
    sparse_model.bias = 1.0;
    FeatureVector x;
    x.tfidf.indices = {0, 1};
    x.tfidf.values = {3.0, 4.0};
    x.dense[0] = 2.0;
    // 2*3 - 1*4 + 0.5*2 + 1 = 4
    CHECK(predict_linear(sparse_model, x) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("train_linear separates two separable points") {
    std::vector<FeatureVector> X = {dense_only({1.0, 0.0}),
                                    dense_only({-1.0, 0.0})};
    std::vector<double> y = {1.0, 0.0};
    LinearHyper hyper;
    hyper.epochs = 200;
    const LinearModel model = train_linear(X, y, Task::classify, hyper, 0);
    CHECK(predict_linear(model, X[0]) > 0.0);
    CHECK(predict_linear(model, X[1]) < 0.0);
}

TEST_CASE("train_linear constant-target regression lands in the tube") {
    std::vector<FeatureVector> X = {dense_only({1.0}), dense_only({0.5}),
                                    dense_only({0.2})};
    std::vector<double> y = {0.8, 0.8, 0.8};
    LinearHyper hyper;
    hyper.epochs = 300;
    hyper.epsilon = 0.1;
    const LinearModel model = train_linear(X, y, Task::regress, hyper, 0);
    for (const FeatureVector& x : X) {
        CHECK(std::abs(predict_linear(model, x) - 0.8) <= hyper.epsilon + 0.02);
    }
}

TEST_CASE("train_linear is bit-deterministic") {
    Rng rng(5);
    std::vector<FeatureVector> X;
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) {
        FeatureVector fv;
        for (std::size_t d = 0; d < fv.dense.size(); ++d) fv.dense[d] = rng.normal();
        X.push_back(fv);
        y.push_back(rng.uniform());
    }
    LinearHyper hyper;
    hyper.seed = 99;
    const LinearModel a = train_linear(X, y, Task::regress, hyper, 0);
    const LinearModel b = train_linear(X, y, Task::regress, hyper, 0);
    CHECK(a.weights == b.weights);
    CHECK(a.bias == b.bias);
}

TEST_CASE("train_linear argument errors") {
    CHECK_THROWS_AS(train_linear({}, {}, Task::classify, LinearHyper{}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(train_linear({FeatureVector{}}, {1.0, 0.0}, Task::classify,
                                 LinearHyper{}, 0),
                    std::invalid_argument);
}

TEST_CASE("nn_forward zero parameters") {
    EmbeddingTable table;
    table.dim = 2;
    table.vectors["a"] = {1.0, -1.0};
    NeuralParams params;
    params.task = Task::classify;
    params.d = 2;
    params.h = 3;
    params.w1.assign(3 * 5, 0.0);
    params.b1.assign(3, 0.0);
    params.w2.assign(3, 0.0);
    params.b2 = 0.0;
    CHECK(nn_forward(params, table, {"a"}, {"a"}, 0.5) == doctest::Approx(0.5));
    params.task = Task::regress;
    CHECK(nn_forward(params, table, {"a"}, {"a"}, 0.5) == 0.0);
}

TEST_CASE("nn_forward matches a straight-line recomputation") {
    Rng rng(17);
    EmbeddingTable table = random_table(rng, 2, 4);
    NeuralParams params = nn_init(Task::classify, 2, 2, 7);
    for (double& b : params.b1) b = 0.2 * rng.normal();
    params.b2 = 0.1;

    const std::vector<std::string> q = {"t0", "t2"};
    const std::vector<std::string> s = {"t1", "t1", "t3"};
    const double position = 0.25;

    // Recompute by hand.
    std::vector<double> e_q(2, 0.0), e_s(2, 0.0);
    for (const auto& token : q) {
        for (int i = 0; i < 2; ++i) e_q[i] += table.vectors.at(token)[i];
    }
    for (const auto& token : s) {
        for (int i = 0; i < 2; ++i) e_s[i] += table.vectors.at(token)[i];
    }
    const double input[5] = {e_s[0], e_s[1], e_s[0] * e_q[0], e_s[1] * e_q[1],
                             position};
    double raw = params.b2;
    for (int row = 0; row < 2; ++row) {
        double z = params.b1[row];
        for (int col = 0; col < 5; ++col) z += params.w1[row * 5 + col] * input[col];
        raw += params.w2[row] * (z > 0.0 ? z : 0.0);
    }
    const double expected = 1.0 / (1.0 + std::exp(-raw));
    CHECK(nn_forward(params, table, q, s, position) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("nn_train overfits a single example and is deterministic") {
    Rng rng(23);
    const EmbeddingTable table = random_table(rng, 3, 5);
    std::vector<NnExample> dataset = {
        {{"t0", "t1"}, {"t2"}, 0.0, 1.0},
    };
    TrainConfig config;
    config.epochs = 1;
    config.lr = 0.05;
    config.batch_size = 4;
    NeuralParams params = nn_init(Task::classify, 3, 4, 11);

    double previous = 1e100;
    for (int epoch = 0; epoch < 10; ++epoch) {
        NeuralGrads grads;
        const double loss = nn_loss_and_grads(params, table, dataset, grads);
        CHECK(loss < previous);
        previous = loss;
        params = nn_train(dataset, params, config, table);
    }

    const NeuralParams base = nn_init(Task::regress, 3, 4, 11);
    TrainConfig two;
    two.epochs = 5;
    two.seed = 3;
    const NeuralParams a = nn_train(dataset, base, two, table);
    const NeuralParams b = nn_train(dataset, base, two, table);
    CHECK(a.w1 == b.w1);
    CHECK(a.b1 == b.b1);
    CHECK(a.w2 == b.w2);
    CHECK(a.b2 == b.b2);

    CHECK_THROWS_AS(nn_train({}, base, two, table), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(31337);
    const double step = 1e-5;
    double max_rel_err = 0.0;
    for (int config_no = 0; config_no < 20; ++config_no) {
        const int d = 1 + static_cast<int>(rng.below(4));
        const int h = 1 + static_cast<int>(rng.below(5));
        const Task task = config_no % 2 == 0 ? Task::classify : Task::regress;
        const EmbeddingTable table = random_table(rng, d, 6);
        NeuralParams params = nn_init(task, d, h, rng.next_u64());
        for (double& b : params.b1) b = 0.3 + 0.1 * rng.normal();
        std::vector<NnExample> batch;
        const std::size_t batch_size = 1 + rng.below(4);
        for (std::size_t i = 0; i < batch_size; ++i) {
            NnExample example;
            example.q_tokens = random_tokens(rng, 6, 3);
            example.s_tokens = random_tokens(rng, 6, 3);
            example.position = rng.uniform();
            example.target = task == Task::classify ? (rng.uniform() < 0.5 ? 0.0 : 1.0)
                                                    : rng.uniform();
            batch.push_back(example);
        }

        NeuralGrads grads;
        nn_loss_and_grads(params, table, batch, grads);
        const std::vector<double> analytic = flat_grads(grads);
        const std::vector<double*> cells = parameter_cells(params);
        REQUIRE(analytic.size() == cells.size());
        NeuralGrads scratch;
        for (std::size_t p = 0; p < cells.size(); ++p) {
            const double saved = *cells[p];
            *cells[p] = saved + step;
            const double plus = nn_loss_and_grads(params, table, batch, scratch);
            *cells[p] = saved - step;
            const double minus = nn_loss_and_grads(params, table, batch, scratch);
            *cells[p] = saved;
            const double fd = (plus - minus) / (2.0 * step);
            const double scale = std::max({1.0, std::abs(analytic[p]), std::abs(fd)});
            max_rel_err = std::max(max_rel_err, std::abs(analytic[p] - fd) / scale);
        }
    }
    CHECK(max_rel_err < 1e-4);
}

TEST_CASE("grid_search ties and membership") {
    const std::vector<Sample> corpus = fixture::make_fixture_corpus();
    std::vector<Sample> small(corpus.begin(), corpus.begin() + 8);
    const EmbeddingTable table = fixture::make_fixture_embeddings(small);

    LinearHyper only;
    only.c = 3.0;
    only.epochs = 3;
    const LabellingPolicy policy = LabellingPolicy::make_top_m(5);
    const LinearHyper chosen =
        grid_search(small, Task::classify, {only}, policy, table, 2, 7);
    CHECK(chosen.c == 3.0);

    LinearHyper duplicate = only;
    duplicate.epochs = 3;
    const LinearHyper tie = grid_search(small, Task::classify, {only, duplicate},
                                        policy, table, 2, 7);
    CHECK(tie.c == only.c);

    CHECK_THROWS_AS(
        grid_search(small, Task::classify, {}, policy, table, 2, 7),
        std::invalid_argument);
}

TEST_CASE("grid_search agrees with an exhaustive re-evaluation") {
    const std::vector<Sample> corpus = fixture::make_fixture_corpus();
    std::vector<Sample> small(corpus.begin(), corpus.begin() + 10);
    const EmbeddingTable table = fixture::make_fixture_embeddings(small);
    const LabellingPolicy policy = LabellingPolicy::make_top_m(3);
    const int k = 2;
    const std::uint64_t seed = 11;

    std::vector<LinearHyper> grid;
    for (double c : {0.1, 1.0, 10.0}) {
        LinearHyper hyper;
        hyper.c = c;
        hyper.epochs = 5;
        grid.push_back(hyper);
    }

    // Re-evaluate every grid point through the generic experiment pipeline.
    std::vector<std::string> ids;
    for (const Sample& sample : small) ids.push_back(sample.id);
    const FoldAssignment folds = make_folds(ids, k, seed);
    double best_mean = -1.0;
    std::size_t best_index = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double fold_sum = 0.0;
        for (int fold = 0; fold < k; ++fold) {
            std::vector<const Sample*> train;
            std::vector<const Sample*> val;
            for (const Sample& sample : small) {
                (folds.assignment.at(sample.id) == fold ? val : train)
                    .push_back(&sample);
            }
            MethodSpec spec;
            spec.method = Method::svc;
            spec.policy = policy;
            spec.linear = grid[g];
            const TrainedSummariser trained = train_summariser(
                spec, train, &table, derive_seed(seed, static_cast<std::uint64_t>(fold)));
            fold_sum += mean_su4_f1(trained, val);
        }
        const double mean = fold_sum / k;
        if (mean > best_mean) {
            best_mean = mean;
            best_index = g;
        }
    }

    const LinearHyper chosen =
        grid_search(small, Task::classify, grid, policy, table, k, seed);
    CHECK(chosen.c == grid[best_index].c);
}

TEST_CASE("model json round-trips") {
    Rng rng(3);
    std::vector<FeatureVector> X;
    std::vector<double> y;
    for (int i = 0; i < 6; ++i) {
        FeatureVector fv;
        for (std::size_t d = 0; d < fv.dense.size(); ++d) fv.dense[d] = rng.normal();
        X.push_back(fv);
        y.push_back(i % 2);
    }
    LinearHyper hyper;
    hyper.epochs = 5;
    const TfidfModel tfidf = fit_tfidf({{"a", "b"}, {"c"}});
    const LinearModel model =
        train_linear(X, y, Task::classify, hyper, tfidf.vocab_size());

    // The sparse block of these feature vectors is empty, so training only
    // shapes the dense slots; the round-trip must still carry all columns.
    const auto [loaded, loaded_tfidf] =
        linear_model_from_json(linear_model_to_json(model, tfidf));
    CHECK(loaded.task == model.task);
    CHECK(loaded.weights == model.weights);
    CHECK(loaded.bias == model.bias);
    CHECK(loaded_tfidf.vocabulary == tfidf.vocabulary);

    const NeuralParams params = nn_init(Task::regress, 3, 4, 5);
    const NeuralParams reloaded =
        neural_model_from_json(neural_model_to_json(params));
    CHECK(reloaded.task == params.task);
    CHECK(reloaded.d == params.d);
    CHECK(reloaded.h == params.h);
    CHECK(reloaded.w1 == params.w1);
    CHECK(reloaded.b2 == params.b2);

    CHECK_THROWS_AS(neural_model_from_json("{}"), SchemaError);
    CHECK_THROWS_AS(linear_model_from_json("{]"), ParseError);
}

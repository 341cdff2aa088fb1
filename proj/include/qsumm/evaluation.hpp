#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsumm/corpus.hpp"
#include "qsumm/features.hpp"
#include "qsumm/labelling.hpp"
#include "qsumm/models.hpp"
#include "qsumm/policy_rl.hpp"

namespace qsumm {

/// Sample Pearson correlation. Throws UndefinedCorrelationError when either
/// variable is constant, std::invalid_argument for length mismatches or
/// fewer than two observations.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Average (fractional) ranks of the values, 1-based; ties share the mean
/// of the ranks they occupy.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// Kendall tau-a: (concordant - discordant) / (n(n-1)/2); tied pairs count
/// as neither, the denominator stays n(n-1)/2.
double kendall(std::span<const double> xs, std::span<const double> ys);

/// Observations grouped into independent sets; only within-group pairs
/// enter the revised Kendall correlation.
struct GroupedSeries {
    struct Row {
        std::string group_id;
        double x = 0.0;
        double y = 0.0;
    };
    std::vector<Row> rows;
};

/// sum_i (C_i - D_i) / sum_i n_i(n_i-1)/2 over the groups. Throws
/// std::invalid_argument when no group contributes a pair.
double revised_kendall(const GroupedSeries& series);

/// One run's evaluation scores: six ROUGE columns plus the averaged human
/// score, keyed by evaluation set and run.
struct CorrelationRow {
    std::string set_id;
    std::string run_id;
    double r2_p = 0.0, r2_r = 0.0, r2_f1 = 0.0;
    double su4_p = 0.0, su4_r = 0.0, su4_f1 = 0.0;
    double human_avg = 0.0;
};

inline constexpr std::array<const char*, 6> kCorrelationMetricNames = {
    "rouge2_precision", "rouge2_recall", "rouge2_f1",
    "rougesu4_precision", "rougesu4_recall", "rougesu4_f1",
};
inline constexpr std::array<const char*, 4> kCorrelationColumnNames = {
    "pearson", "spearman", "kendall", "revised_kendall"};

/// 6x4 matrix of correlations between each ROUGE column and the human
/// average. Undefined cells (constant variables) stay empty.
struct CorrelationReport {
    std::array<std::array<std::optional<double>, 4>, 6> cells{};

    std::string to_csv() const;
};

CorrelationReport correlation_report(const std::vector<CorrelationRow>& rows);

/// Parses the evaluation CSV: header
/// set_id,run_id,r2_p,r2_r,r2_f1,su4_p,su4_r,su4_f1,human_avg.
std::vector<CorrelationRow> parse_correlation_csv(std::string_view text);

/// Standalone SVG scatterplot with axes and labels; byte-deterministic for
/// fixed input. points must be non-empty.
std::string scatter_svg_string(
    const std::vector<std::pair<double, double>>& points,
    const std::string& x_label, const std::string& y_label);
void scatter_svg(const std::vector<std::pair<double, double>>& points,
                 const std::string& x_label, const std::string& y_label,
                 const std::string& out_path);

enum class Method { firstn, cosine, oracle, svc, svr, nnc, nnr, rl };

Method parse_method(std::string_view name);
std::string_view method_name(Method method);

/// Everything needed to train and run one summariser.
struct MethodSpec {
    Method method = Method::firstn;
    LabellingPolicy policy = LabellingPolicy::make_top_m(5); // svc/nnc labels
    bool score_labels = false; // nnc trained on ROUGE-SU4 F1 targets
    LinearHyper linear;        // svc/svr
    TrainConfig nn;            // nnc/nnr
    int nn_hidden = 50;
    RLConfig rl;               // rl
    SummaryLengthPolicy lengths;

    std::string labelling_name() const;
    bool needs_embeddings() const;
    bool is_trained() const;
};

/// Cross-validation result: per-fold mean summary-level ROUGE-SU4 F1, their
/// mean and population standard deviation (divisor k), plus the effective
/// configuration so the run can be reproduced.
struct CrossValReport {
    std::string method;
    std::string labelling;
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<double> fold_means;
    double mean = 0.0;
    double stdev = 0.0;
    std::vector<std::pair<std::string, std::string>> config_echo;

    /// Deterministic text rendering; identical runs give identical bytes.
    std::string render() const;
};

/// Table-3-style experiment: k seeded folds; per fold the tf.idf model and
/// the summariser are fit on the training split and every validation sample
/// is summarised with the per-type lengths and scored with ROUGE-SU4 F1
/// (max_gap 4, best reference). jobs > 1 evaluates folds concurrently
/// without changing the result. Samples without references are rejected
/// up front, listing their ids.
CrossValReport crossval(const std::vector<Sample>& corpus,
                        const MethodSpec& spec, int k, std::uint64_t seed,
                        const EmbeddingTable* table, int jobs = 1);

/// Summarises one sample with a trained-per-call pipeline; shared by
/// crossval folds and the CLI. Exposed mainly for tests.
struct TrainedSummariser {
    MethodSpec spec;
    TfidfModel tfidf;                 // fit on the training split
    LinearModel linear;               // svc/svr
    NeuralParams neural;              // nnc/nnr
    PolicyParams policy;              // rl
    const EmbeddingTable* table = nullptr;

    Summary summarise(const Sample& sample) const;
};

/// Fits the spec's summariser on the given training samples.
TrainedSummariser train_summariser(const MethodSpec& spec,
                                   const std::vector<const Sample*>& train,
                                   const EmbeddingTable* table,
                                   std::uint64_t seed);

/// Mean summary-level ROUGE-SU4 F1 of candidate summaries over samples.
double mean_su4_f1(const TrainedSummariser& summariser,
                   const std::vector<const Sample*>& samples);

} // namespace qsumm

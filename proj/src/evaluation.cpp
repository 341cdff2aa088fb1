#include "qsumm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qsumm/errors.hpp"
#include "qsumm/numtext.hpp"
#include "qsumm/rng.hpp"
#include "qsumm/rouge.hpp"

namespace qsumm {

namespace {

void check_same_length(std::span<const double> xs, std::span<const double> ys,
                       const char* who) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument(std::string(who) + ": length mismatch");
    }
    if (xs.size() < 2) {
        throw std::invalid_argument(std::string(who) +
                                    ": need at least two observations");
    }
}

// Concordant/discordant pair counts; ties in either variable count as
// neither.
std::pair<long long, long long> pair_counts(std::span<const double> xs,
                                            std::span<const double> ys) {
    long long concordant = 0;
    long long discordant = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double product = (xs[i] - xs[j]) * (ys[i] - ys[j]);
            if (product > 0.0) ++concordant;
            else if (product < 0.0) ++discordant;
        }
    }
    return {concordant, discordant};
}

std::string escape_xml(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(begin));
            break;
        }
        fields.emplace_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
    for (std::string& field : fields) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
            field.pop_back();
        }
        std::size_t lead = 0;
        while (lead < field.size() && field[lead] == ' ') ++lead;
        field.erase(0, lead);
    }
    return fields;
}

} // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
    check_same_length(xs, ys, "pearson");
    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw UndefinedCorrelationError(
            "pearson: undefined for a constant variable");
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<double> ranks(values.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() &&
               values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // Positions i..j (0-based) share the mean of ranks i+1..j+1.
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    check_same_length(xs, ys, "spearman");
    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    return pearson(rx, ry);
}

double kendall(std::span<const double> xs, std::span<const double> ys) {
    check_same_length(xs, ys, "kendall");
    const auto [concordant, discordant] = pair_counts(xs, ys);
    const double n = static_cast<double>(xs.size());
    return static_cast<double>(concordant - discordant) / (n * (n - 1.0) / 2.0);
}

double revised_kendall(const GroupedSeries& series) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < series.rows.size(); ++i) {
        groups[series.rows[i].group_id].push_back(i);
    }
    long long numerator = 0;
    long long denominator = 0;
    for (const auto& [group_id, members] : groups) {
        const std::size_t n = members.size();
        if (n < 2) continue;
        std::vector<double> xs;
        std::vector<double> ys;
        xs.reserve(n);
        ys.reserve(n);
        for (std::size_t index : members) {
            xs.push_back(series.rows[index].x);
            ys.push_back(series.rows[index].y);
        }
        const auto [concordant, discordant] = pair_counts(xs, ys);
        numerator += concordant - discordant;
        denominator += static_cast<long long>(n) * (n - 1) / 2;
    }
    if (denominator == 0) {
        throw std::invalid_argument(
            "revised_kendall: no group contributes a pair");
    }
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

CorrelationReport correlation_report(const std::vector<CorrelationRow>& rows) {
    if (rows.size() < 2) {
        throw std::invalid_argument("correlation_report: need at least two rows");
    }
    std::array<std::vector<double>, 6> metric_columns;
    std::vector<double> human;
    human.reserve(rows.size());
    for (const CorrelationRow& row : rows) {
        metric_columns[0].push_back(row.r2_p);
        metric_columns[1].push_back(row.r2_r);
        metric_columns[2].push_back(row.r2_f1);
        metric_columns[3].push_back(row.su4_p);
        metric_columns[4].push_back(row.su4_r);
        metric_columns[5].push_back(row.su4_f1);
        human.push_back(row.human_avg);
    }
    CorrelationReport report;
    for (std::size_t m = 0; m < 6; ++m) {
        const std::vector<double>& xs = metric_columns[m];
        try {
            report.cells[m][0] = pearson(xs, human);
        } catch (const UndefinedCorrelationError&) {
        }
        try {
            report.cells[m][1] = spearman(xs, human);
        } catch (const UndefinedCorrelationError&) {
        }
        report.cells[m][2] = kendall(xs, human);
        GroupedSeries grouped;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            grouped.rows.push_back({rows[i].set_id, xs[i], human[i]});
        }
        try {
            report.cells[m][3] = revised_kendall(grouped);
        } catch (const std::invalid_argument&) {
        }
    }
    return report;
}

std::string CorrelationReport::to_csv() const {
    std::string out = "metric";
    for (const char* column : kCorrelationColumnNames) {
        out += ',';
        out += column;
    }
    out += '\n';
    for (std::size_t m = 0; m < 6; ++m) {
        out += kCorrelationMetricNames[m];
        for (std::size_t c = 0; c < 4; ++c) {
            out += ',';
            out += cells[m][c] ? double_to_text(*cells[m][c]) : "undefined";
        }
        out += '\n';
    }
    return out;
}

std::vector<CorrelationRow> parse_correlation_csv(std::string_view text) {
    static constexpr std::array<const char*, 9> kHeader = {
        "set_id", "run_id", "r2_p", "r2_r", "r2_f1",
        "su4_p",  "su4_r",  "su4_f1", "human_avg"};
    std::vector<CorrelationRow> rows;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    bool saw_header = false;
    while (begin < text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(begin, end - begin);
        begin = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (!saw_header) {
            if (fields.size() != kHeader.size() ||
                !std::equal(fields.begin(), fields.end(), kHeader.begin())) {
                throw FormatError(
                    "correlation CSV line 1: expected header "
                    "set_id,run_id,r2_p,r2_r,r2_f1,su4_p,su4_r,su4_f1,human_avg");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != kHeader.size()) {
            throw FormatError("correlation CSV line " + std::to_string(line_no) +
                              ": expected 9 fields, got " +
                              std::to_string(fields.size()));
        }
        const std::string context =
            "correlation CSV line " + std::to_string(line_no);
        CorrelationRow row;
        row.set_id = fields[0];
        row.run_id = fields[1];
        row.r2_p = parse_double_field(fields[2], context);
        row.r2_r = parse_double_field(fields[3], context);
        row.r2_f1 = parse_double_field(fields[4], context);
        row.su4_p = parse_double_field(fields[5], context);
        row.su4_r = parse_double_field(fields[6], context);
        row.su4_f1 = parse_double_field(fields[7], context);
        row.human_avg = parse_double_field(fields[8], context);
        rows.push_back(std::move(row));
    }
    if (!saw_header) {
        throw FormatError("correlation CSV: missing header line");
    }
    return rows;
}

std::string scatter_svg_string(
    const std::vector<std::pair<double, double>>& points,
    const std::string& x_label, const std::string& y_label) {
    if (points.empty()) {
        throw std::invalid_argument("scatter_svg: need at least one point");
    }
    constexpr double width = 640.0;
    constexpr double height = 480.0;
    constexpr double left = 70.0;
    constexpr double right = 620.0;
    constexpr double top = 20.0;
    constexpr double bottom = 430.0;

    double x_min = points.front().first;
    double x_max = x_min;
    double y_min = points.front().second;
    double y_max = y_min;
    for (const auto& [x, y] : points) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    if (x_min == x_max) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_min == y_max) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    const auto x_pix = [&](double x) {
        return left + (x - x_min) / (x_max - x_min) * (right - left);
    };
    const auto y_pix = [&](double y) {
        return bottom - (y - y_min) / (y_max - y_min) * (bottom - top);
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"480\" viewBox=\"0 0 640 480\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" "
           "fill=\"white\"/>\n";
    svg += "<line x1=\"70\" y1=\"430\" x2=\"620\" y2=\"430\" "
           "stroke=\"black\"/>\n";
    svg += "<line x1=\"70\" y1=\"20\" x2=\"70\" y2=\"430\" "
           "stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double fraction = tick / 4.0;
        const double x_value = x_min + fraction * (x_max - x_min);
        const double y_value = y_min + fraction * (y_max - y_min);
        const std::string tx = double_to_fixed(x_pix(x_value), 3);
        const std::string ty = double_to_fixed(y_pix(y_value), 3);
        svg += "<line x1=\"" + tx + "\" y1=\"430\" x2=\"" + tx +
               "\" y2=\"436\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + tx +
               "\" y=\"450\" font-size=\"12\" text-anchor=\"middle\">" +
               double_to_fixed(x_value, 3) + "</text>\n";
        svg += "<line x1=\"64\" y1=\"" + ty + "\" x2=\"70\" y2=\"" + ty +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"60\" y=\"" + ty +
               "\" font-size=\"12\" text-anchor=\"end\" "
               "dominant-baseline=\"middle\">" +
               double_to_fixed(y_value, 3) + "</text>\n";
    }
    svg += "<text x=\"345\" y=\"472\" font-size=\"14\" "
           "text-anchor=\"middle\">" +
           escape_xml(x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"225\" font-size=\"14\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 16 225)\">" +
           escape_xml(y_label) + "</text>\n";
    for (const auto& [x, y] : points) {
        svg += "<circle cx=\"" + double_to_fixed(x_pix(x), 3) + "\" cy=\"" +
               double_to_fixed(y_pix(y), 3) +
               "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
    }
    svg += "</svg>\n";
    (void)width;
    (void)height;
    return svg;
}

void scatter_svg(const std::vector<std::pair<double, double>>& points,
                 const std::string& x_label, const std::string& y_label,
                 const std::string& out_path) {
    const std::string svg = scatter_svg_string(points, x_label, y_label);
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw IoError("cannot write " + out_path);
    file.write(svg.data(), static_cast<std::streamsize>(svg.size()));
    if (!file) throw IoError("write failed: " + out_path);
}

Method parse_method(std::string_view name) {
    if (name == "firstn") return Method::firstn;
    if (name == "cosine") return Method::cosine;
    if (name == "oracle") return Method::oracle;
    if (name == "svc") return Method::svc;
    if (name == "svr") return Method::svr;
    if (name == "nnc") return Method::nnc;
    if (name == "nnr") return Method::nnr;
    if (name == "rl") return Method::rl;
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method method) {
    switch (method) {
        case Method::firstn: return "firstn";
        case Method::cosine: return "cosine";
        case Method::oracle: return "oracle";
        case Method::svc: return "svc";
        case Method::svr: return "svr";
        case Method::nnc: return "nnc";
        case Method::nnr: return "nnr";
        case Method::rl: return "rl";
    }
    return "firstn";
}

std::string MethodSpec::labelling_name() const {
    switch (method) {
        case Method::svc: return policy.name();
        case Method::nnc: return score_labels ? "su4f1" : policy.name();
        case Method::svr:
        case Method::nnr: return "su4f1";
        default: return "none";
    }
}

bool MethodSpec::needs_embeddings() const {
    switch (method) {
        case Method::svc:
        case Method::svr:
        case Method::nnc:
        case Method::nnr: return true;
        case Method::rl: return rl.feature_mode == PolicyFeatureMode::embeddings;
        default: return false;
    }
}

bool MethodSpec::is_trained() const {
    switch (method) {
        case Method::svc:
        case Method::svr:
        case Method::nnc:
        case Method::nnr:
        case Method::rl: return true;
        default: return false;
    }
}

namespace {

bool uses_tfidf(const MethodSpec& spec) {
    switch (spec.method) {
        case Method::cosine:
        case Method::svc:
        case Method::svr: return true;
        case Method::rl: return spec.rl.feature_mode == PolicyFeatureMode::tfidf;
        default: return false;
    }
}

} // namespace

TrainedSummariser train_summariser(const MethodSpec& spec,
                                   const std::vector<const Sample*>& train,
                                   const EmbeddingTable* table,
                                   std::uint64_t seed) {
    if (spec.needs_embeddings() && !table) {
        throw std::invalid_argument(std::string("method '") +
                                    std::string(method_name(spec.method)) +
                                    "' requires an embedding table");
    }
    TrainedSummariser out;
    out.spec = spec;
    out.table = table;

    if (uses_tfidf(spec)) {
        if (train.empty()) {
            throw std::invalid_argument("train_summariser: no training samples");
        }
        std::vector<std::vector<std::string>> documents;
        for (const Sample* sample : train) {
            for (const Sentence& sentence : sample->sentences) {
                documents.push_back(sentence.tokens);
            }
        }
        out.tfidf = fit_tfidf(documents);
    }

    switch (spec.method) {
        case Method::firstn:
        case Method::cosine:
        case Method::oracle: break;
        case Method::svc:
        case Method::svr: {
            const Task task =
                spec.method == Method::svc ? Task::classify : Task::regress;
            std::vector<FeatureVector> X;
            std::vector<double> y;
            for (const Sample* sample : train) {
                const std::vector<double> scores = score_sentences(*sample);
                const std::vector<bool> labels =
                    task == Task::classify
                        ? apply_policy(scores, spec.policy)
                        : std::vector<bool>();
                for (const Sentence& sentence : sample->sentences) {
                    const std::size_t i = static_cast<std::size_t>(sentence.index);
                    X.push_back(
                        build_features(*sample, sentence.index, out.tfidf, *table));
                    y.push_back(task == Task::classify ? (labels[i] ? 1.0 : 0.0)
                                                       : scores[i]);
                }
            }
            LinearHyper hyper = spec.linear;
            hyper.seed = seed;
            out.linear = train_linear(X, y, task, hyper, out.tfidf.vocab_size());
            break;
        }
        case Method::nnc:
        case Method::nnr: {
            const Task task =
                spec.method == Method::nnc ? Task::classify : Task::regress;
            std::vector<NnExample> dataset;
            for (const Sample* sample : train) {
                const std::vector<double> scores = score_sentences(*sample);
                const std::vector<bool> labels =
                    (task == Task::classify && !spec.score_labels)
                        ? apply_policy(scores, spec.policy)
                        : std::vector<bool>();
                const std::vector<std::string> q_tokens = sample->question_tokens();
                for (const Sentence& sentence : sample->sentences) {
                    const std::size_t i = static_cast<std::size_t>(sentence.index);
                    NnExample example;
                    example.q_tokens = q_tokens;
                    example.s_tokens = sentence.tokens;
                    example.position = sentence_position(*sample, sentence.index);
                    if (task == Task::regress || spec.score_labels) {
                        example.target = scores[i];
                    } else {
                        example.target = labels[i] ? 1.0 : 0.0;
                    }
                    dataset.push_back(std::move(example));
                }
            }
            TrainConfig config = spec.nn;
            config.seed = seed;
            const NeuralParams init =
                nn_init(task, table->dim, spec.nn_hidden, derive_seed(seed, 1));
            out.neural = nn_train(dataset, init, config, *table);
            break;
        }
        case Method::rl: {
            std::vector<Sample> owned;
            owned.reserve(train.size());
            for (const Sample* sample : train) owned.push_back(*sample);
            RLConfig config = spec.rl;
            config.seed = seed;
            PolicyFeaturizer featurizer;
            featurizer.mode = config.feature_mode;
            featurizer.tfidf = &out.tfidf;
            featurizer.table = table;
            out.policy = reinforce_train(owned, featurizer, config);
            break;
        }
    }
    return out;
}

Summary TrainedSummariser::summarise(const Sample& sample) const {
    const int n = spec.lengths.n_for(sample.question_type);
    switch (spec.method) {
        case Method::firstn: return summarise_firstn(sample, n);
        case Method::cosine: return summarise_cosine(sample, tfidf, n);
        case Method::oracle:
            return select_top_scores(sample, score_sentences(sample), n);
        case Method::svc:
            return summarise_classification(linear, sample, n, tfidf, *table);
        case Method::svr:
            return summarise_regression(linear, sample, n, tfidf, *table);
        case Method::nnc:
            return summarise_classification(neural, sample, n, *table);
        case Method::nnr:
            return summarise_regression(neural, sample, n, *table);
        case Method::rl: {
            PolicyFeaturizer featurizer;
            featurizer.mode = spec.rl.feature_mode;
            featurizer.tfidf = &tfidf;
            featurizer.table = table;
            return summarise_policy(policy, sample, featurizer, n);
        }
    }
    return summarise_firstn(sample, n);
}

double mean_su4_f1(const TrainedSummariser& summariser,
                   const std::vector<const Sample*>& samples) {
    if (samples.empty()) return 0.0;
    double sum = 0.0;
    for (const Sample* sample : samples) {
        const Summary summary = summariser.summarise(*sample);
        std::vector<std::string> candidate;
        for (int index : summary.selected) {
            const auto& tokens =
                sample->sentences[static_cast<std::size_t>(index)].tokens;
            candidate.insert(candidate.end(), tokens.begin(), tokens.end());
        }
        sum += rouge_su(candidate, sample->reference_tokens(), 4).f1;
    }
    return sum / static_cast<double>(samples.size());
}

namespace {

std::vector<std::pair<std::string, std::string>> build_config_echo(
    const MethodSpec& spec, int k, std::uint64_t seed, int jobs) {
    std::vector<std::pair<std::string, std::string>> echo;
    echo.emplace_back("method", std::string(method_name(spec.method)));
    echo.emplace_back("labelling", spec.labelling_name());
    echo.emplace_back("k", std::to_string(k));
    echo.emplace_back("seed", std::to_string(seed));
    echo.emplace_back("jobs", std::to_string(jobs));
    switch (spec.method) {
        case Method::svc:
            echo.emplace_back("c", double_to_text(spec.linear.c));
            echo.emplace_back("epochs", std::to_string(spec.linear.epochs));
            echo.emplace_back("lr", double_to_text(spec.linear.lr));
            break;
        case Method::svr:
            echo.emplace_back("c", double_to_text(spec.linear.c));
            echo.emplace_back("epochs", std::to_string(spec.linear.epochs));
            echo.emplace_back("lr", double_to_text(spec.linear.lr));
            echo.emplace_back("epsilon", double_to_text(spec.linear.epsilon));
            break;
        case Method::nnc:
        case Method::nnr:
            echo.emplace_back("hidden_width", std::to_string(spec.nn_hidden));
            echo.emplace_back("batch_size", std::to_string(spec.nn.batch_size));
            echo.emplace_back("epochs", std::to_string(spec.nn.epochs));
            echo.emplace_back("lr", double_to_text(spec.nn.lr));
            break;
        case Method::rl:
            echo.emplace_back("hidden_width", std::to_string(spec.rl.h));
            echo.emplace_back("episodes", std::to_string(spec.rl.episodes));
            echo.emplace_back("lr", double_to_text(spec.rl.lr));
            echo.emplace_back("baseline_decay",
                              double_to_text(spec.rl.baseline_decay));
            echo.emplace_back("reward",
                              spec.rl.reward_scheme == RewardScheme::su4_f1
                                  ? "su4f1"
                                  : "mean2l");
            echo.emplace_back("features",
                              spec.rl.feature_mode == PolicyFeatureMode::tfidf
                                  ? "tfidf"
                                  : "embeddings");
            break;
        default: break;
    }
    return echo;
}

} // namespace

CrossValReport crossval(const std::vector<Sample>& corpus,
                        const MethodSpec& spec, int k, std::uint64_t seed,
                        const EmbeddingTable* table, int jobs) {
    std::string missing;
    for (const Sample& sample : corpus) {
        if (sample.references.empty()) {
            if (!missing.empty()) missing += ", ";
            missing += sample.id;
        }
    }
    if (!missing.empty()) {
        throw Error("crossval: samples without references: " + missing);
    }
    if (spec.needs_embeddings() && !table) {
        throw std::invalid_argument(std::string("method '") +
                                    std::string(method_name(spec.method)) +
                                    "' requires an embedding table");
    }

    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const Sample& sample : corpus) ids.push_back(sample.id);
    const FoldAssignment folds = make_folds(ids, k, seed);

    std::vector<double> fold_means(static_cast<std::size_t>(k), 0.0);
    const auto run_fold = [&](int fold) {
        std::vector<const Sample*> train;
        std::vector<const Sample*> val;
        for (const Sample& sample : corpus) {
            (folds.assignment.at(sample.id) == fold ? val : train)
                .push_back(&sample);
        }
        const TrainedSummariser summariser = train_summariser(
            spec, train, table, derive_seed(seed, static_cast<std::uint64_t>(fold)));
        fold_means[static_cast<std::size_t>(fold)] = mean_su4_f1(summariser, val);
    };

    if (jobs <= 1) {
        for (int fold = 0; fold < k; ++fold) run_fold(fold);
    } else {
        int fold = 0;
        while (fold < k) {
            std::vector<std::thread> workers;
            for (int j = 0; j < jobs && fold < k; ++j, ++fold) {
                workers.emplace_back(run_fold, fold);
            }
            for (std::thread& worker : workers) worker.join();
        }
    }

    CrossValReport report;
    report.method = method_name(spec.method);
    report.labelling = spec.labelling_name();
    report.k = k;
    report.seed = seed;
    report.fold_means = fold_means;
    double sum = 0.0;
    for (double value : fold_means) sum += value;
    report.mean = sum / static_cast<double>(k);
    double variance = 0.0;
    for (double value : fold_means) {
        const double delta = value - report.mean;
        variance += delta * delta;
    }
    report.stdev = std::sqrt(variance / static_cast<double>(k));
    report.config_echo = build_config_echo(spec, k, seed, jobs);
    return report;
}

std::string CrossValReport::render() const {
    std::string out;
    out += "# qsumm crossval report\n";
    out += "# metric: summary-level ROUGE-SU4 F1; stdev is the population "
           "standard deviation over folds\n";
    out += "# config\n";
    for (const auto& [key, value] : config_echo) {
        out += key + ": " + value + "\n";
    }
    out += "# end config\n";
    out += "fold,su4_f1\n";
    for (std::size_t fold = 0; fold < fold_means.size(); ++fold) {
        out += std::to_string(fold) + "," + double_to_text(fold_means[fold]) + "\n";
    }
    out += "mean," + double_to_text(mean) + "\n";
    out += "stdev," + double_to_text(stdev) + "\n";
    return out;
}

} // namespace qsumm

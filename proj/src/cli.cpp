#include "qsumm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsumm/config.hpp"
#include "qsumm/corpus.hpp"
#include "qsumm/errors.hpp"
#include "qsumm/evaluation.hpp"
#include "qsumm/labelling.hpp"
#include "qsumm/models.hpp"
#include "qsumm/numtext.hpp"
#include "qsumm/policy_rl.hpp"
#include "qsumm/presets.hpp"
#include "qsumm/rouge.hpp"
#include "qsumm/summarise.hpp"
#include "qsumm/text.hpp"

namespace qsumm::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path);
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) throw IoError("write failed: " + path);
}

void emit(const std::string& out_path, std::string_view content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_file(out_path, content);
    }
}

void require_references(const std::vector<Sample>& samples, const char* what) {
    std::string missing;
    for (const Sample& sample : samples) {
        if (sample.references.empty()) {
            if (!missing.empty()) missing += ", ";
            missing += sample.id;
        }
    }
    if (!missing.empty()) {
        throw Error(std::string(what) + ": samples without references: " + missing);
    }
}

/// Flag-level overrides; only values the user actually passed are set.
struct SpecOverrides {
    std::optional<std::string> labelling;
    std::optional<std::uint64_t> seed;
    std::optional<int> batch_size;
    std::optional<int> epochs;
    std::optional<int> hidden_width;
    std::optional<int> episodes;
    std::optional<double> lr;
    std::optional<double> c;
    std::optional<double> epsilon;
    std::optional<double> baseline_decay;
    std::optional<std::string> reward;
    std::optional<std::string> features;
};

struct ResolvedSpec {
    MethodSpec spec;
    std::uint64_t seed = 1;
    int required_embedding_dim = 0; // 0 = no constraint
    int jobs = 1;
    int k = 10;
};

void apply_labelling(MethodSpec& spec, const std::string& labelling) {
    const bool classifier =
        spec.method == Method::svc || spec.method == Method::nnc;
    if (labelling == "su4f1") {
        if (spec.method == Method::nnc || spec.method == Method::nnr ||
            spec.method == Method::svr) {
            spec.score_labels = true;
            return;
        }
        throw ConfigError("labelling 'su4f1' is not valid for method '" +
                          std::string(method_name(spec.method)) + "'");
    }
    if (!classifier) {
        throw ConfigError("method '" + std::string(method_name(spec.method)) +
                          "' does not take a labelling policy");
    }
    spec.score_labels = false;
    spec.policy = LabellingPolicy::parse(labelling);
}

RewardScheme parse_reward(const std::string& name) {
    if (name == "su4f1") return RewardScheme::su4_f1;
    if (name == "mean2l") return RewardScheme::mean_2_l_f1;
    throw ConfigError("unknown reward '" + name +
                      "' (expected su4f1 or mean2l)");
}

ResolvedSpec resolve_spec(Method method, const MethodSpec& base,
                          const RunConfig& config, const SpecOverrides& flags) {
    ResolvedSpec resolved;
    resolved.spec = base;
    resolved.spec.method = method;
    MethodSpec& spec = resolved.spec;

    const auto pick_int = [](std::optional<int> flag, std::optional<int> cfg,
                             int fallback) {
        return flag ? *flag : (cfg ? *cfg : fallback);
    };
    const auto pick_double = [](std::optional<double> flag,
                                std::optional<double> cfg, double fallback) {
        return flag ? *flag : (cfg ? *cfg : fallback);
    };

    std::optional<std::string> labelling =
        flags.labelling ? flags.labelling : config.labelling;
    if (labelling) apply_labelling(spec, *labelling);

    spec.linear.c = pick_double(flags.c, config.c, spec.linear.c);
    spec.linear.epsilon =
        pick_double(flags.epsilon, config.epsilon, spec.linear.epsilon);
    spec.nn_hidden = pick_int(flags.hidden_width, config.hidden_width,
                              spec.nn_hidden);
    spec.nn.batch_size =
        pick_int(flags.batch_size, config.batch_size, spec.nn.batch_size);
    spec.rl.h = pick_int(flags.hidden_width, config.hidden_width, spec.rl.h);
    spec.rl.episodes = pick_int(flags.episodes, config.episodes, spec.rl.episodes);
    spec.rl.baseline_decay = pick_double(flags.baseline_decay,
                                         config.baseline_decay,
                                         spec.rl.baseline_decay);

    // epochs and lr land on whichever trainer the method uses.
    spec.linear.epochs = pick_int(flags.epochs, config.epochs, spec.linear.epochs);
    spec.nn.epochs = pick_int(flags.epochs, config.epochs, spec.nn.epochs);
    spec.linear.lr = pick_double(flags.lr, config.lr, spec.linear.lr);
    spec.nn.lr = pick_double(flags.lr, config.lr, spec.nn.lr);
    spec.rl.lr = pick_double(flags.lr, config.lr, spec.rl.lr);

    const std::optional<std::string> reward =
        flags.reward ? flags.reward : config.reward;
    if (reward) {
        if (method != Method::rl) {
            throw ConfigError("reward schemes only apply to method 'rl'");
        }
        spec.rl.reward_scheme = parse_reward(*reward);
    }

    const std::optional<std::string> features =
        flags.features ? flags.features : config.features;
    if (features) {
        if (method != Method::rl) {
            throw ConfigError("feature modes only apply to method 'rl'");
        }
        if (*features == "tfidf") {
            spec.rl.feature_mode = PolicyFeatureMode::tfidf;
        } else if (*features == "emb100") {
            spec.rl.feature_mode = PolicyFeatureMode::embeddings;
            resolved.required_embedding_dim = 100;
        } else if (*features == "emb200") {
            spec.rl.feature_mode = PolicyFeatureMode::embeddings;
            resolved.required_embedding_dim = 200;
        } else {
            throw ConfigError("unknown feature mode '" + *features + "'");
        }
    }

    resolved.seed = flags.seed ? *flags.seed : config.seed.value_or(1);
    spec.linear.seed = resolved.seed;
    spec.nn.seed = resolved.seed;
    spec.rl.seed = resolved.seed;
    resolved.jobs = config.jobs.value_or(1);
    resolved.k = config.k.value_or(10);
    return resolved;
}

EmbeddingTable load_table_checked(const std::string& path, int required_dim) {
    EmbeddingTable table = load_embeddings(path);
    if (required_dim > 0 && table.dim != required_dim) {
        throw ConfigError("feature mode requires " +
                          std::to_string(required_dim) +
                          "-dimensional embeddings, file has dimension " +
                          std::to_string(table.dim));
    }
    return table;
}

std::vector<const Sample*> sample_ptrs(const std::vector<Sample>& samples) {
    std::vector<const Sample*> out;
    out.reserve(samples.size());
    for (const Sample& sample : samples) out.push_back(&sample);
    return out;
}

// --- subcommand bodies -------------------------------------------------

int cmd_ingest(const std::string& in, const std::string& out) {
    const std::vector<Sample> samples = ingest_bioasq(read_file(in));
    emit(out, to_jsonl(samples));
    return 0;
}

int cmd_label(const std::string& in, const std::string& policy_text,
              const std::string& out) {
    const std::vector<Sample> samples = from_jsonl(read_file(in));
    require_references(samples, "label");
    const LabellingPolicy policy = LabellingPolicy::parse(policy_text);
    std::string csv = "sample_id,sentence_index,score,label\n";
    for (const Sample& sample : samples) {
        const std::vector<double> scores = score_sentences(sample);
        const std::vector<bool> labels = apply_policy(scores, policy);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            csv += sample.id + "," + std::to_string(i) + "," +
                   double_to_text(scores[i]) + "," + (labels[i] ? "1" : "0") +
                   "\n";
        }
    }
    emit(out, csv);
    return 0;
}

int cmd_rouge(const std::string& cand_path,
              const std::vector<std::string>& ref_paths,
              const std::string& out) {
    const std::vector<std::string> candidate = tokenize(read_file(cand_path));
    std::vector<std::vector<std::string>> references;
    references.reserve(ref_paths.size());
    for (const std::string& path : ref_paths) {
        references.push_back(tokenize(read_file(path)));
    }
    std::string csv = "metric,precision,recall,f1\n";
    const auto row = [&](const char* name, const RougeScore& score) {
        csv += std::string(name) + "," + double_to_text(score.precision) + "," +
               double_to_text(score.recall) + "," + double_to_text(score.f1) +
               "\n";
    };
    row("rouge2", rouge_n(candidate, references, 2));
    row("rougeL", rouge_l(candidate, references));
    row("rougeSU4", rouge_su(candidate, references, 4));
    emit(out, csv);
    return 0;
}

int cmd_train(Method method, const ResolvedSpec& resolved,
              const std::string& in, const std::string& out,
              const std::string& embeddings_path) {
    const std::vector<Sample> samples = from_jsonl(read_file(in));
    require_references(samples, "train");
    if (!resolved.spec.is_trained()) {
        throw ConfigError("method '" + std::string(method_name(method)) +
                          "' has no trainable parameters");
    }

    EmbeddingTable table;
    const bool needs_table = resolved.spec.needs_embeddings();
    if (needs_table) {
        if (embeddings_path.empty()) {
            throw ConfigError("method '" + std::string(method_name(method)) +
                              "' requires --embeddings");
        }
        table = load_table_checked(embeddings_path,
                                   resolved.required_embedding_dim);
    }

    const TrainedSummariser trained =
        train_summariser(resolved.spec, sample_ptrs(samples),
                         needs_table ? &table : nullptr, resolved.seed);

    std::string model_json;
    switch (method) {
        case Method::svc:
        case Method::svr:
            model_json = linear_model_to_json(trained.linear, trained.tfidf);
            break;
        case Method::nnc:
        case Method::nnr:
            model_json = neural_model_to_json(trained.neural);
            break;
        case Method::rl:
            model_json = policy_model_to_json(
                trained.policy, resolved.spec.rl.feature_mode,
                resolved.spec.rl.feature_mode == PolicyFeatureMode::tfidf
                    ? &trained.tfidf
                    : nullptr);
            break;
        default: break;
    }
    write_file(out, model_json);
    return 0;
}

int cmd_summarise(Method method, const std::string& in, const std::string& out,
                  const std::string& model_path,
                  const std::string& embeddings_path) {
    const std::vector<Sample> samples = from_jsonl(read_file(in));
    const SummaryLengthPolicy lengths;

    EmbeddingTable table;
    const EmbeddingTable* table_ptr = nullptr;
    const auto need_table = [&]() {
        if (embeddings_path.empty()) {
            throw ConfigError("method '" + std::string(method_name(method)) +
                              "' requires --embeddings");
        }
        table = load_embeddings(embeddings_path);
        table_ptr = &table;
    };

    TrainedSummariser summariser;
    summariser.spec.method = method;
    switch (method) {
        case Method::firstn: break;
        case Method::oracle:
            require_references(samples, "summarise --method oracle");
            break;
        case Method::cosine: {
            // Unsupervised: the tf.idf model is fit on the input corpus.
            std::vector<std::vector<std::string>> documents;
            for (const Sample& sample : samples) {
                for (const Sentence& sentence : sample.sentences) {
                    documents.push_back(sentence.tokens);
                }
            }
            if (documents.empty()) {
                throw Error("summarise --method cosine: corpus has no sentences");
            }
            summariser.tfidf = fit_tfidf(documents);
            break;
        }
        case Method::svc:
        case Method::svr: {
            if (model_path.empty()) throw ConfigError("missing --model");
            need_table();
            auto [model, tfidf] = linear_model_from_json(read_file(model_path));
            const Task expected =
                method == Method::svc ? Task::classify : Task::regress;
            if (model.task != expected) {
                throw SchemaError("model task does not match method '" +
                                  std::string(method_name(method)) + "'");
            }
            summariser.linear = std::move(model);
            summariser.tfidf = std::move(tfidf);
            break;
        }
        case Method::nnc:
        case Method::nnr: {
            if (model_path.empty()) throw ConfigError("missing --model");
            need_table();
            NeuralParams params = neural_model_from_json(read_file(model_path));
            const Task expected =
                method == Method::nnc ? Task::classify : Task::regress;
            if (params.task != expected) {
                throw SchemaError("model task does not match method '" +
                                  std::string(method_name(method)) + "'");
            }
            if (params.d != table.dim) {
                throw SchemaError(
                    "model embedding dimension " + std::to_string(params.d) +
                    " does not match table dimension " +
                    std::to_string(table.dim));
            }
            summariser.neural = std::move(params);
            break;
        }
        case Method::rl: {
            if (model_path.empty()) throw ConfigError("missing --model");
            PolicyModelFile file = policy_model_from_json(read_file(model_path));
            summariser.spec.rl.feature_mode = file.mode;
            if (file.mode == PolicyFeatureMode::embeddings) need_table();
            summariser.policy = std::move(file.params);
            summariser.tfidf = std::move(file.tfidf);
            break;
        }
    }
    summariser.table = table_ptr;

    std::string jsonl;
    for (const Sample& sample : samples) {
        const Summary summary = summariser.summarise(sample);
        ordered_json line;
        line["sample_id"] = summary.sample_id;
        line["indices"] = summary.selected;
        line["text"] = summary.text;
        jsonl += line.dump();
        jsonl += '\n';
    }
    emit(out, jsonl);
    return 0;
}

int cmd_crossval(const ResolvedSpec& resolved, const std::string& in,
                 const std::string& out, const std::string& embeddings_path,
                 int k, int jobs) {
    const std::vector<Sample> samples = from_jsonl(read_file(in));
    EmbeddingTable table;
    const EmbeddingTable* table_ptr = nullptr;
    if (resolved.spec.needs_embeddings()) {
        if (embeddings_path.empty()) {
            throw ConfigError("method '" +
                              std::string(method_name(resolved.spec.method)) +
                              "' requires --embeddings");
        }
        table = load_table_checked(embeddings_path,
                                   resolved.required_embedding_dim);
        table_ptr = &table;
    }
    const CrossValReport report =
        crossval(samples, resolved.spec, k, resolved.seed, table_ptr, jobs);
    emit(out, report.render());
    return 0;
}

int cmd_correlate(const std::string& in, const std::string& out,
                  const std::string& plots_dir) {
    const std::vector<CorrelationRow> rows =
        parse_correlation_csv(read_file(in));
    const CorrelationReport report = correlation_report(rows);

    std::string text;
    text += "# qsumm correlate report\n";
    text += "# config\n";
    text += "# in: " + in + "\n";
    text += "# plots: " + (plots_dir.empty() ? std::string("none") : plots_dir) +
            "\n";
    text += "# end config\n";
    text += report.to_csv();
    emit(out, text);

    if (!plots_dir.empty()) {
        std::filesystem::create_directories(plots_dir);
        std::array<std::vector<double>, 6> columns;
        std::vector<double> human;
        for (const CorrelationRow& row : rows) {
            columns[0].push_back(row.r2_p);
            columns[1].push_back(row.r2_r);
            columns[2].push_back(row.r2_f1);
            columns[3].push_back(row.su4_p);
            columns[4].push_back(row.su4_r);
            columns[5].push_back(row.su4_f1);
            human.push_back(row.human_avg);
        }
        for (std::size_t m = 0; m < 6; ++m) {
            std::vector<std::pair<double, double>> points;
            points.reserve(human.size());
            for (std::size_t i = 0; i < human.size(); ++i) {
                points.emplace_back(human[i], columns[m][i]);
            }
            const std::string path = plots_dir + "/" +
                                     kCorrelationMetricNames[m] + ".svg";
            scatter_svg(points, "human_avg", kCorrelationMetricNames[m], path);
        }
    }
    return 0;
}

int cmd_preset(const std::string& name, int batch, bool dry_run,
               const RunConfig& config, const SpecOverrides& flags,
               const std::string& train_path, const std::string& in,
               const std::string& out, const std::string& embeddings_path) {
    const RunPreset preset = resolve_preset(name, batch);
    if (dry_run || (train_path.empty() && in.empty() && out.empty())) {
        std::cout << preset.describe();
        return 0;
    }
    if (train_path.empty() || in.empty() || out.empty()) {
        throw ConfigError("preset execution needs --train, --in and --out");
    }
    ResolvedSpec resolved =
        resolve_spec(preset.method, preset.to_method_spec(), config, flags);
    if (preset.method == Method::rl &&
        preset.features == PolicyFeatureMode::embeddings &&
        resolved.required_embedding_dim == 0) {
        resolved.required_embedding_dim = 200; // batch 2 used 200-dim vectors
    }

    const std::vector<Sample> train_samples = from_jsonl(read_file(train_path));
    require_references(train_samples, "preset");
    EmbeddingTable table;
    const EmbeddingTable* table_ptr = nullptr;
    if (resolved.spec.needs_embeddings()) {
        if (embeddings_path.empty()) {
            throw ConfigError("preset '" + name + "' batch " +
                              std::to_string(batch) + " requires --embeddings");
        }
        table = load_table_checked(embeddings_path,
                                   resolved.required_embedding_dim);
        table_ptr = &table;
    }
    TrainedSummariser summariser;
    if (resolved.spec.is_trained() || resolved.spec.method == Method::cosine) {
        summariser = train_summariser(resolved.spec, sample_ptrs(train_samples),
                                      table_ptr, resolved.seed);
    } else {
        summariser.spec = resolved.spec;
    }

    const std::vector<Sample> test_samples = from_jsonl(read_file(in));
    std::string jsonl;
    for (const Sample& sample : test_samples) {
        const Summary summary = summariser.summarise(sample);
        ordered_json line;
        line["sample_id"] = summary.sample_id;
        line["indices"] = summary.selected;
        line["text"] = summary.text;
        jsonl += line.dump();
        jsonl += '\n';
    }
    write_file(out, jsonl);
    return 0;
}

const char* error_category(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const SchemaError*>(&e)) return "schema";
    if (dynamic_cast<const FormatError*>(&e)) return "format";
    if (dynamic_cast<const ConfigError*>(&e)) return "config";
    if (dynamic_cast<const TrainingError*>(&e)) return "training";
    if (dynamic_cast<const IoError*>(&e)) return "io";
    if (dynamic_cast<const UndefinedCorrelationError*>(&e)) return "correlation";
    if (dynamic_cast<const Error*>(&e)) return "data";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "argument";
    return "internal";
}

std::string one_line(std::string message) {
    for (char& c : message) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return message;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"query-based extractive summarisation toolkit"};
    app.require_subcommand(1);

    // ingest
    std::string ingest_in, ingest_out;
    CLI::App* ingest = app.add_subcommand(
        "ingest", "convert BioASQ-style JSON to the canonical corpus JSONL");
    ingest->add_option("--in", ingest_in, "BioASQ JSON file")->required();
    ingest->add_option("--out", ingest_out, "output corpus JSONL (default stdout)");

    // label
    std::string label_in, label_out, label_policy = "topm:5";
    CLI::App* label = app.add_subcommand(
        "label", "per-sentence ROUGE-SU4 F1 scores and binary labels");
    label->add_option("--in", label_in, "corpus JSONL")->required();
    label->add_option("--policy", label_policy,
                      "labelling policy threshold:T or topm:M (default topm:5)");
    label->add_option("--out", label_out, "output CSV (default stdout)");

    // rouge
    std::string rouge_cand, rouge_out;
    std::vector<std::string> rouge_refs;
    CLI::App* rouge = app.add_subcommand(
        "rouge", "score a candidate text file against reference text files");
    rouge->add_option("--cand", rouge_cand, "candidate text file")->required();
    rouge->add_option("--refs", rouge_refs, "reference text file(s)")
        ->required()
        ->delimiter(',');
    rouge->add_option("--out", rouge_out, "output CSV (default stdout)");

    // shared training/evaluation flags
    struct CommonFlags {
        std::string method;
        std::string in;
        std::string out;
        std::string embeddings;
        std::string config_path;
        std::string labelling;
        std::string reward;
        std::string features;
        std::uint64_t seed = 1;
        int batch_size = 0;
        int epochs = 0;
        int hidden_width = 0;
        int episodes = 0;
        double lr = 0.0;
        double c = 0.0;
        double epsilon = 0.0;
        double baseline_decay = -1.0;
    };
    const auto add_knob_flags = [](CLI::App* cmd, CommonFlags& flags) {
        cmd->add_option("--config", flags.config_path, "key: value config file");
        cmd->add_option("--seed", flags.seed, "random seed (default 1)");
        cmd->add_option("--labeling,--labelling", flags.labelling,
                        "threshold:T, topm:M or su4f1");
        cmd->add_option("--reward", flags.reward, "rl reward: su4f1 or mean2l");
        cmd->add_option("--features", flags.features,
                        "rl features: tfidf, emb100 or emb200");
        cmd->add_option("--batch-size", flags.batch_size, "minibatch size");
        cmd->add_option("--epochs", flags.epochs, "training epochs");
        cmd->add_option("--hidden-width", flags.hidden_width, "hidden layer width");
        cmd->add_option("--episodes", flags.episodes, "rl training episodes");
        cmd->add_option("--lr", flags.lr, "learning rate");
        cmd->add_option("--c", flags.c, "SVM regularisation trade-off");
        cmd->add_option("--epsilon", flags.epsilon, "SVR tube width");
        cmd->add_option("--baseline-decay", flags.baseline_decay,
                        "rl reward baseline decay in [0,1)");
    };
    const auto overrides_from = [](const CLI::App* cmd, const CommonFlags& flags) {
        SpecOverrides o;
        if (cmd->count("--labeling")) o.labelling = flags.labelling;
        if (cmd->count("--seed")) o.seed = flags.seed;
        if (cmd->count("--batch-size")) o.batch_size = flags.batch_size;
        if (cmd->count("--epochs")) o.epochs = flags.epochs;
        if (cmd->count("--hidden-width")) o.hidden_width = flags.hidden_width;
        if (cmd->count("--episodes")) o.episodes = flags.episodes;
        if (cmd->count("--lr")) o.lr = flags.lr;
        if (cmd->count("--c")) o.c = flags.c;
        if (cmd->count("--epsilon")) o.epsilon = flags.epsilon;
        if (cmd->count("--baseline-decay")) o.baseline_decay = flags.baseline_decay;
        if (cmd->count("--reward")) o.reward = flags.reward;
        if (cmd->count("--features")) o.features = flags.features;
        return o;
    };

    // train
    CommonFlags train_flags;
    CLI::App* train = app.add_subcommand("train", "train a summariser model");
    train->add_option("--method", train_flags.method, "svc, svr, nnc, nnr or rl")
        ->required();
    train->add_option("--in", train_flags.in, "training corpus JSONL")->required();
    train->add_option("--out", train_flags.out, "output model file")->required();
    train->add_option("--embeddings", train_flags.embeddings,
                      "embedding table file");
    add_knob_flags(train, train_flags);

    // summarise
    std::string summ_method, summ_in, summ_out, summ_model, summ_embeddings;
    CLI::App* summarise = app.add_subcommand(
        "summarise", "generate summaries with a baseline or a trained model");
    summarise
        ->add_option("--method", summ_method,
                     "firstn, cosine, oracle, svc, svr, nnc, nnr or rl")
        ->required();
    summarise->add_option("--in", summ_in, "corpus JSONL")->required();
    summarise->add_option("--out", summ_out, "output summaries JSONL")
        ->required();
    summarise->add_option("--model", summ_model, "trained model file");
    summarise->add_option("--embeddings", summ_embeddings,
                          "embedding table file");

    // crossval
    CommonFlags cv_flags;
    int cv_k = 10;
    int cv_jobs = 1;
    CLI::App* cv = app.add_subcommand(
        "crossval", "k-fold cross-validation of a method on a corpus");
    cv->add_option("--method", cv_flags.method, "method to evaluate")->required();
    cv->add_option("--in", cv_flags.in, "corpus JSONL")->required();
    cv->add_option("--out", cv_flags.out, "report file (default stdout)");
    cv->add_option("--embeddings", cv_flags.embeddings, "embedding table file");
    cv->add_option("--k", cv_k, "number of folds (default 10)");
    cv->add_option("--jobs", cv_jobs, "parallel fold workers (default 1)");
    add_knob_flags(cv, cv_flags);

    // correlate
    std::string corr_in, corr_out, corr_plots;
    CLI::App* correlate = app.add_subcommand(
        "correlate", "correlation matrix of ROUGE metrics vs human scores");
    correlate->add_option("--in", corr_in, "evaluation CSV")->required();
    correlate->add_option("--out", corr_out, "report CSV (default stdout)");
    correlate->add_option("--plots", corr_plots,
                          "directory for scatterplot SVGs");

    // preset
    CommonFlags preset_flags;
    std::string preset_name, preset_train;
    int preset_batch = 1;
    bool preset_dry = false;
    CLI::App* preset = app.add_subcommand(
        "preset", "resolve or execute a submitted-run preset (MQ1..MQ5)");
    preset->add_option("name", preset_name, "preset name MQ1..MQ5")->required();
    preset->add_option("--batch", preset_batch, "test batch 1..5 (default 1)");
    preset->add_flag("--dry-run", preset_dry,
                     "print the resolved configuration and exit");
    preset->add_option("--train", preset_train, "training corpus JSONL");
    preset->add_option("--in", preset_flags.in, "test corpus JSONL");
    preset->add_option("--out", preset_flags.out, "output summaries JSONL");
    preset->add_option("--embeddings", preset_flags.embeddings,
                       "embedding table file");
    add_knob_flags(preset, preset_flags);

    try {
        app.parse(argc, argv);

        if (*ingest) return cmd_ingest(ingest_in, ingest_out);
        if (*label) return cmd_label(label_in, label_policy, label_out);
        if (*rouge) return cmd_rouge(rouge_cand, rouge_refs, rouge_out);
        if (*train) {
            const Method method = parse_method(train_flags.method);
            const RunConfig config = train_flags.config_path.empty()
                                         ? RunConfig{}
                                         : load_config(train_flags.config_path);
            const ResolvedSpec resolved = resolve_spec(
                method, MethodSpec{}, config, overrides_from(train, train_flags));
            return cmd_train(method, resolved, train_flags.in, train_flags.out,
                             train_flags.embeddings);
        }
        if (*summarise) {
            return cmd_summarise(parse_method(summ_method), summ_in, summ_out,
                                 summ_model, summ_embeddings);
        }
        if (*cv) {
            const Method method = parse_method(cv_flags.method);
            const RunConfig config = cv_flags.config_path.empty()
                                         ? RunConfig{}
                                         : load_config(cv_flags.config_path);
            ResolvedSpec resolved =
                resolve_spec(method, MethodSpec{}, config,
                             overrides_from(cv, cv_flags));
            const int k = cv->count("--k") ? cv_k : resolved.k;
            const int jobs = cv->count("--jobs") ? cv_jobs : resolved.jobs;
            return cmd_crossval(resolved, cv_flags.in, cv_flags.out,
                                cv_flags.embeddings, k, jobs);
        }
        if (*correlate) return cmd_correlate(corr_in, corr_out, corr_plots);
        if (*preset) {
            const RunConfig config = preset_flags.config_path.empty()
                                         ? RunConfig{}
                                         : load_config(preset_flags.config_path);
            return cmd_preset(preset_name, preset_batch, preset_dry, config,
                              overrides_from(preset, preset_flags), preset_train,
                              preset_flags.in, preset_flags.out,
                              preset_flags.embeddings);
        }
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << error_category(e) << ": "
                  << one_line(e.what()) << "\n";
        return 1;
    }
}

} // namespace qsumm::cli

#include "qsumm/summarise.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qsumm {

namespace {

Summary finalise(const Sample& sample, std::vector<int> selected) {
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    Summary summary;
    summary.sample_id = sample.id;
    summary.selected = std::move(selected);
    for (std::size_t i = 0; i < summary.selected.size(); ++i) {
        if (i > 0) summary.text += ' ';
        summary.text +=
            sample.sentences[static_cast<std::size_t>(summary.selected[i])].text;
    }
    return summary;
}

std::vector<std::size_t> rank_descending(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0u);
    // Equal scores keep the lower sentence index.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });
    return order;
}

std::vector<double> linear_values(const LinearModel& model, const Sample& sample,
                                  const TfidfModel& tfidf,
                                  const EmbeddingTable& table) {
    std::vector<double> values;
    values.reserve(sample.sentences.size());
    for (const Sentence& sentence : sample.sentences) {
        values.push_back(predict_linear(
            model, build_features(sample, sentence.index, tfidf, table)));
    }
    return values;
}

std::vector<double> neural_values(const NeuralParams& params,
                                  const Sample& sample,
                                  const EmbeddingTable& table) {
    const std::vector<std::string> q_tokens = sample.question_tokens();
    std::vector<double> values;
    values.reserve(sample.sentences.size());
    for (const Sentence& sentence : sample.sentences) {
        values.push_back(nn_forward(params, table, q_tokens, sentence.tokens,
                                    sentence_position(sample, sentence.index)));
    }
    return values;
}

} // namespace

double sentence_position(const Sample& sample, int sentence_index) {
    const std::size_t count = sample.sentences.size();
    if (count <= 1) return 0.0;
    return static_cast<double>(sentence_index) / static_cast<double>(count - 1);
}

Summary summarise_firstn(const Sample& sample, int n) {
    const int take = std::min<int>(std::max(n, 0),
                                   static_cast<int>(sample.sentences.size()));
    std::vector<int> selected(static_cast<std::size_t>(take));
    std::iota(selected.begin(), selected.end(), 0);
    return finalise(sample, std::move(selected));
}

Summary select_top_scores(const Sample& sample,
                          const std::vector<double>& scores, int n) {
    if (scores.size() != sample.sentences.size()) {
        throw std::invalid_argument("select_top_scores: score count mismatch");
    }
    const std::vector<std::size_t> order = rank_descending(scores);
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)),
                              order.size());
    std::vector<int> selected;
    selected.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        selected.push_back(static_cast<int>(order[i]));
    }
    return finalise(sample, std::move(selected));
}

Summary select_classified(const Sample& sample,
                          const std::vector<double>& values,
                          const std::vector<bool>& positive, int n) {
    if (values.size() != sample.sentences.size() ||
        positive.size() != sample.sentences.size()) {
        throw std::invalid_argument("select_classified: value count mismatch");
    }
    std::vector<int> selected;
    for (std::size_t i = 0; i < positive.size(); ++i) {
        if (positive[i]) selected.push_back(static_cast<int>(i));
    }
    if (selected.size() < static_cast<std::size_t>(std::max(n, 0))) {
        return select_top_scores(sample, values, n);
    }
    return finalise(sample, std::move(selected));
}

Summary summarise_cosine(const Sample& sample, const TfidfModel& tfidf, int n) {
    const SparseVector question = vectorize(tfidf, sample.question_tokens());
    std::vector<double> scores;
    scores.reserve(sample.sentences.size());
    for (const Sentence& sentence : sample.sentences) {
        scores.push_back(cosine(question, vectorize(tfidf, sentence.tokens)));
    }
    return select_top_scores(sample, scores, n);
}

Summary summarise_regression(const LinearModel& model, const Sample& sample,
                             int n, const TfidfModel& tfidf,
                             const EmbeddingTable& table) {
    if (model.task != Task::regress) {
        throw std::invalid_argument(
            "summarise_regression: model task is not regress");
    }
    return select_top_scores(sample, linear_values(model, sample, tfidf, table),
                             n);
}

Summary summarise_regression(const NeuralParams& params, const Sample& sample,
                             int n, const EmbeddingTable& table) {
    if (params.task != Task::regress) {
        throw std::invalid_argument(
            "summarise_regression: model task is not regress");
    }
    return select_top_scores(sample, neural_values(params, sample, table), n);
}

Summary summarise_classification(const LinearModel& model, const Sample& sample,
                                 int n, const TfidfModel& tfidf,
                                 const EmbeddingTable& table) {
    if (model.task != Task::classify) {
        throw std::invalid_argument(
            "summarise_classification: model task is not classify");
    }
    const std::vector<double> values = linear_values(model, sample, tfidf, table);
    std::vector<bool> positive(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) positive[i] = values[i] > 0.0;
    return select_classified(sample, values, positive, n);
}

Summary summarise_classification(const NeuralParams& params,
                                 const Sample& sample, int n,
                                 const EmbeddingTable& table) {
    if (params.task != Task::classify) {
        throw std::invalid_argument(
            "summarise_classification: model task is not classify");
    }
    const std::vector<double> values = neural_values(params, sample, table);
    std::vector<bool> positive(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) positive[i] = values[i] > 0.5;
    return select_classified(sample, values, positive, n);
}

} // namespace qsumm

#pragma once

#include <string>
#include <vector>

#include "qsumm/corpus.hpp"
#include "qsumm/features.hpp"
#include "qsumm/models.hpp"

namespace qsumm {

/// Summary length per question type.
struct SummaryLengthPolicy {
    int summary = 6;
    int factoid = 2;
    int yesno = 2;
    int list = 3;

    int n_for(QuestionType type) const {
        switch (type) {
            case QuestionType::summary: return summary;
            case QuestionType::factoid: return factoid;
            case QuestionType::yesno: return yesno;
            case QuestionType::list: return list;
        }
        return summary;
    }
};

/// Selected sentences of one sample, in original document order, with the
/// sentence texts joined by single spaces.
struct Summary {
    std::string sample_id;
    std::vector<int> selected; // ascending, unique, valid indices
    std::string text;
};

/// First min(n, #sentences) sentences.
Summary summarise_firstn(const Sample& sample, int n);

/// Top sentences by cosine similarity between the tf.idf vectors of the
/// question and the sentence, ties by lower index.
Summary summarise_cosine(const Sample& sample, const TfidfModel& tfidf, int n);

/// Ranking core: top min(n, count) sentences by score, ties by lower index,
/// output ascending. Used by every regression-style summariser.
Summary select_top_scores(const Sample& sample,
                          const std::vector<double>& scores, int n);

/// Classification core: all sentences with positive[i] set; when fewer than
/// n are positive, the top min(n, count) by decision value instead. There
/// is no upper cap when positives exceed n.
Summary select_classified(const Sample& sample,
                          const std::vector<double>& values,
                          const std::vector<bool>& positive, int n);

/// Regression summarisers (model task must be regress).
Summary summarise_regression(const LinearModel& model, const Sample& sample,
                             int n, const TfidfModel& tfidf,
                             const EmbeddingTable& table);
Summary summarise_regression(const NeuralParams& params, const Sample& sample,
                             int n, const EmbeddingTable& table);

/// Classification summarisers with the backoff rule (model task must be
/// classify). Linear models rank by raw margin, neural classifiers by
/// sigmoid probability.
Summary summarise_classification(const LinearModel& model, const Sample& sample,
                                 int n, const TfidfModel& tfidf,
                                 const EmbeddingTable& table);
Summary summarise_classification(const NeuralParams& params,
                                 const Sample& sample, int n,
                                 const EmbeddingTable& table);

/// Normalised sentence position used by the neural summarisers, equal to
/// the position slot of build_features.
double sentence_position(const Sample& sample, int sentence_index);

} // namespace qsumm

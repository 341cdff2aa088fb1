#pragma once

// Deterministic synthetic corpora shared by the integration and acceptance
// suites. The main fixture is built so that the highest-ROUGE sentence of a
// sample is usually NOT among the first n, which separates ranking methods
// from the first-n baseline.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "qsumm/corpus.hpp"
#include "qsumm/features.hpp"
#include "qsumm/rng.hpp"

namespace fixture {

// Vocabulary pools. Answer words overlap with question words so tf.idf
// features carry signal; filler words are disjoint from every reference.
inline const std::vector<std::string>& topic_words() {
    static const std::vector<std::string> words = {
        "protein", "kinase",  "receptor", "pathway",  "mutation", "therapy",
        "tumor",   "gene",    "enzyme",   "antibody", "cell",     "signal",
        "binding", "domain",  "channel",  "syndrome", "disease",  "marker",
        "growth",  "factor",
    };
    return words;
}

inline const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words = {
        "river",  "stone",  "cloud",  "violin", "meadow", "lantern",
        "harbor", "pebble", "willow", "copper", "marble", "breeze",
        "saddle", "timber", "garnet", "anchor", "barrel", "candle",
    };
    return words;
}

inline qsumm::QuestionType type_for(int i) {
    switch (i % 4) {
        case 0: return qsumm::QuestionType::factoid;
        case 1: return qsumm::QuestionType::yesno;
        case 2: return qsumm::QuestionType::list;
        default: return qsumm::QuestionType::summary;
    }
}

/// 30 synthetic samples. Each has one "gold" sentence whose text equals the
/// reference; its position is pushed past the question type's summary
/// length n for most samples, and the remaining sentences use filler
/// vocabulary disjoint from the reference.
inline std::vector<qsumm::Sample> make_fixture_corpus() {
    qsumm::Rng rng(20240901);
    const auto& topics = topic_words();
    const auto& fillers = filler_words();

    std::vector<qsumm::Sample> samples;
    for (int i = 0; i < 30; ++i) {
        qsumm::Sample sample;
        sample.id = "fx" + std::to_string(i);
        sample.question_type = type_for(i);

        const std::string& t0 = topics[static_cast<std::size_t>(i) % topics.size()];
        const std::string& t1 =
            topics[static_cast<std::size_t>(i + 7) % topics.size()];
        const std::string& t2 =
            topics[static_cast<std::size_t>(i + 13) % topics.size()];
        sample.question_text =
            "What is the role of " + t0 + " " + t1 + " in " + t2 + "?";

        const std::string gold = "The " + t0 + " " + t1 + " regulates " + t2 +
                                 " activity in disease models.";
        sample.references.push_back(gold);
        if (i % 5 == 0) {
            sample.references.push_back("The " + t0 + " " + t1 +
                                        " controls " + t2 + ".");
        }

        int n = 2;
        if (sample.question_type == qsumm::QuestionType::list) n = 3;
        if (sample.question_type == qsumm::QuestionType::summary) n = 6;
        const int sentence_count =
            std::max(n + 3, 6 + static_cast<int>(rng.below(4)));
        // A few samples (every 10th) keep the gold sentence in front so the
        // corpus is not adversarial in a uniform way.
        const int gold_pos =
            (i % 10 == 9) ? 0
                          : n + static_cast<int>(rng.below(
                                    static_cast<std::uint64_t>(sentence_count - n)));

        std::vector<std::string> sentence_texts;
        for (int s = 0; s < sentence_count; ++s) {
            if (s == gold_pos) {
                sentence_texts.push_back(gold);
                continue;
            }
            const std::string& f0 =
                fillers[rng.below(fillers.size())];
            const std::string& f1 =
                fillers[rng.below(fillers.size())];
            const std::string& f2 =
                fillers[rng.below(fillers.size())];
            sentence_texts.push_back("A " + f0 + " near the " + f1 +
                                     " held a quiet " + f2 + ".");
        }

        // Spread sentences over one to three snippets.
        const int snippet_count = 1 + static_cast<int>(rng.below(3));
        const int per_snippet =
            (sentence_count + snippet_count - 1) / snippet_count;
        for (int s = 0; s < sentence_count; s += per_snippet) {
            std::string snippet;
            for (int t = s; t < std::min(sentence_count, s + per_snippet); ++t) {
                if (!snippet.empty()) snippet += ' ';
                snippet += sentence_texts[static_cast<std::size_t>(t)];
            }
            sample.snippets.push_back(snippet);
        }
        qsumm::derive_sentences(sample);
        samples.push_back(std::move(sample));
    }
    return samples;
}

/// Toy policy-training corpus: one question whose reference equals exactly
/// one sentence; the other five sentences use pairwise-distinct filler
/// vocabulary disjoint from the reference.
inline std::vector<qsumm::Sample> make_rl_toy_corpus() {
    qsumm::Sample sample;
    sample.id = "toy0";
    sample.question_type = qsumm::QuestionType::factoid;
    sample.question_text = "Which enzyme cleaves the peptide bond?";
    const std::string gold = "The protease enzyme cleaves the peptide bond.";
    const std::vector<std::string> distractors = {
        "A river stone rested near the meadow.",
        "The violin played under a copper lantern.",
        "Willow branches touched the quiet harbor.",
        "Marble pillars framed the timber gate.",
        "A garnet anchor sank beside the barrel.",
    };
    std::vector<std::string> sentence_texts;
    sentence_texts.push_back(distractors[0]);
    sentence_texts.push_back(distractors[1]);
    sentence_texts.push_back(distractors[2]);
    sentence_texts.push_back(gold); // index 3
    sentence_texts.push_back(distractors[3]);
    sentence_texts.push_back(distractors[4]);
    std::string snippet;
    for (const std::string& text : sentence_texts) {
        if (!snippet.empty()) snippet += ' ';
        snippet += text;
    }
    sample.snippets.push_back(snippet);
    sample.references.push_back(gold);
    qsumm::derive_sentences(sample);
    return {sample};
}

inline constexpr int kRlToyGoldIndex = 3;

/// Deterministic random embeddings covering every token of the corpus
/// (questions, sentences and references).
inline qsumm::EmbeddingTable make_fixture_embeddings(
    const std::vector<qsumm::Sample>& samples, int dim = 8) {
    std::set<std::string> vocabulary;
    for (const qsumm::Sample& sample : samples) {
        for (const std::string& token : sample.question_tokens()) {
            vocabulary.insert(token);
        }
        for (const qsumm::Sentence& sentence : sample.sentences) {
            vocabulary.insert(sentence.tokens.begin(), sentence.tokens.end());
        }
        for (const auto& reference : sample.reference_tokens()) {
            vocabulary.insert(reference.begin(), reference.end());
        }
    }
    qsumm::EmbeddingTable table;
    table.dim = dim;
    qsumm::Rng rng(7151821);
    for (const std::string& token : vocabulary) {
        std::vector<double> vec(static_cast<std::size_t>(dim));
        for (double& value : vec) value = 0.5 * rng.normal();
        table.vectors.emplace(token, std::move(vec));
    }
    return table;
}

} // namespace fixture

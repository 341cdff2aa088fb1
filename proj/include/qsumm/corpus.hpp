#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsumm {

enum class QuestionType { summary, factoid, yesno, list };

QuestionType parse_question_type(std::string_view name);
std::string_view question_type_name(QuestionType type);

/// One input sentence, carved out of a snippet.
struct Sentence {
    int index = 0;          // 0-based, contiguous within the sample
    int snippet_index = 0;  // which snippet the sentence came from
    std::string text;
    std::vector<std::string> tokens; // tokenize(text), cached
};

/// One question with its snippets, derived sentences and reference
/// ("ideal") answers. References may be empty for inference-only samples;
/// training and scoring reject such samples.
struct Sample {
    std::string id;
    std::string question_text;
    QuestionType question_type = QuestionType::summary;
    std::vector<std::string> snippets;
    std::vector<Sentence> sentences;
    std::vector<std::string> references;

    std::vector<std::string> question_tokens() const;
    /// References tokenized with the corpus tokenizer, one entry per
    /// reference. Used by every ROUGE-based consumer.
    std::vector<std::vector<std::string>> reference_tokens() const;
};

/// Splits each snippet into sentences and tokenizes them, filling
/// sample.sentences with contiguous indices in (snippet, position) order.
void derive_sentences(Sample& sample);

/// Parses a BioASQ-style JSON document: an object with a `questions` array
/// whose entries carry `body`, `type`, `snippets` (objects with `text`) and
/// optionally `ideal_answer` (string or array of strings) and `id`.
/// Throws ParseError on malformed JSON, SchemaError on missing/invalid
/// fields.
std::vector<Sample> ingest_bioasq(std::string_view json_text);

/// Canonical corpus format: JSON lines, one question object per line with
/// stable field order (id, body, type, snippets, ideal_answer). Each line is
/// itself a valid BioASQ question entry, so a corpus file wrapped in
/// {"questions": [...]} round-trips through ingest_bioasq.
std::string to_jsonl(std::span<const Sample> samples);
std::vector<Sample> from_jsonl(std::string_view jsonl_text);

/// k-fold assignment of sample ids, seeded and deterministic.
struct FoldAssignment {
    int k = 0;
    std::map<std::string, int> assignment; // sample id -> fold in [0, k)

    std::vector<std::vector<std::string>> fold_ids() const;
};

/// Deals a seeded pseudo-random permutation of the ids round-robin into k
/// folds, so fold sizes differ by at most one. Requires 2 <= k <= |ids| and
/// unique ids; violations throw std::invalid_argument.
FoldAssignment make_folds(const std::vector<std::string>& sample_ids, int k,
                          std::uint64_t seed);

} // namespace qsumm

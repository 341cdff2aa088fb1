#include "qsumm/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qsumm/errors.hpp"
#include "qsumm/rng.hpp"
#include "qsumm/text.hpp"

namespace qsumm {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string field_context(std::string_view qid, std::size_t position) {
    std::ostringstream os;
    os << "question ";
    if (qid.empty()) {
        os << "#" << position;
    } else {
        os << "'" << qid << "'";
    }
    return os.str();
}

Sample parse_question(const ordered_json& q, std::size_t position) {
    if (!q.is_object()) {
        throw SchemaError("questions[" + std::to_string(position) +
                          "] is not an object");
    }
    Sample sample;
    if (q.contains("id")) {
        if (!q["id"].is_string()) {
            throw SchemaError("field 'id' must be a string in " +
                              field_context("", position));
        }
        sample.id = q["id"].get<std::string>();
    } else {
        char buf[16];
        std::snprintf(buf, sizeof buf, "q%04zu", position);
        sample.id = buf;
    }
    const std::string ctx = field_context(sample.id, position);

    if (!q.contains("body")) throw SchemaError("missing field 'body' in " + ctx);
    if (!q["body"].is_string()) {
        throw SchemaError("field 'body' must be a string in " + ctx);
    }
    sample.question_text = q["body"].get<std::string>();

    if (!q.contains("type")) throw SchemaError("missing field 'type' in " + ctx);
    if (!q["type"].is_string()) {
        throw SchemaError("field 'type' must be a string in " + ctx);
    }
    sample.question_type = parse_question_type(q["type"].get<std::string>());

    if (q.contains("snippets")) {
        const auto& snippets = q["snippets"];
        if (!snippets.is_array()) {
            throw SchemaError("field 'snippets' must be an array in " + ctx);
        }
        for (const auto& snippet : snippets) {
            if (snippet.is_object() && snippet.contains("text") &&
                snippet["text"].is_string()) {
                sample.snippets.push_back(snippet["text"].get<std::string>());
            } else {
                throw SchemaError(
                    "snippet entries must be objects with a string 'text' in " +
                    ctx);
            }
        }
    }

    if (q.contains("ideal_answer")) {
        const auto& ideal = q["ideal_answer"];
        if (ideal.is_string()) {
            sample.references.push_back(ideal.get<std::string>());
        } else if (ideal.is_array()) {
            for (const auto& answer : ideal) {
                if (!answer.is_string()) {
                    throw SchemaError(
                        "'ideal_answer' array entries must be strings in " + ctx);
                }
                sample.references.push_back(answer.get<std::string>());
            }
        } else {
            throw SchemaError(
                "field 'ideal_answer' must be a string or array of strings in " +
                ctx);
        }
    }

    derive_sentences(sample);
    return sample;
}

ordered_json sample_to_json(const Sample& sample) {
    ordered_json q;
    q["id"] = sample.id;
    q["body"] = sample.question_text;
    q["type"] = std::string(question_type_name(sample.question_type));
    ordered_json snippets = ordered_json::array();
    for (const std::string& text : sample.snippets) {
        snippets.push_back(ordered_json{{"text", text}});
    }
    q["snippets"] = snippets;
    q["ideal_answer"] = sample.references;
    return q;
}

} // namespace

QuestionType parse_question_type(std::string_view name) {
    if (name == "summary") return QuestionType::summary;
    if (name == "factoid") return QuestionType::factoid;
    if (name == "yesno") return QuestionType::yesno;
    if (name == "list") return QuestionType::list;
    throw SchemaError("unknown question type '" + std::string(name) +
                      "' (expected summary, factoid, yesno or list)");
}

std::string_view question_type_name(QuestionType type) {
    switch (type) {
        case QuestionType::summary: return "summary";
        case QuestionType::factoid: return "factoid";
        case QuestionType::yesno: return "yesno";
        case QuestionType::list: return "list";
    }
    return "summary";
}

std::vector<std::string> Sample::question_tokens() const {
    return tokenize(question_text);
}

std::vector<std::vector<std::string>> Sample::reference_tokens() const {
    std::vector<std::vector<std::string>> out;
    out.reserve(references.size());
    for (const std::string& reference : references) {
        out.push_back(tokenize(reference));
    }
    return out;
}

void derive_sentences(Sample& sample) {
    sample.sentences.clear();
    int index = 0;
    for (std::size_t s = 0; s < sample.snippets.size(); ++s) {
        for (std::string& span : split_sentences(sample.snippets[s])) {
            Sentence sentence;
            sentence.index = index++;
            sentence.snippet_index = static_cast<int>(s);
            sentence.tokens = tokenize(span);
            sentence.text = std::move(span);
            sample.sentences.push_back(std::move(sentence));
        }
    }
}

std::vector<Sample> ingest_bioasq(std::string_view json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("malformed JSON at byte " + std::to_string(e.byte) +
                         ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("questions") ||
        !doc["questions"].is_array()) {
        throw SchemaError("document must be an object with a 'questions' array");
    }
    std::vector<Sample> samples;
    std::size_t position = 0;
    for (const auto& q : doc["questions"]) {
        samples.push_back(parse_question(q, position));
        ++position;
    }
    return samples;
}

std::string to_jsonl(std::span<const Sample> samples) {
    std::string out;
    for (const Sample& sample : samples) {
        out += sample_to_json(sample).dump();
        out += '\n';
    }
    return out;
}

std::vector<Sample> from_jsonl(std::string_view jsonl_text) {
    std::vector<Sample> samples;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin < jsonl_text.size()) {
        std::size_t end = jsonl_text.find('\n', begin);
        if (end == std::string_view::npos) end = jsonl_text.size();
        std::string_view line = jsonl_text.substr(begin, end - begin);
        ++line_no;
        begin = end + 1;
        bool blank = line.find_first_not_of(" \t\r") == std::string_view::npos;
        if (blank) continue;
        ordered_json q;
        try {
            q = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": malformed JSON at byte " + std::to_string(e.byte) +
                             ": " + e.what());
        }
        samples.push_back(parse_question(q, samples.size()));
    }
    return samples;
}

std::vector<std::vector<std::string>> FoldAssignment::fold_ids() const {
    std::vector<std::vector<std::string>> folds(static_cast<std::size_t>(k));
    for (const auto& [id, fold] : assignment) {
        folds[static_cast<std::size_t>(fold)].push_back(id);
    }
    return folds;
}

FoldAssignment make_folds(const std::vector<std::string>& sample_ids, int k,
                          std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("make_folds: k must be >= 2");
    if (static_cast<std::size_t>(k) > sample_ids.size()) {
        throw std::invalid_argument(
            "make_folds: k exceeds the number of samples");
    }
    std::set<std::string> unique(sample_ids.begin(), sample_ids.end());
    if (unique.size() != sample_ids.size()) {
        throw std::invalid_argument("make_folds: sample ids must be unique");
    }

    std::vector<std::string> permuted = sample_ids;
    Rng rng(seed);
    rng.shuffle(permuted);

    FoldAssignment folds;
    folds.k = k;
    for (std::size_t i = 0; i < permuted.size(); ++i) {
        folds.assignment[permuted[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return folds;
}

} // namespace qsumm

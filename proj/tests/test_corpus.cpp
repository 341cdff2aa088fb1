#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "qsumm/corpus.hpp"
#include "qsumm/errors.hpp"
#include "qsumm/rng.hpp"
#include "qsumm/text.hpp"

using namespace qsumm;

TEST_CASE("tokenize basic rules") {
    CHECK(tokenize("The cat's mat.") ==
          std::vector<std::string>{"the", "cat", "s", "mat"});
    CHECK(tokenize("IL-2 receptor") ==
          std::vector<std::string>{"il", "2", "receptor"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("  \t\n ").empty());
    CHECK(tokenize("alpha-β TNFα") ==
          std::vector<std::string>{"alpha", "β", "tnfα"});
    // Uppercase Greek folds to lowercase.
    CHECK(tokenize("ΔF508") == std::vector<std::string>{"δf508"});
}

TEST_CASE("tokenize idempotence on token text") {
    Rng rng(42);
    const std::string pool =
        "abc XYZ 0129 ,.;:!?()-'\"\t\n%$/et al. e.g. éÉαΔ";
    for (int round = 0; round < 200; ++round) {
        std::string text;
        const std::size_t length = rng.below(60);
        for (std::size_t i = 0; i < length; ++i) {
            text += pool[rng.below(pool.size())];
        }
        const std::vector<std::string> tokens = tokenize(text);
        std::string joined;
        for (const std::string& token : tokens) {
            if (!joined.empty()) joined += ' ';
            joined += token;
        }
        CHECK(tokenize(joined) == tokens);
    }
}

TEST_CASE("split_sentences basic rules") {
    CHECK(split_sentences("A result. Another result.") ==
          std::vector<std::string>{"A result.", "Another result."});
    CHECK(split_sentences("This works, i.e. always. Next.") ==
          std::vector<std::string>{"This works, i.e. always.", "Next."});
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("No terminator here") ==
          std::vector<std::string>{"No terminator here"});
    // Abbreviation followed by an uppercase word must not split.
    CHECK(split_sentences("As shown by Smith et al. Results follow.") ==
          std::vector<std::string>{"As shown by Smith et al. Results follow."});
    CHECK(split_sentences("See Fig. Two panels are shown.") ==
          std::vector<std::string>{"See Fig. Two panels are shown."});
    // But a word merely ending in an abbreviation suffix still splits.
    CHECK(split_sentences("We updated the config. Tests pass.") ==
          std::vector<std::string>{"We updated the config.", "Tests pass."});
    CHECK(split_sentences("Is it real? Yes! It is.") ==
          std::vector<std::string>{"Is it real?", "Yes!", "It is."});
    // Lowercase continuation never splits.
    CHECK(split_sentences("approx. half the cases") ==
          std::vector<std::string>{"approx. half the cases"});
}

TEST_CASE("split_sentences preserves non-whitespace characters in order") {
    Rng rng(7);
    const std::string pool = "ab S. ? !e.g. XY.z\n\t";
    for (int round = 0; round < 200; ++round) {
        std::string text;
        const std::size_t length = rng.below(80);
        for (std::size_t i = 0; i < length; ++i) {
            text += pool[rng.below(pool.size())];
        }
        std::string joined;
        for (const std::string& span : split_sentences(text)) {
            joined += span;
            joined += ' ';
        }
        std::string expected;
        for (char c : text) {
            if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' &&
                c != '\v') {
                expected += c;
            }
        }
        std::string actual;
        for (char c : joined) {
            if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' &&
                c != '\v') {
                actual += c;
            }
        }
        CHECK(actual == expected);
    }
}

TEST_CASE("ingest_bioasq minimal document") {
    const std::string doc =
        R"({"questions":[{"body":"Is X true?","type":"yesno",)"
        R"("snippets":[{"text":"X is true."}],"ideal_answer":"Yes."}]})";
    const std::vector<Sample> samples = ingest_bioasq(doc);
    REQUIRE(samples.size() == 1);
    const Sample& sample = samples.front();
    CHECK(sample.question_text == "Is X true?");
    CHECK(sample.question_type == QuestionType::yesno);
    REQUIRE(sample.snippets.size() == 1);
    REQUIRE(sample.sentences.size() == 1);
    CHECK(sample.sentences[0].text == "X is true.");
    CHECK(sample.sentences[0].tokens ==
          std::vector<std::string>{"x", "is", "true"});
    CHECK(sample.references == std::vector<std::string>{"Yes."});
}

TEST_CASE("ingest_bioasq ideal_answer list normalisation") {
    const std::string doc =
        R"({"questions":[{"body":"Is X true?","type":"yesno",)"
        R"("snippets":[{"text":"X is true."}],)"
        R"("ideal_answer":["Yes.","Yes, X."]}]})";
    const std::vector<Sample> samples = ingest_bioasq(doc);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].references ==
          std::vector<std::string>{"Yes.", "Yes, X."});
}

TEST_CASE("ingest_bioasq error paths") {
    CHECK_THROWS_AS(ingest_bioasq("{\"questions\": [}"), ParseError);
    try {
        ingest_bioasq("not json at all");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
    CHECK_THROWS_AS(
        ingest_bioasq(R"({"questions":[{"body":"Q","type":"riddle","snippets":[]}]})"),
        SchemaError);
    try {
        ingest_bioasq(R"({"questions":[{"type":"yesno"}]})");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("body") != std::string::npos);
    }
    try {
        ingest_bioasq(R"({"questions":[{"body":"Q"}]})");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("type") != std::string::npos);
    }
    CHECK_THROWS_AS(ingest_bioasq(R"({"nope": []})"), SchemaError);
}

TEST_CASE("sentence indices are contiguous and snippet-ordered") {
    const std::string doc =
        R"({"questions":[{"body":"Q?","type":"summary",)"
        R"("snippets":[{"text":"One. Two."},{"text":"Three."}]}]})";
    const std::vector<Sample> samples = ingest_bioasq(doc);
    REQUIRE(samples.size() == 1);
    const Sample& sample = samples.front();
    REQUIRE(sample.sentences.size() == 3);
    for (std::size_t i = 0; i < sample.sentences.size(); ++i) {
        CHECK(sample.sentences[i].index == static_cast<int>(i));
        CHECK(sample.sentences[i].tokens == tokenize(sample.sentences[i].text));
    }
    CHECK(sample.sentences[0].snippet_index == 0);
    CHECK(sample.sentences[1].snippet_index == 0);
    CHECK(sample.sentences[2].snippet_index == 1);
    CHECK(sample.references.empty()); // inference-only samples are legal
}

TEST_CASE("jsonl round-trips through ingest_bioasq") {
    const std::string doc =
        R"({"questions":[)"
        R"({"id":"a1","body":"Is X true?","type":"yesno",)"
        R"("snippets":[{"text":"X is true. X holds."},{"text":"Maybe X."}],)"
        R"("ideal_answer":["Yes.","Certainly."]},)"
        R"({"body":"What is Y?","type":"factoid","snippets":[]}]})";
    const std::vector<Sample> originals = ingest_bioasq(doc);
    const std::string jsonl = to_jsonl(originals);

    // Each line is a valid BioASQ question entry.
    std::string wrapped = "{\"questions\":[";
    bool first = true;
    std::size_t begin = 0;
    while (begin < jsonl.size()) {
        const std::size_t end = jsonl.find('\n', begin);
        if (!first) wrapped += ',';
        wrapped += jsonl.substr(begin, end - begin);
        first = false;
        begin = end + 1;
    }
    wrapped += "]}";
    const std::vector<Sample> reparsed = ingest_bioasq(wrapped);
    REQUIRE(reparsed.size() == originals.size());
    for (std::size_t i = 0; i < originals.size(); ++i) {
        CHECK(reparsed[i].id == originals[i].id);
        CHECK(reparsed[i].question_text == originals[i].question_text);
        CHECK(reparsed[i].question_type == originals[i].question_type);
        CHECK(reparsed[i].snippets == originals[i].snippets);
        CHECK(reparsed[i].references == originals[i].references);
    }

    const std::vector<Sample> from_lines = from_jsonl(jsonl);
    REQUIRE(from_lines.size() == originals.size());
    CHECK(from_lines[1].id == originals[1].id);
}

TEST_CASE("make_folds divisibility and determinism") {
    std::vector<std::string> ids;
    for (int i = 0; i < 10; ++i) ids.push_back("s" + std::to_string(i));
    const FoldAssignment folds = make_folds(ids, 5, 99);
    std::vector<int> sizes(5, 0);
    for (const auto& [id, fold] : folds.assignment) {
        ++sizes[static_cast<std::size_t>(fold)];
    }
    for (int size : sizes) CHECK(size == 2);

    const FoldAssignment again = make_folds(ids, 5, 99);
    CHECK(again.assignment == folds.assignment);
    const FoldAssignment other = make_folds(ids, 5, 100);
    CHECK(other.assignment != folds.assignment);
}

TEST_CASE("make_folds argument errors") {
    std::vector<std::string> ids = {"a", "b", "c"};
    CHECK_THROWS_AS(make_folds(ids, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_folds(ids, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_folds({"a", "a", "b"}, 2, 1), std::invalid_argument);
}

TEST_CASE("make_folds partition properties") {
    Rng rng(5);
    for (int round = 0; round < 50; ++round) {
        const int count = 5 + static_cast<int>(rng.below(40));
        const int k = 2 + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(count - 1)));
        std::vector<std::string> ids;
        for (int i = 0; i < count; ++i) ids.push_back("x" + std::to_string(i));
        const FoldAssignment folds = make_folds(ids, k, rng.next_u64());
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        std::set<std::string> seen;
        for (const auto& [id, fold] : folds.assignment) {
            REQUIRE(fold >= 0);
            REQUIRE(fold < k);
            ++sizes[static_cast<std::size_t>(fold)];
            seen.insert(id);
        }
        CHECK(seen.size() == ids.size());
        const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
        CHECK(*hi - *lo <= 1);
    }
}

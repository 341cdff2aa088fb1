#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qsumm {

/// Lowercases and splits text into maximal runs of letters/digits; every
/// other character is a separator and never appears in a token.
///
/// Token characters are ASCII alphanumerics plus letters from the Latin-1
/// supplement, Latin Extended-A/B, IPA, Greek and Cyrillic blocks; case
/// folding covers ASCII, Latin-1, Greek and Cyrillic. The rule is frozen:
/// changing it would silently change every tf.idf model and ROUGE score
/// downstream.
std::vector<std::string> tokenize(std::string_view text);

/// Rule-based sentence splitter. Splits after '.', '?' or '!' that is
/// followed by whitespace and an uppercase letter, or that ends the text.
/// A bundled abbreviation list ("i.e.", "e.g.", "Fig.", "et al.", ...)
/// suppresses splits after '.'. Returned spans are trimmed of surrounding
/// whitespace; empty input yields an empty list.
std::vector<std::string> split_sentences(std::string_view text);

/// The abbreviation list used by split_sentences, lowercase, each entry
/// ending in '.'. Exposed for documentation and tests.
const std::vector<std::string>& sentence_abbreviations();

} // namespace qsumm

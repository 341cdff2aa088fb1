#include "qsumm/text.hpp"

#include <algorithm>
#include <cstdint>

namespace qsumm {

namespace {

struct Decoded {
    char32_t cp;
    std::size_t length; // bytes consumed, >= 1
};

// Decodes one UTF-8 code point at `pos`. Malformed bytes decode as U+FFFD
// with length 1, which classifies as a separator.
Decoded decode_utf8(std::string_view text, std::size_t pos) {
    const auto byte = [&](std::size_t i) -> std::uint8_t {
        return static_cast<std::uint8_t>(text[i]);
    };
    std::uint8_t b0 = byte(pos);
    if (b0 < 0x80) return {b0, 1};

    auto cont = [&](std::size_t i) {
        return i < text.size() && (byte(i) & 0xc0) == 0x80;
    };
    if ((b0 & 0xe0) == 0xc0 && cont(pos + 1)) {
        char32_t cp = ((b0 & 0x1fu) << 6) | (byte(pos + 1) & 0x3fu);
        return Decoded{cp, 2};
    }
    if ((b0 & 0xf0) == 0xe0 && cont(pos + 1) && cont(pos + 2)) {
        char32_t cp = ((b0 & 0x0fu) << 12) | ((byte(pos + 1) & 0x3fu) << 6) |
                      (byte(pos + 2) & 0x3fu);
        return Decoded{cp, 3};
    }
    if ((b0 & 0xf8) == 0xf0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
        char32_t cp = ((b0 & 0x07u) << 18) | ((byte(pos + 1) & 0x3fu) << 12) |
                      ((byte(pos + 2) & 0x3fu) << 6) | (byte(pos + 3) & 0x3fu);
        return Decoded{cp, 4};
    }
    return {0xfffd, 1};
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

bool is_token_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
               (cp >= 'A' && cp <= 'Z');
    }
    if (cp >= 0xc0 && cp <= 0xff) return cp != 0xd7 && cp != 0xf7; // Latin-1 letters
    if (cp >= 0x100 && cp <= 0x2af) return true;  // Latin Extended-A/B, IPA
    if (cp >= 0x391 && cp <= 0x3a9) return cp != 0x3a2; // Greek capitals
    if (cp >= 0x3b1 && cp <= 0x3c9) return true;  // Greek small letters
    if (cp >= 0x400 && cp <= 0x4ff) return true;  // Cyrillic
    return false;
}

char32_t lower_cp(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 0x20; // Latin-1
    if (cp >= 0x391 && cp <= 0x3a9 && cp != 0x3a2) return cp + 0x20; // Greek
    if (cp >= 0x410 && cp <= 0x42f) return cp + 0x20; // Cyrillic А..Я
    if (cp >= 0x400 && cp <= 0x40f) return cp + 0x50; // Cyrillic Ѐ..Џ
    return cp;
}

bool is_upper_cp(char32_t cp) {
    return lower_cp(cp) != cp;
}

bool is_space_char(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size() && is_space_char(s[b])) ++b;
    std::size_t e = s.size();
    while (e > b && is_space_char(s[e - 1])) --e;
    return s.substr(b, e - b);
}

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 0x20) : c;
}

// True when text[..dot_pos] ends with a bundled abbreviation (the dot at
// dot_pos included) preceded by a word boundary.
bool ends_with_abbreviation(std::string_view text, std::size_t dot_pos) {
    for (const std::string& abbr : sentence_abbreviations()) {
        const std::size_t len = abbr.size();
        if (dot_pos + 1 < len) continue;
        const std::size_t start = dot_pos + 1 - len;
        bool match = true;
        for (std::size_t i = 0; i < len; ++i) {
            if (ascii_lower(text[start + i]) != abbr[i]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        if (start == 0) return true;
        char prev = text[start - 1];
        bool prev_is_word = (prev >= '0' && prev <= '9') ||
                            (prev >= 'a' && prev <= 'z') ||
                            (prev >= 'A' && prev <= 'Z');
        if (!prev_is_word) return true;
    }
    return false;
}

} // namespace

const std::vector<std::string>& sentence_abbreviations() {
    // Frozen list, version 1. Multi-word entries are matched against the
    // raw text, so internal spaces are significant.
    static const std::vector<std::string> abbreviations = {
        "i.e.", "e.g.", "etc.", "cf.",   "vs.",  "et al.", "al.",
        "fig.", "figs.", "eq.",  "eqs.",  "ref.", "refs.",  "no.",
        "nos.", "vol.",  "dr.",  "mr.",   "mrs.", "ms.",    "prof.",
        "inc.", "ltd.",  "st.",  "approx.",
    };
    return abbreviations;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        Decoded d = decode_utf8(text, i);
        if (is_token_cp(d.cp)) {
            append_utf8(current, lower_cp(d.cp));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
        i += d.length;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> spans;
    const auto emit = [&](std::size_t begin, std::size_t end) {
        std::string_view span = trim(text.substr(begin, end - begin));
        if (!span.empty()) spans.emplace_back(span);
    };

    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c != '.' && c != '?' && c != '!') {
            ++i;
            continue;
        }
        std::size_t next = i + 1;
        bool boundary = false;
        if (next >= text.size()) {
            boundary = true;
        } else if (is_space_char(text[next])) {
            std::size_t k = next;
            while (k < text.size() && is_space_char(text[k])) ++k;
            if (k >= text.size()) {
                boundary = true;
            } else {
                boundary = is_upper_cp(decode_utf8(text, k).cp);
            }
        }
        if (boundary && c == '.' && ends_with_abbreviation(text, i)) {
            boundary = false;
        }
        if (boundary) {
            emit(start, i + 1);
            i = i + 1;
            while (i < text.size() && is_space_char(text[i])) ++i;
            start = i;
        } else {
            ++i;
        }
    }
    if (start < text.size()) emit(start, text.size());
    return spans;
}

} // namespace qsumm

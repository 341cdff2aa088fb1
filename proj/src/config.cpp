#include "qsumm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qsumm/errors.hpp"

namespace qsumm {

namespace {

std::string_view trim_view(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

int parse_int(std::string_view key, std::string_view value, int min_value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() ||
        out < min_value) {
        throw ConfigError("config key '" + std::string(key) +
                          "': expected an integer >= " +
                          std::to_string(min_value) + ", got '" +
                          std::string(value) + "'");
    }
    return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("config key '" + std::string(key) +
                          "': expected an unsigned integer, got '" +
                          std::string(value) + "'");
    }
    return out;
}

double parse_positive_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || !(out > 0.0)) {
        throw ConfigError("config key '" + std::string(key) +
                          "': expected a positive number, got '" +
                          std::string(value) + "'");
    }
    return out;
}

double parse_unit_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || out < 0.0 ||
        out >= 1.0) {
        throw ConfigError("config key '" + std::string(key) +
                          "': expected a number in [0, 1), got '" +
                          std::string(value) + "'");
    }
    return out;
}

std::string parse_choice(std::string_view key, std::string_view value,
                         std::initializer_list<std::string_view> choices) {
    for (std::string_view choice : choices) {
        if (value == choice) return std::string(value);
    }
    std::string expected;
    for (std::string_view choice : choices) {
        if (!expected.empty()) expected += ", ";
        expected += choice;
    }
    throw ConfigError("config key '" + std::string(key) + "': expected one of " +
                      expected + ", got '" + std::string(value) + "'");
}

} // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin < text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim_view(text.substr(begin, end - begin));
        begin = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key: value'");
        }
        const std::string_view key = trim_view(line.substr(0, colon));
        const std::string_view value = trim_view(line.substr(colon + 1));
        if (value.empty()) {
            throw ConfigError("config key '" + std::string(key) +
                              "': missing value");
        }
        if (key == "method") {
            config.method = parse_choice(
                key, value,
                {"firstn", "cosine", "oracle", "svc", "svr", "nnc", "nnr", "rl"});
        } else if (key == "labelling" || key == "labeling") {
            config.labelling = std::string(value);
        } else if (key == "k") {
            config.k = parse_int(key, value, 2);
        } else if (key == "seed") {
            config.seed = parse_u64(key, value);
        } else if (key == "jobs") {
            config.jobs = parse_int(key, value, 1);
        } else if (key == "hidden_width") {
            config.hidden_width = parse_int(key, value, 1);
        } else if (key == "epochs") {
            config.epochs = parse_int(key, value, 1);
        } else if (key == "lr") {
            config.lr = parse_positive_double(key, value);
        } else if (key == "batch_size") {
            config.batch_size = parse_int(key, value, 1);
        } else if (key == "c") {
            config.c = parse_positive_double(key, value);
        } else if (key == "epsilon") {
            config.epsilon = parse_positive_double(key, value);
        } else if (key == "episodes") {
            config.episodes = parse_int(key, value, 1);
        } else if (key == "baseline_decay") {
            config.baseline_decay = parse_unit_double(key, value);
        } else if (key == "reward") {
            config.reward = parse_choice(key, value, {"su4f1", "mean2l"});
        } else if (key == "features") {
            config.features =
                parse_choice(key, value, {"tfidf", "emb100", "emb200"});
        } else {
            throw ConfigError("unknown config key '" + std::string(key) + "'");
        }
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

} // namespace qsumm

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qsumm {

/// Flat key-value configuration ("key: value" lines, '#' comments). Every
/// key is optional; unset keys fall back to per-method defaults. Unknown
/// keys and type mismatches raise ConfigError naming the key.
struct RunConfig {
    std::optional<std::string> method;
    std::optional<std::string> labelling;
    std::optional<int> k;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<int> hidden_width;
    std::optional<int> epochs;
    std::optional<double> lr;
    std::optional<int> batch_size;
    std::optional<double> c;
    std::optional<double> epsilon;
    std::optional<int> episodes;
    std::optional<double> baseline_decay;
    std::optional<std::string> reward;   // su4f1 | mean2l
    std::optional<std::string> features; // tfidf | emb100 | emb200
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

} // namespace qsumm

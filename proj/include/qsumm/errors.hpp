#pragma once

#include <stdexcept>
#include <string>

namespace qsumm {

/// Base class for all qsumm errors that are caused by bad input data or
/// configuration rather than programming mistakes. Precondition violations
/// on in-memory arguments throw std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input text could not be parsed at all (malformed JSON, truncated file).
/// The message includes a byte offset when the underlying parser provides one.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but does not match the expected schema (missing field,
/// unknown enum value). The message names the offending field.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A structured text file (embeddings, CSV) violates its format.
/// The message carries a 1-based line number where applicable.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Configuration file or flag value is invalid.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Training diverged (NaN loss) or could not proceed.
class TrainingError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A correlation is undefined for the given data (constant variable).
class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

} // namespace qsumm

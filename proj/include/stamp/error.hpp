#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stamp {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a structural or referential invariant. CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// JSON syntax error, with the 1-based line/column and byte offset of the failure.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column, std::size_t offset)
        : ValidationError(what), line_(line), column_(column), offset_(offset) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::size_t offset_;
};

/// Filesystem failure (missing file, unwritable directory). CLI exit code 2.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace stamp

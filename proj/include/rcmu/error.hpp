#pragma once

#include <stdexcept>
#include <string>

namespace rcmu {

/// Base class for every error raised by the library. Messages are single-line.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file or manifest is malformed. Carries the offending file and 1-based line.
class FormatError : public Error {
public:
    FormatError(std::string file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// An estimator met data without scattered power or a constant sequence.
class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace rcmu

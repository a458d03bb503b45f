#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skysr {

/// Malformed or inconsistent input data (dataset files, specs, workloads).
class LoadError : public std::runtime_error {
public:
    LoadError(std::string file, std::size_t line, const std::string& what)
        : std::runtime_error(format(file, line, what)), file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    /// 1-based line number, 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& file, std::size_t line, const std::string& what) {
        if (line == 0) return file + ": " + what;
        return file + ":" + std::to_string(line) + ": " + what;
    }

    std::string file_;
    std::size_t line_;
};

/// A query or API argument that refers to something that does not exist.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace skysr

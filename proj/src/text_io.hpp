#pragma once

// Line-oriented reader for the whitespace-separated dataset formats.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "skysr/error.hpp"

namespace skysr::detail {

/// Shortest decimal form that parses back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

class RecordReader {
public:
    explicit RecordReader(const std::filesystem::path& path) : path_(path.string()), in_(path) {
        if (!in_) throw LoadError(path_, 0, "cannot open file");
    }

    /// Advances to the next non-empty record, `#` comments stripped.
    bool next() {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_no_;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            line_ = std::move(raw);
            split();
            if (!fields_.empty()) return true;
        }
        return false;
    }

    std::size_t size() const noexcept { return fields_.size(); }
    std::string_view field(std::size_t i) const { return fields_.at(i); }
    std::size_t line_number() const noexcept { return line_no_; }
    const std::string& path() const noexcept { return path_; }

    /// Remainder of the line starting at field `i`, trimmed.
    std::string rest_from(std::size_t i) const {
        if (i >= fields_.size()) return {};
        auto begin = static_cast<std::size_t>(fields_[i].data() - line_.data());
        std::string_view tail(line_);
        tail.remove_prefix(begin);
        while (!tail.empty() && (tail.back() == ' ' || tail.back() == '\t' || tail.back() == '\r')) tail.remove_suffix(1);
        return std::string(tail);
    }

    [[noreturn]] void fail(const std::string& what) const { throw LoadError(path_, line_no_, what); }

    template <typename T>
    T number(std::size_t i) const {
        std::string_view s = field(i);
        T value{};
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            fail("expected a number, got '" + std::string(s) + "'");
        }
        return value;
    }

    void expect_fields(std::size_t lo, std::size_t hi) const {
        if (fields_.size() < lo || fields_.size() > hi) {
            fail("expected " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) + " fields, got " +
                 std::to_string(fields_.size()));
        }
    }

private:
    void split() {
        fields_.clear();
        std::string_view v(line_);
        std::size_t i = 0;
        while (i < v.size()) {
            while (i < v.size() && is_space(v[i])) ++i;
            std::size_t j = i;
            while (j < v.size() && !is_space(v[j])) ++j;
            if (j > i) fields_.push_back(v.substr(i, j - i));
            i = j;
        }
    }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

    std::string path_;
    std::ifstream in_;
    std::string line_;
    std::vector<std::string_view> fields_;
    std::size_t line_no_ = 0;
};

}  // namespace skysr::detail

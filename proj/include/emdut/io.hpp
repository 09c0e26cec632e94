#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "emdut/core.hpp"

namespace emdut {

// Raised for malformed point-set text; the message carries the 1-based line.
class ParseError : public std::invalid_argument {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Line 1 holds the dimension, every further non-empty line one point.
PointSetQ parse_point_set(std::string_view text);
std::string serialize_point_set(const PointSetQ& points);

PointSetQ read_point_set(const std::filesystem::path& path);
void write_point_set(const std::filesystem::path& path, const PointSetQ& points);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace emdut

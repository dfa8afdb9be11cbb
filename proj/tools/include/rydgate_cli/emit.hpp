#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace rydgate::cli {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

enum class Format { csv, json };

Format parse_format(const std::string &name);

// Doubles use %.15g; CSV ends every line with '\n'. JSON is an array of
// objects keyed by the header.
std::string format_number(double x);
std::string emit(const Table &table, Format format);

// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a(const std::string &bytes);
std::string hex64(std::uint64_t x);

} // namespace rydgate::cli

#include "rydgate_cli/emit.hpp"

#include "rydgate/error.hpp"

#include <cmath>
#include <cstdio>
#include "json.hpp"

namespace rydgate::cli {

Format parse_format(const std::string &name)
{
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw Error(ErrorKind::config, "unknown output format '" + name + "'");
}

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

namespace {

std::string csv_cell(const Cell &c)
{
    struct {
        std::string operator()(double x) const { return format_number(x); }
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(const std::string &s) const
        {
            if (s.find_first_of(",\"\n") == std::string::npos) {
                return s;
            }
            std::string q = "\"";
            for (char ch : s) {
                q += ch;
                if (ch == '"') q += '"';
            }
            return q + "\"";
        }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    } visit;
    return std::visit(visit, c);
}

nlohmann::ordered_json json_cell(const Cell &c)
{
    if (const double *x = std::get_if<double>(&c)) {
        // Same digits as the CSV; JSON has no NaN or infinity.
        if (!std::isfinite(*x)) return nullptr;
        return nlohmann::ordered_json::parse(format_number(*x));
    }
    if (const auto *i = std::get_if<std::int64_t>(&c)) return *i;
    if (const auto *s = std::get_if<std::string>(&c)) return *s;
    return std::get<bool>(c);
}

} // namespace

std::string emit(const Table &table, Format format)
{
    for (const auto &row : table.rows) {
        if (row.size() != table.header.size()) {
            throw std::logic_error("ragged table row");
        }
    }
    if (format == Format::csv) {
        std::string out;
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            out += (i ? "," : "") + table.header[i];
        }
        out += '\n';
        for (const auto &row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += csv_cell(row[i]);
            }
            out += '\n';
        }
        return out;
    }
    auto arr = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            obj[table.header[i]] = json_cell(row[i]);
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::uint64_t fnv1a(const std::string &bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

} // namespace rydgate::cli

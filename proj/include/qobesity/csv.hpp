#pragma once

// Minimal CSV helpers. Doubles are written in shortest round-trip form so a
// written file parses back to bit-identical values.

#include "qobesity/errors.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qobesity::csv {

inline std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
    if (s == "nan" || s == "NaN" || s == "-nan")
        return std::nan("");
    if (s == "inf")
        return INFINITY;
    if (s == "-inf")
        return -INFINITY;
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw Error(ErrorCode::MalformedInput, "not a number: '" + std::string(s) + "'");
    return v;
}

inline int parse_int(std::string_view s) {
    int v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw Error(ErrorCode::MalformedInput, "not an integer: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
            field.remove_suffix(1);
        while (!field.empty() && field.front() == ' ')
            field.remove_prefix(1);
        out.emplace_back(field);
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

/// Reads a header line and the data rows; checks the header matches.
inline std::vector<std::vector<std::string>> read_table(std::istream& in, std::string_view expected_header) {
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::MalformedInput, "empty CSV input");
    const auto header = split(line);
    const auto expected = split(expected_header);
    if (header != expected)
        throw Error(ErrorCode::MalformedInput, "unexpected CSV header '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        auto fields = split(line);
        if (fields.size() != expected.size())
            throw Error(ErrorCode::MalformedInput, "line " + std::to_string(lineno) + ": expected " +
                                                       std::to_string(expected.size()) + " fields");
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace qobesity::csv

#ifndef RFSCOPE_CSV_DETAIL_HPP
#define RFSCOPE_CSV_DETAIL_HPP

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "rfscope/errors.hpp"

namespace rfscope::detail {

struct CsvRow {
    std::size_t number = 0; // 1-based; the header is row 1
    std::vector<std::string> fields;
};

/// Splits LF-terminated CSV text on commas. Verifies the header and the field
/// count of every data row. A header-only document yields zero rows; a fully
/// empty document is an error.
inline std::vector<CsvRow> parse_csv(std::string_view text, std::string_view expected_header) {
    if (text.empty())
        throw ParseError("empty file");

    const std::size_t column_count =
        static_cast<std::size_t>(std::count(expected_header.begin(), expected_header.end(), ',')) + 1;

    std::vector<CsvRow> rows;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;

        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        ++line_number;
        if (line.empty()) {
            if (pos > text.size())
                break; // trailing newline
            throw ParseError("row " + std::to_string(line_number) + ": blank line");
        }

        if (line_number == 1) {
            if (line != expected_header)
                throw ParseError("row 1: expected header \"" + std::string(expected_header) +
                                 "\", got \"" + std::string(line) + "\"");
            continue;
        }

        CsvRow row;
        row.number = line_number;
        std::size_t field_start = 0;
        while (true) {
            std::size_t comma = line.find(',', field_start);
            row.fields.emplace_back(line.substr(
                field_start, comma == std::string_view::npos ? line.size() - field_start
                                                             : comma - field_start));
            if (comma == std::string_view::npos)
                break;
            field_start = comma + 1;
        }
        if (row.fields.size() != column_count)
            throw ParseError("row " + std::to_string(line_number) + ": expected " +
                             std::to_string(column_count) + " fields, got " +
                             std::to_string(row.fields.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline double parse_double_field(const std::string& field, const char* column,
                                 std::size_t row_number) {
    double value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("row " + std::to_string(row_number) + ": field " + column +
                         " is not a number: \"" + field + "\"");
    return value;
}

/// Shortest-ish deterministic double rendering for CSV output.
inline std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

} // namespace rfscope::detail

#endif

#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace factoropt::csv {

/// Quotes the field only when it contains a comma, quote or line break.
std::string field(std::string_view text);

/// Splits one record. Handles quoted fields with doubled quotes; strips a
/// trailing '\r'. Throws parse_error on an unterminated quote.
std::vector<std::string> split_line(std::string_view line);

std::string join(const std::vector<std::string>& fields);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based source line of each row
    std::vector<std::size_t> lines;

    /// Column index by name; throws parse_error if absent.
    std::size_t column(std::string_view name) const;
};

/// Reads a header row followed by records. Blank lines are skipped. A UTF-8
/// byte-order mark before the header is ignored.
Table read(std::istream& in);
Table read(std::string_view text);

/// Locale-independent fixed notation, e.g. format_fixed(5.2614, 3) == "5.261".
std::string format_fixed(double value, int decimals);

}  // namespace factoropt::csv

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fairaug::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader. Accepts LF or CRLF line endings; quoted fields may
// contain commas, quotes ("") and newlines. A trailing newline does not
// produce an empty row. Throws ParseError on an unterminated quote or
// stray characters after a closing quote.
std::vector<Row> parse(std::string_view text);

std::vector<Row> read_file(const std::string& path);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

// Writes one LF-terminated row.
void write_row(std::ostream& out, const Row& row);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

// Strict numeric parsing; the whole field must be consumed.
double parse_double(std::string_view field, std::string_view what);
long long parse_int(std::string_view field, std::string_view what);

}  // namespace fairaug::csv

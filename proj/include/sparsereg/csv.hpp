#pragma once

#include <string>
#include <vector>

namespace sparsereg {

// Raw tabular data: header row plus string cells. Produced by the RFC 4180
// reader below; consumed by the vocabulary builder and encoder.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return header.size(); }
    // Index of a named column, or throws std::invalid_argument.
    std::size_t column_index(const std::string& name) const;
};

// Parses RFC 4180 CSV text: quoted fields, "" escapes, commas and newlines
// inside quotes, CRLF or LF line endings. A header row is required and every
// record must have the same field count as the header.
Table parse_csv(const std::string& text);

Table read_csv_file(const std::string& path);

// Quotes a field if it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

}  // namespace sparsereg

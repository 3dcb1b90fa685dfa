#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heisttrace {

// Minimal RFC-4180-ish CSV: comma separated, optional double-quoted fields
// with "" escapes, LF line endings (lone CR before LF tolerated on input).

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no);
std::string csv_escape(std::string_view field);

// Header-aware reader over an input stream. Rows are addressed by column
// name; the header row is required.
class CsvReader {
public:
    CsvReader(std::istream& in, const std::string& source_name);

    // Advances to the next data row; false at EOF. Skips blank lines.
    bool next();

    std::size_t line_no() const { return line_no_; }
    // Missing column or out-of-range cell -> error with line number.
    std::string_view get(const std::string& column) const;
    // Empty cell -> nullopt.
    std::optional<std::string_view> get_optional(const std::string& column) const;
    bool has_column(const std::string& column) const { return columns_.count(column) != 0; }

private:
    std::istream& in_;
    std::string source_;
    std::map<std::string, std::size_t> columns_;
    std::vector<std::string> row_;
    std::size_t line_no_ = 0;
};

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void write_row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

}  // namespace heisttrace

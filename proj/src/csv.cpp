#include "heisttrace/csv.hpp"

#include <istream>
#include <ostream>

#include "heisttrace/error.hpp"

namespace heisttrace {

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            cur.push_back(c);
            ++i;
            continue;
        }
        if (c == '"' && cur.empty()) {
            quoted = true;
            ++i;
            continue;
        }
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
            ++i;
            continue;
        }
        cur.push_back(c);
        ++i;
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no);
    out.push_back(std::move(cur));
    return out;
}

std::string csv_escape(std::string_view field) {
    bool needs = field.find_first_of(",\"\n") != std::string_view::npos;
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

CsvReader::CsvReader(std::istream& in, const std::string& source_name)
    : in_(in), source_(source_name) {
    std::string header;
    while (std::getline(in_, header)) {
        ++line_no_;
        if (!header.empty() && header.back() == '\r') header.pop_back();
        if (header.empty()) continue;
        auto names = split_csv_line(header, line_no_);
        for (std::size_t i = 0; i < names.size(); ++i) columns_[names[i]] = i;
        return;
    }
    throw Error(source_ + ": missing CSV header row");
}

bool CsvReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        row_ = split_csv_line(line, line_no_);
        return true;
    }
    return false;
}

std::string_view CsvReader::get(const std::string& column) const {
    auto it = columns_.find(column);
    if (it == columns_.end())
        throw Error(source_ + ": missing required column '" + column + "'");
    if (it->second >= row_.size())
        throw ParseError(source_ + ": row too short for column '" + column + "'", line_no_);
    return row_[it->second];
}

std::optional<std::string_view> CsvReader::get_optional(const std::string& column) const {
    auto it = columns_.find(column);
    if (it == columns_.end() || it->second >= row_.size()) return std::nullopt;
    std::string_view v = row_[it->second];
    if (v.empty()) return std::nullopt;
    return v;
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(fields[i]);
    }
    out_ << '\n';
}

}  // namespace heisttrace

#include "gbv/csv.hpp"

#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv {

std::size_t CsvTable::col(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError("missing column: " + std::string(name));
}

namespace {

std::vector<std::vector<std::string>> parse_rows(std::string_view content, char delim) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        row_started = false;
    };
    while (i < content.size()) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
            row_started = true;
        } else if (c == delim) {
            end_field();
            row_started = true;
        } else if (c == '\n') {
            if (row_started || !field.empty()) end_row();
        } else if (c == '\r') {
            // swallowed; \r\n handled by the \n branch
        } else {
            field += c;
            row_started = true;
        }
        ++i;
    }
    if (in_quotes) throw ParseError("unterminated quoted field");
    if (row_started || !field.empty()) end_row();
    return rows;
}

bool needs_quoting(std::string_view f, char delim) {
    for (char c : f)
        if (c == delim || c == '"' || c == '\n' || c == '\r') return true;
    return false;
}

void append_field(std::string& out, std::string_view f, char delim) {
    if (!needs_quoting(f, delim)) {
        out += f;
        return;
    }
    out += '"';
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

} // namespace

CsvTable parse_csv(std::string_view content, char delim) {
    auto rows = parse_rows(content, delim);
    if (rows.empty()) throw ParseError("empty table: header row required");
    CsvTable t;
    t.header = std::move(rows.front());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != t.header.size())
            throw ParseError("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                             " fields, header has " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(rows[r]));
    }
    return t;
}

CsvTable read_csv(const std::string& path, char delim) {
    return parse_csv(read_file(path), delim);
}

std::string to_csv(const CsvTable& table, char delim) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += delim;
        append_field(out, table.header[i], delim);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += delim;
            append_field(out, row[i], delim);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const CsvTable& table, char delim) {
    write_file(path, to_csv(table, delim));
}

} // namespace gbv

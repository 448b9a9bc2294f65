#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gbv {

// Delimiter-separated table with a header row. Quoting follows RFC 4180:
// fields containing the delimiter, quotes, or newlines are double-quoted.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index for a header name; throws ParseError when absent.
    std::size_t col(std::string_view name) const;
};

CsvTable parse_csv(std::string_view content, char delim = ',');
CsvTable read_csv(const std::string& path, char delim = ',');
std::string to_csv(const CsvTable& table, char delim = ',');
void write_csv(const std::string& path, const CsvTable& table, char delim = ',');

} // namespace gbv

#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "mineroi/date.hpp"

namespace mineroi {

// Minimal CSV support for the fixed schemas this project reads and writes:
// comma-separated, UTF-8, one header row, no quoting or embedded commas.

struct CsvTable {
    std::filesystem::path path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // data rows, header excluded
    std::vector<std::size_t> line_numbers;       // 1-based source line per row

    int column(const std::string& name) const;  // -1 when absent
};

// Reads a whole file. Throws InputError on I/O failure, an empty file, or
// ragged rows (with the offending line number).
CsvTable read_csv(const std::filesystem::path& path);

// Validates that the header is exactly `expected` (order included).
void require_columns(const CsvTable& table, const std::vector<std::string>& expected);

// Field parsers that name the file/line on failure.
double parse_double_field(const CsvTable& t, std::size_t row, int col);
Date parse_date_field(const CsvTable& t, std::size_t row, int col);

// Round-trippable formatting used by every CSV/report writer so identical
// inputs produce identical bytes.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& fields);
    void raw_line(const std::string& line);

private:
    std::FILE* f_;
    std::filesystem::path path_;
};

}  // namespace mineroi

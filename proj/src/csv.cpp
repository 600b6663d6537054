#include "mineroi/csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mineroi/error.hpp"

namespace mineroi {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::string location(const CsvTable& t, std::size_t row) {
    return t.path.string() + ":" + std::to_string(t.line_numbers[row]);
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path.string());

    CsvTable table;
    table.path = path;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(lineno);
    }
    if (table.header.empty()) throw InputError("empty CSV file: " + path.string());
    return table;
}

void require_columns(const CsvTable& table, const std::vector<std::string>& expected) {
    if (table.header == expected) return;
    std::ostringstream want, got;
    for (std::size_t i = 0; i < expected.size(); ++i) want << (i ? "," : "") << expected[i];
    for (std::size_t i = 0; i < table.header.size(); ++i) got << (i ? "," : "") << table.header[i];
    throw InputError(table.path.string() + ": header mismatch, expected '" + want.str() +
                     "' but found '" + got.str() + "'");
}

double parse_double_field(const CsvTable& t, std::size_t row, int col) {
    const std::string& s = t.rows[row][static_cast<std::size_t>(col)];
    if (s.empty()) throw InputError(location(t, row) + ": empty numeric field '" + t.header[static_cast<std::size_t>(col)] + "'");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) {
        throw InputError(location(t, row) + ": malformed number '" + s + "' in column '" +
                         t.header[static_cast<std::size_t>(col)] + "'");
    }
    return v;
}

Date parse_date_field(const CsvTable& t, std::size_t row, int col) {
    const std::string& s = t.rows[row][static_cast<std::size_t>(col)];
    try {
        return Date::parse(s);
    } catch (const InputError& e) {
        throw InputError(location(t, row) + ": " + e.what());
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {
    f_ = std::fopen(path.string().c_str(), "wb");
    if (!f_) throw InputError("cannot open file for writing: " + path.string());
}

CsvWriter::~CsvWriter() {
    if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    raw_line(line);
}

void CsvWriter::raw_line(const std::string& line) {
    if (std::fwrite(line.data(), 1, line.size(), f_) != line.size() || std::fputc('\n', f_) == EOF) {
        throw InputError("write failed: " + path_.string());
    }
}

}  // namespace mineroi

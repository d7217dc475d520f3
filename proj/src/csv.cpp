#include "hnpf/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hnpf/errors.hpp"

namespace hnpf::csv {

namespace {

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

} // namespace

std::string format(double value)
{
    if (value == 0.0) {
        return "0"; // also folds -0
    }
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::general, 9);
    return std::string(buf.data(), ptr);
}

void write_row(std::ostream &out, std::span<const std::string> cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << cells[i];
    }
    out << '\n';
}

void write_row(std::ostream &out, std::span<const double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << format(values[i]);
    }
    out << '\n';
}

long Table::column(const std::string &name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return static_cast<long>(i);
        }
    }
    return -1;
}

Table read(std::istream &in)
{
    Table t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw InputError("line " + std::to_string(line_no) + ": expected "
                             + std::to_string(t.header.size()) + " fields, found "
                             + std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto &c : cells) {
            double v = 0.0;
            const char *end = c.data() + c.size();
            auto [ptr, ec] = std::from_chars(c.data(), end, v);
            if (c.empty() || ec != std::errc{} || ptr != end) {
                throw InputError("line " + std::to_string(line_no) + ": '" + c
                                 + "' is not a number");
            }
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
        t.lines.push_back(line_no);
    }
    return t;
}

Table read_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    return read(in);
}

std::vector<std::string> numbered(const std::string &prefix, std::size_t count)
{
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

} // namespace hnpf::csv

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hnpf::csv {

/// Shortest round-trip-stable text for a double at 9 significant digits,
/// independent of the C++ or C locale.
std::string format(double value);

void write_row(std::ostream &out, std::span<const std::string> cells);
void write_row(std::ostream &out, std::span<const double> values);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    /// 1-based line numbers of each row in the source, for error messages.
    std::vector<std::size_t> lines;

    /// Index of a header column, or -1.
    long column(const std::string &name) const;
};

/// Comma-separated numeric table with a header row. Blank lines are skipped.
/// Throws InputError naming the line number on a malformed row.
Table read(std::istream &in);
Table read_file(const std::filesystem::path &path);

std::vector<std::string> numbered(const std::string &prefix, std::size_t count);

} // namespace hnpf::csv

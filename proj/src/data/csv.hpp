#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fairfix::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, header row required, double quotes for fields that
/// contain commas or quotes. Every row must have as many fields as the header.
Table read(const std::filesystem::path& path);
void write(const Table& table, const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
/// Parses the whole string as a finite double; false on failure.
bool parse_double(const std::string& text, double& value);

}  // namespace fairfix::csv

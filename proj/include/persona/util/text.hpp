#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace persona::util {

/// Splits one CSV line on commas. Quoting is not supported; the formats read
/// here never carry commas inside fields.
std::vector<std::string_view> split_csv(std::string_view line);

std::string_view trim(std::string_view s);

/// Splits text into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> split_lines(std::string_view text);

/// Parses a finite double using the "C" locale ('.' decimal point). Returns
/// nullopt for anything else, including inf/nan and trailing garbage.
std::optional<double> parse_double(std::string_view s);

std::optional<long long> parse_int(std::string_view s);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace persona::util

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace pseudoscore {

/// Splits one record line on the delimiter. No quoting: the dataset format is
/// plain delimiter-separated text and field values never contain the
/// delimiter.
std::vector<std::string> split_fields(std::string_view line, char delim);

/// Reads a delimited file with a header row. Invokes `row` for every
/// subsequent non-empty line with the split fields and the 1-based line
/// number. Throws std::runtime_error if the file cannot be opened.
void for_each_row(const std::string& path, char delim,
                  std::vector<std::string>& header,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& row);

/// Joins fields with the delimiter and a trailing newline.
std::string join_fields(const std::vector<std::string>& fields, char delim);

/// Formats a double with shortest round-trip precision, plain decimal point.
std::string format_double(double v);

}  // namespace pseudoscore

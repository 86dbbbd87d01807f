#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "monosindex/model.hpp"

namespace monosindex {

/// Reads a comma-separated dataset with header X1,...,Xd,Y and at least d + 1
/// rows of finite decimal numbers. Throws DataError naming the line at fault.
Sample read_dataset(std::istream& in);
Sample read_dataset(const std::filesystem::path& path);

/// Writes the same format (header plus rows, '\n' line endings).
void write_dataset(std::ostream& out, const Sample& sample);

/// Shortest of %.12g; the single numeric format for every report.
std::string format_number(double value);

/// format_number parsed back, so JSON carries the same digits as CSV.
double round_to_reported(double value);

}  // namespace monosindex

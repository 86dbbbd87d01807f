#include "monosindex/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "monosindex/errors.hpp"

namespace monosindex {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty() || !std::isfinite(value)) {
    throw DataError("line " + std::to_string(line_no) + ": '" + field +
                    "' is not a finite decimal number");
  }
  return value;
}

}  // namespace

Sample read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw DataError("dataset is empty (missing header)");
  if (header.size() < 3) throw DataError("header needs at least X1,X2,Y");
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "X" + std::to_string(j + 1)) {
      throw DataError("header column " + std::to_string(j + 1) + " is '" + header[j] +
                      "', expected 'X" + std::to_string(j + 1) + "'");
    }
  }
  if (header.back() != "Y") throw DataError("last header column must be 'Y'");

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != d + 1) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(d + 1) + " columns, found " +
                      std::to_string(fields.size()));
    }
    for (const auto& f : fields) values.push_back(parse_number(f, line_no));
    ++rows;
  }
  if (rows < d + 1) {
    throw DataError("dataset has " + std::to_string(rows) + " rows; need at least " +
                    std::to_string(d + 1));
  }

  Matrix xs(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d));
  Vector ys(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      xs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * (d + 1) + j];
    }
    ys(static_cast<Eigen::Index>(i)) = values[i * (d + 1) + d];
  }
  try {
    return Sample(std::move(xs), std::move(ys));
  } catch (const InvalidArgument& ex) {
    throw DataError(ex.what());
  }
}

Sample read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_dataset(in);
}

void write_dataset(std::ostream& out, const Sample& sample) {
  const auto d = sample.dim();
  for (std::size_t j = 0; j < d; ++j) out << 'X' << (j + 1) << ',';
  out << "Y\n";
  for (Eigen::Index i = 0; i < sample.xs().rows(); ++i) {
    for (Eigen::Index j = 0; j < sample.xs().cols(); ++j) {
      out << format_number(sample.xs()(i, j)) << ',';
    }
    out << format_number(sample.ys()(i)) << '\n';
  }
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_to_reported(double value) {
  const std::string s = format_number(value);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace monosindex

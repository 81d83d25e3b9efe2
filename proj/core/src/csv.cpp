#include "simlearn/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace simlearn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, std::size_t line_no) {
  field = trim(field);
  // from_chars rejects a leading '+', which some writers emit.
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw ValidationError("csv line " + std::to_string(line_no) + ": cannot parse '" +
                          std::string(field) + "' as a number");
  }
  return value;
}

}  // namespace

Matrix parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;

    std::vector<double> row;
    while (true) {
      const auto comma = line.find(',');
      row.push_back(parse_field(line.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(rows.front().size()) + " fields, got " +
                            std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }

  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows[0].size());
  Matrix mat(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    for (Eigen::Index j = 0; j < n_cols; ++j) {
      mat(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return mat;
}

std::string format_csv(const Matrix& mat) {
  std::string out;
  char buf[32];
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    for (Eigen::Index j = 0; j < mat.cols(); ++j) {
      if (j > 0) out.push_back(',');
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), mat(i, j));
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

Matrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError("error reading " + path.string());
  }
  try {
    return parse_csv(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_csv(const std::filesystem::path& path, const Matrix& mat) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << format_csv(mat);
  if (!out) {
    throw IoError("error writing " + path.string());
  }
}

}  // namespace simlearn

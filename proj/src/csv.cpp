#include "condreg/csv.hpp"

#include "condreg/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace condreg::csv {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  const std::string f = trim(field);
  if (f == "inf" || f == "+inf") return INFINITY;
  if (f == "-inf") return -INFINITY;
  double value = 0.0;
  const char* begin = f.data();
  const char* end = begin + f.size();
  if (!f.empty() && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (f.empty() || res.ec != std::errc() || res.ptr != end) {
    throw InvalidInput("csv: cannot parse number '" + field + "'");
  }
  return value;
}

Eigen::MatrixXd parse_matrix(const std::string& text, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool header_pending = skip_header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(parse_double(field));
    if (!line.empty() && line.back() == ',') throw InvalidInput("csv: trailing comma");
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "csv: line " << line_no << " has " << row.size() << " fields, expected "
         << rows.front().size();
      throw InvalidInput(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("csv: no numeric rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd read_matrix(const std::string& path, bool skip_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str(), skip_header);
}

std::string format_matrix(const Eigen::MatrixXd& m, const std::vector<std::string>& header) {
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    out += header[j];
  }
  if (!header.empty()) out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot open output file '" + path + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InvalidInput("failed writing '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InvalidInput("cannot move output into place at '" + path + "'");
  }
}

}  // namespace condreg::csv

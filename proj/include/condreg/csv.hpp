#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace condreg::csv {

/// Shortest decimal that parses back to the same double ("inf", "-inf",
/// "nan" for non-finite values). Locale independent.
std::string format_double(double x);

/// Parses a full field as a double; throws InvalidInput on junk.
double parse_double(const std::string& field);

/// Comma-separated numeric rows. Blank lines are skipped; all rows must have
/// the same width. With `skip_header` the first non-blank line is dropped.
Eigen::MatrixXd parse_matrix(const std::string& text, bool skip_header = false);
Eigen::MatrixXd read_matrix(const std::string& path, bool skip_header = false);

std::string format_matrix(const Eigen::MatrixXd& m, const std::vector<std::string>& header = {});

/// Writes to a temporary file in the same directory, then renames it over
/// `path`, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace condreg::csv

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "llagraph/linalg.hpp"

namespace llagraph::io {

/// Parses a numeric CSV table. A first line that does not parse as numbers is
/// treated as a header and skipped. Every row must have the same column count.
Eigen::MatrixXd parse_csv_table(std::istream& in);

Dataset read_dataset_csv(const std::filesystem::path& path);
SymmetricMatrix read_matrix_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

void write_csv_table(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

}  // namespace llagraph::io

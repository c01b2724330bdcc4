#include "llagraph/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "llagraph/error.hpp"

namespace llagraph::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<std::vector<double>> parse_row(std::string_view line) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        auto field = trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - pos));
        if (!field.empty() && field.front() == '+') field.remove_prefix(1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            return std::nullopt;
        }
        values.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return values;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    return in;
}

}  // namespace

Eigen::MatrixXd parse_csv_table(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto row = parse_row(line);
        if (!row) {
            if (rows.empty() && line_no == 1) continue;  // header
            throw InputError("non-numeric CSV field on line " + std::to_string(line_no));
        }
        if (!rows.empty() && row->size() != rows.front().size()) {
            throw InputError("ragged CSV row on line " + std::to_string(line_no));
        }
        for (double v : *row) {
            if (!std::isfinite(v)) {
                throw InputError("non-finite CSV value on line " + std::to_string(line_no));
            }
        }
        rows.push_back(std::move(*row));
    }
    if (rows.empty()) {
        throw InputError("CSV has no data rows");
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return out;
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return Dataset(parse_csv_table(in));
}

SymmetricMatrix read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return SymmetricMatrix(parse_csv_table(in));
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv_table(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    write_csv_table(out, m);
    if (!out) {
        throw InputError("write failed for " + path.string());
    }
}

}  // namespace llagraph::io

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "llagraph/error.hpp"
#include "llagraph/io.hpp"

using namespace llagraph;

namespace {

Eigen::MatrixXd parse(const std::string& text) {
    std::istringstream in(text);
    return io::parse_csv_table(in);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("header detection and parsing") {
    const auto m = parse("a,b\n1,2\n3.5,-4e-3\n");
    REQUIRE(m.rows() == 2);
    CHECK(m(1, 1) == -4e-3);
    CHECK(parse("1,2\n3,4\n").rows() == 2);
    CHECK(parse(" 1 , +2\r\n\n3,4\n")(0, 1) == 2.0);
}

TEST_CASE("malformed tables are rejected") {
    CHECK_THROWS_AS(parse("1,2\n3\n"), InputError);
    CHECK_THROWS_AS(parse("1,2\nx,4\n"), InputError);
    CHECK_THROWS_AS(parse("1,nan\n"), InputError);
    CHECK_THROWS_AS(parse("1,inf\n"), InputError);
    CHECK_THROWS_AS(parse("a,b\n"), InputError);
    CHECK_THROWS_AS(parse(""), InputError);
    CHECK_THROWS_AS(parse("1,,2\n"), InputError);
}

TEST_CASE("matrices round-trip exactly through CSV") {
    const auto dir = std::filesystem::temp_directory_path() / "llagraph_io_test";
    std::filesystem::create_directories(dir);
    const auto m = testing::random_pd(7, 5);
    io::write_matrix_csv(dir / "m.csv", m.dense());
    CHECK(io::read_matrix_csv(dir / "m.csv") == m);

    const Eigen::MatrixXd y = testing::random_matrix(4, 3, 2);
    io::write_matrix_csv(dir / "y.csv", y);
    CHECK(io::read_dataset_csv(dir / "y.csv").rows() == y);

    CHECK_THROWS_AS(io::read_dataset_csv(dir / "missing.csv"), InputError);
    CHECK_THROWS_AS(io::write_matrix_csv(dir / "no" / "such" / "dir.csv", y), InputError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1e-300) == "1e-300");
    CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}

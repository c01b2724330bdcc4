#include <doctest.h>

#include <cmath>

#include "llagraph/error.hpp"
#include "llagraph/simgen.hpp"

using namespace llagraph;

TEST_SUITE("simgen") {

TEST_CASE("single hub of ten nodes") {
    StructureSpec spec;
    spec.q = 10;
    const auto omega = generate_precision(spec);
    for (int j = 1; j < 10; ++j) CHECK(omega(0, j) == 0.25);
    for (int i = 1; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j) CHECK(omega(i, j) == 0.0);
    CHECK(count_edges(omega) == 9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(omega.dense());
    CHECK(eig.eigenvalues().minCoeff() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("hubs structure at the benchmark size") {
    StructureSpec spec;
    const auto omega = generate_precision(spec);
    CHECK(count_edges(omega) == 90);
    CHECK(is_positive_definite(omega));
    spec.q = 25;
    CHECK(count_edges(generate_precision(spec)) == 9 + 9 + 4);
}

TEST_CASE("hubs support ignores the seed; random support does not") {
    StructureSpec hubs;
    hubs.q = 30;
    auto other = hubs;
    other.seed = 99;
    CHECK(generate_precision(hubs) == generate_precision(other));

    StructureSpec random;
    random.kind = StructureKind::random;
    random.q = 60;
    random.edge_prob = 0.05;
    auto random2 = random;
    random2.seed = 1;
    CHECK(generate_precision(random) == generate_precision(random));
    CHECK_FALSE(generate_precision(random) == generate_precision(random2));
}

TEST_CASE("random structure values and dominance") {
    StructureSpec spec;
    spec.kind = StructureKind::random;
    spec.q = 80;
    spec.edge_prob = 0.05;
    spec.seed = 3;
    const auto omega = generate_precision(spec);
    CHECK(count_edges(omega) > 0);
    for (int i = 0; i < 80; ++i) {
        double off = 0.0;
        for (int j = 0; j < 80; ++j) {
            if (j == i) continue;
            const double v = std::abs(omega(i, j));
            off += v;
            if (v != 0.0) {
                CHECK(v >= 0.2);
                CHECK(v <= 1.0);
            }
        }
        CHECK(omega(i, i) == doctest::Approx(1.0 + off).epsilon(1e-14));
    }
    spec.edge_prob = 0.0;
    CHECK(generate_precision(spec) == SymmetricMatrix::identity(80));
}

TEST_CASE("invalid specs") {
    StructureSpec spec;
    spec.q = 10;
    spec.edge_value = 0.34;
    CHECK_THROWS_AS(generate_precision(spec), ConstructionError);
    spec.edge_value = 0.25;
    spec.q = 1;
    CHECK_THROWS_AS(generate_precision(spec), InputError);
    spec.q = 10;
    spec.kind = StructureKind::random;
    spec.edge_prob = 1.5;
    CHECK_THROWS_AS(generate_precision(spec), InputError);
    CHECK_THROWS_AS(parse_structure_kind("cliques"), InputError);
}

TEST_CASE("gaussian samples") {
    const auto eye = SymmetricMatrix::identity(4);
    const auto a = sample_gaussian(eye, 5, 17);
    CHECK(a.rows() == sample_gaussian(eye, 5, 17).rows());
    CHECK_FALSE(a.rows() == sample_gaussian(eye, 5, 18).rows());
    const auto one = sample_gaussian(eye, 1, 2);
    CHECK(one.n() == 1);
    CHECK(one.rows().allFinite());

    const int m = 100000;
    const auto big = sample_gaussian(eye, m, 3);
    const Eigen::MatrixXd cov = big.rows().transpose() * big.rows() / m;
    CHECK((cov - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.02);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(0, 1) = bad(1, 0) = 3.0;
    CHECK_THROWS_AS(sample_gaussian(SymmetricMatrix(bad), 4, 1), InputError);
}

TEST_CASE("empirical covariance converges to the inverse precision") {
    for (auto kind : {StructureKind::hubs, StructureKind::random}) {
        StructureSpec spec;
        spec.kind = kind;
        spec.q = 20;
        spec.hub_group_size = 5;
        spec.edge_prob = 0.1;
        spec.seed = 8;
        const auto omega = generate_precision(spec);
        const int m = 100000;
        const auto data = sample_gaussian(omega, m, 21);
        const Eigen::MatrixXd cov = data.rows().transpose() * data.rows() / m;
        const Eigen::MatrixXd sigma = inverse_pd(omega).dense();
        const double scale = sigma.diagonal().maxCoeff();
        CHECK((cov - sigma).cwiseAbs().maxCoeff() < 4.0 / std::sqrt(m) * scale);
    }
}

}

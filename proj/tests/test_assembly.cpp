#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ctm/assembly.hpp"
#include "ctm/entropic_solver.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ctm;

TEST_CASE("box constraints validation and pinning") {
    auto unit = BoxConstraints::unit(4);
    CHECK(unit.dim() == 4);
    CHECK(unit.pinned().empty());

    Vector lo(3), hi(3);
    lo << 0.0, 0.3, 0.5;
    hi << 1.0, 0.3, 0.9;
    BoxConstraints box(lo, hi);
    CHECK(box.is_pinned(1));
    CHECK_FALSE(box.is_pinned(0));
    CHECK(box.pinned() == std::vector<int>{1});

    hi(2) = 0.4; // inverted
    CHECK_THROWS_AS((BoxConstraints(lo, hi)), std::invalid_argument);
    hi(2) = 1.5; // outside [0,1]
    CHECK_THROWS_AS((BoxConstraints(lo, hi)), std::invalid_argument);
    CHECK_THROWS_AS(BoxConstraints(lo, Vector::Ones(2)), std::invalid_argument);
}

TEST_CASE("data vectors from published values") {
    RatingScale s({"AAA", "AA", "A", "BBB", "BB", "B", "CCC", "D"});
    DefaultCurveTable t(s, fixtures::published_seven_year_curves());
    auto q = build_data_vectors(t, 7);
    REQUIRE(q.size() == 7);
    CHECK(q[0](5) == doctest::Approx(0.9847));          // 1 - 0.0153
    CHECK(q[1](6) == doctest::Approx(0.1607));          // 0.4645 - 0.3038
    CHECK(q[0](0) == doctest::Approx(1.0));             // no first-year defaults at the top
    CHECK(q[6](6) == doctest::Approx(0.6582 - 0.3038)); // widest gap in the table

    CHECK_THROWS_AS(build_data_vectors(t, 8), std::out_of_range);
    CHECK_THROWS_AS(build_data_vectors(t, 0), std::out_of_range);
}

TEST_CASE("zero first-year column gives all-ones data vector") {
    RatingScale s({"G", "D"});
    Matrix curves(1, 2);
    curves << 0.0, 0.0;
    DefaultCurveTable t(s, curves);
    auto q = build_data_vectors(t, 1);
    CHECK(q[0](0) == 1.0);
}

TEST_CASE("assembled system dimensions") {
    std::mt19937_64 rng(11);
    auto chain8 = oracle::random_chain(rng, 8, 0.1);
    auto table = cumulative_default_curves(chain8, 7);

    auto s7 = assemble_system(table, 7, BoxConstraints::unit(49));
    CHECK(s7.a.rows() == 49); // square when years match the transient count
    CHECK(s7.a.cols() == 49);
    CHECK(s7.y.size() == 49);
    CHECK(s7.years_used == 7);

    auto s4 = assemble_system(table, 4, BoxConstraints::unit(49));
    CHECK(s4.a.rows() == 28); // underdetermined
    CHECK(s4.a.cols() == 49);

    auto toy = cumulative_default_curves(fixtures::scalar_chain(0.7, 0.3), 1);
    auto s1 = assemble_system(toy, 1, BoxConstraints::unit(1));
    CHECK(s1.a.rows() == 1);
    CHECK(s1.a(0, 0) == 1.0);
    CHECK(s1.y(0) == doctest::Approx(0.7));

    CHECK_THROWS_AS(assemble_system(table, 7, BoxConstraints::unit(10)), std::invalid_argument);
}

TEST_CASE("block structure of the stacked system") {
    std::mt19937_64 rng(12);
    auto chain = oracle::random_chain(rng, 4, 0.2); // strictly positive rows
    auto table = cumulative_default_curves(chain, 3);
    auto sys = assemble_system(table, 3, BoxConstraints::unit(9));
    const int m = 3;

    // block row 0: the all-ones pattern on each diagonal block
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m * m; ++j) {
            double expect = (j >= i * m && j < (i + 1) * m) ? 1.0 : 0.0;
            CHECK(sys.a(i, j) == expect);
        }
    // block row k: the year-k column as the repeated pattern
    for (int k = 1; k < 3; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                CHECK(sys.a(k * m + i, i * m + j) == table.column(k)(j));
    // y is the concatenation of the data vectors
    auto q = build_data_vectors(table, 3);
    for (int k = 0; k < 3; ++k)
        CHECK((sys.y.segment(k * m, m) - q[k]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sys.y.minCoeff() >= -1.0);
    CHECK(sys.y.maxCoeff() <= 1.0);

    // structural nonzeros: N block rows, each K-1 rows with K-1 entries
    int nonzeros = 0;
    for (int r = 0; r < sys.a.rows(); ++r)
        for (int c = 0; c < sys.a.cols(); ++c)
            if (sys.a(r, c) != 0.0) ++nonzeros;
    CHECK(nonzeros == 3 * m * m);
}

TEST_CASE("residual at the generating matrix vanishes") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 6; ++rep) {
        auto chain = oracle::random_chain(rng, 3 + static_cast<int>(rng() % 5), 0.15);
        const int m = chain.q().size();
        auto table = cumulative_default_curves(chain, m + 2);
        auto sys = assemble_system(table, m, BoxConstraints::unit(m * m));
        CHECK(residual(sys, vector_from_matrix(chain.q())) <= 1e-12);
    }

    auto toy = cumulative_default_curves(fixtures::scalar_chain(0.7, 0.3), 1);
    auto sys = assemble_system(toy, 1, BoxConstraints::unit(1));
    CHECK(residual(sys, Vector::Zero(1)) == doctest::Approx(0.7));
    CHECK_THROWS_AS(residual(sys, Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("vectorization round trip") {
    Vector v(4);
    v << 1, 0, 0, 1;
    RatingScale s({"A", "B", "D"});
    CHECK(matrix_from_vector(v, s).entries().isIdentity(0.0));

    auto chain = fixtures::example_chain();
    auto back = matrix_from_vector(vector_from_matrix(chain.q()), chain.scale());
    CHECK((back.entries() - chain.q().entries()).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(matrix_from_vector(Vector::Zero(5), s), std::invalid_argument);
}

TEST_CASE("solving commutes with relabeling") {
    std::mt19937_64 rng(14);
    auto chain = oracle::random_chain(rng, 4, 0.25);
    const int m = 3;
    auto table = cumulative_default_curves(chain, 6);

    SolverConfig config;
    config.tolerance = 1e-9;
    config.max_iterations = 500000;
    auto sol = solve(assemble_system(table, 2, BoxConstraints::unit(m * m)), config);
    REQUIRE(sol.converged);

    const std::vector<int> perm = {2, 1, 0};
    std::vector<std::string> labels;
    for (int i : perm) labels.push_back(chain.scale().label(i));
    labels.push_back(chain.scale().default_label());
    Matrix curves_p(m, 6);
    for (int i = 0; i < m; ++i) curves_p.row(i) = table.curves().row(perm[i]);
    DefaultCurveTable table_p(RatingScale(labels), curves_p);
    auto sol_p = solve(assemble_system(table_p, 2, BoxConstraints::unit(m * m)), config);
    REQUIRE(sol_p.converged);

    auto q0 = matrix_from_vector(sol.x_star, chain.scale(), 1e-6);
    auto qp = matrix_from_vector(sol_p.x_star, RatingScale(labels), 1e-6);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            CHECK(std::abs(qp.entries()(i, j) - q0.entries()(perm[i], perm[j])) <= 1e-6);
}

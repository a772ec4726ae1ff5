#include <cmath>
#include "doctest.h"
#include "mtcperm/catdata.hpp"
#include "test_util.hpp"

using namespace mtcperm;

TEST_CASE("bundled categories load and pass every axiom") {
    for (auto name : {"trivial", "fibonacci", "ising", "z2", "z3"}) {
        CAPTURE(name);
        auto cat = load_category(data_path(name));
        auto rep = consistency_report(cat);
        for (auto& c : rep.checks) {
            CAPTURE(c.id);
            CHECK(c.max_residual < 1e-10);
        }
    }
}

TEST_CASE("perturbed fixtures are rejected with the failing axiom named") {
    LoadOptions lazy;
    lazy.validate = false;
    auto bp = load_category(fixture_path("broken_pentagon"), lazy);
    auto p = verify_pentagon(bp);
    CHECK_FALSE(p.pass);
    CHECK(p.max_residual > 1e-2);
    auto bh = load_category(fixture_path("broken_hexagon"), lazy);
    auto h = verify_hexagon(bh);
    CHECK_FALSE(h.pass);
    CHECK(h.max_residual > 1e-2);
    CHECK(verify_pentagon(bh).pass);
    try {
        load_category(fixture_path("broken_pentagon"));
        FAIL("expected ConsistencyError");
    } catch (const ConsistencyError& e) {
        CHECK(std::string(e.what()).find("pentagon") != std::string::npos);
        MESSAGE(std::string(e.what()));
    }
    CHECK_THROWS_AS(load_category(fixture_path("broken_hexagon")), ConsistencyError);
}

TEST_CASE("serial and parallel sweeps agree") {
    auto cat = load_category(data_path("ising"));
    auto a = verify_pentagon(cat, Exec{false, 1});
    auto b = verify_pentagon(cat, Exec{true, 4});
    CHECK(a.max_residual == b.max_residual);
    CHECK(a.worst_index == b.worst_index);
    LoadOptions lazy;
    lazy.validate = false;
    auto bp = load_category(fixture_path("broken_pentagon"), lazy);
    auto c = verify_pentagon(bp, Exec{false, 1});
    auto d = verify_pentagon(bp, Exec{true, 3});
    CHECK(c.max_residual == d.max_residual);
    CHECK(c.worst_index == d.worst_index);
}

TEST_CASE("quantum dimensions") {
    auto fib = load_category(data_path("fibonacci"));
    CHECK(fib.qdims[1] == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-12));
    CHECK(fib.qdims[0] == 1.0);
    auto is = load_category(data_path("ising"));
    CHECK(is.qdims[is.label_index("sigma")] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    for (auto name : {"trivial", "fibonacci", "ising", "z2", "z3"}) {
        auto c = load_category(data_path(name));
        CHECK(verify_dimension_law(c).max_residual < 1e-9);
        for (int i = 0; i < c.rank(); ++i) CHECK(c.qdims[i] == doctest::Approx(c.qdims[c.dual[i]]));
    }
}

TEST_CASE("S-matrix and modularity") {
    auto fib = load_category(data_path("fibonacci"));
    CHECK(is_modular(fib));
    auto triv = load_category(data_path("trivial"));
    CHECK(triv.S.rows() == 1);
    CHECK(std::abs(triv.S(0, 0) - 1.0) < 1e-12);
    CHECK(is_modular(triv));
    auto sym = load_category(fixture_path("z2_symmetric"));
    CHECK_FALSE(is_modular(sym));
    for (auto name : {"fibonacci", "ising", "z2", "z3"}) CHECK(is_modular(load_category(data_path(name))));
}

TEST_CASE("unit strictness and schema errors") {
    CHECK_THROWS_AS(parse_category("{\"labels\": [\"1\",\"x\"], \"N\": {\"1,1,1\":1}}"), ConsistencyError);
    CHECK_THROWS_AS(parse_category("{\"labels\": ["), ParseError);
    CHECK_THROWS_AS(parse_category("{\"labels\": [\"1\"], \"N\": {\"1,1,q\":1}}"), ParseError);
    CHECK_THROWS_AS(load_category("/nonexistent.json"), ParseError);
    // F block required by N but absent
    CHECK_THROWS_AS(parse_category("{\"labels\": [\"1\"], \"N\": {\"1,1,1\":1}, \"R\": {\"1,1,1\": [[[1,0]]]}}"),
                    MissingData);
}

TEST_CASE("Deligne powers") {
    auto fib = load_category(data_path("fibonacci"));
    auto d2 = deligne_power(fib, 2);
    REQUIRE(d2.rank() == 4);
    CHECK(d2.label(0) == "(1,1)");
    CHECK(d2.label(1) == "(1,tau)");
    CHECK(d2.label(2) == "(tau,1)");
    CHECK(d2.label(3) == "(tau,tau)");
    auto d3 = deligne_power(fib, 3);
    CHECK(d3.N(7, 7, 7) == 1);
    auto triv = load_category(data_path("trivial"));
    CHECK(deligne_power(triv, 3).rank() == 1);
    CHECK_THROWS_AS(deligne_power(fib, 20), SizeError);
    CHECK_THROWS_AS(deligne_power(fib, 3, 5), SizeError);

    auto m2 = d2.materialize();
    CHECK(verify_pentagon(m2).max_residual < 1e-10);
    CHECK(verify_hexagon(m2).max_residual < 1e-10);
    CHECK(consistency_report(m2).pass());
    for (int i = 0; i < m2.rank(); ++i) {
        CHECK(std::abs(m2.theta[i] - d2.theta(i)) < 1e-14);
        CHECK(m2.qdims[i] == d2.qdim(i));
    }
    CHECK(max_abs(m2.S - s_matrix(m2)) < 1e-12);

    // n = 1 is bit-identical
    auto is = load_category(data_path("ising"));
    auto m1 = deligne_power(is, 1).materialize();
    CHECK(m1.labels == is.labels);
    CHECK(m1.qdims == is.qdims);
    CHECK(m1.theta == is.theta);
    CHECK(m1.S == is.S);
    for (int a = 0; a < is.rank(); ++a)
        for (int b = 0; b < is.rank(); ++b)
            for (int c = 0; c < is.rank(); ++c)
                for (int d = 0; d < is.rank(); ++d) {
                    auto x = is.F(a, b, c, d);
                    auto y = m1.F(a, b, c, d);
                    REQUIRE((x == nullptr) == (y == nullptr));
                    if (x) CHECK(x->M == y->M);
                }
}

TEST_CASE("Deligne cube of Fibonacci is consistent") {
    auto fib = load_category(data_path("fibonacci"));
    auto m3 = deligne_power(fib, 3).materialize();
    CHECK(m3.rank() == 8);
    CHECK(verify_pentagon(m3).max_residual < 1e-10);
    CHECK(verify_hexagon(m3).max_residual < 1e-10);
}

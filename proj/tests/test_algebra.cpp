#include <random>

#include "doctest.h"
#include "mtcperm/algebra.hpp"
#include "mtcperm/permutation.hpp"
#include "test_util.hpp"

using namespace mtcperm;

namespace {

const Check* find_check(const Report& r, const std::string& suffix) {
    for (const auto& c : r.checks)
        if (c.id.size() >= suffix.size() && c.id.compare(c.id.size() - suffix.size(), suffix.size(), suffix) == 0)
            return &c;
    return nullptr;
}

// right action of A on itself by m o c^{-1}_{A,A}; A_P is not commutative, so this is no module
ModuleObject inverse_braided_action(const Evaluator& ev, const AlgebraObject& a) {
    ModuleObject m;
    m.carrier = a.carrier;
    m.action = BlockMorphism{tensor_objects(a.carrier, a.carrier), a.carrier, {}};
    const int n = a.carrier->size();
    for (const auto& [k, mm] : a.mult.blocks) {
        int s2 = k.first / n, s1 = k.first % n;
        DMorph c = dbraid(ev, a.carrier->s[s1].words, a.carrier->s[s2].words, -1);
        m.action.add(s1 * n + s2, k.second, dcompose(ev, mm, c));
    }
    return m;
}

}  // namespace

TEST_CASE("unit algebra and its opposite") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    for (int n = 1; n <= 3; ++n) {
        AlgebraObject u = unit_algebra(ev, n);
        Report r = check_algebra(ev, u);
        CHECK(r.pass());
        for (const auto& c : r.checks) CHECK(c.max_residual == 0.0);
        AlgebraObject o = opposite(ev, u);
        CHECK(bm_residual(o.mult, u.mult) == 0.0);
    }
}

TEST_CASE("A_P is an algebra; opposite and tensor products too") {
    for (const char* name : {"fibonacci", "ising", "z3"}) {
        auto cat = load_category(data_path(name));
        Evaluator ev(cat);
        AlgebraObject ap = build_A_P(ev);
        CHECK(ap.carrier->size() == cat.rank());
        Report r = check_algebra(ev, ap);
        INFO(name, " ", r.to_text());
        CHECK(r.pass());
        CHECK(check_algebra(ev, opposite(ev, ap)).pass());
        AlgebraObject oo = opposite(ev, opposite(ev, ap));
        CHECK(check_algebra(ev, oo).pass());
        CHECK(check_algebra(ev, tensor_algebra(ev, ap, ap)).pass());
        // tensor with the unit algebra keeps the data
        AlgebraObject t = tensor_algebra(ev, ap, unit_algebra(ev, 2));
        CHECK(t.carrier->size() == ap.carrier->size());
        CHECK(bm_residual(t.mult, ap.mult) < 1e-14);
    }
}

TEST_CASE("A_P on Vec is the unit algebra") {
    auto triv = load_category(data_path("trivial"));
    Evaluator ev(triv);
    AlgebraObject ap = build_A_P(ev);
    CHECK(ap.carrier->size() == 1);
    Report r = check_algebra(ev, ap);
    CHECK(r.pass());
    for (const auto& c : r.checks) CHECK(c.max_residual < 1e-15);
}

TEST_CASE("A_P unit block at (tau, 1) -> tau is the identity") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    AlgebraObject ap = build_A_P(ev);
    const DMorph* m = ap.mult.block(1 * 2 + 0, 1);
    REQUIRE(m);
    CHECK(dresidual_dense(dense(*m), dense(didentity(ev, ap.carrier->s[1].words))) < 1e-12);
}

TEST_CASE("A_P with one hat-star block zeroed fails") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    AlgebraObject ap = build_A_P(ev);
    // (tau, tau) -> tau
    auto it = ap.mult.blocks.find({3, 1});
    REQUIRE(it != ap.mult.blocks.end());
    for (auto& t : it->second.terms)
        for (auto& b : t.f[0].blk) b.setZero();
    Report r = check_algebra(ev, ap);
    CHECK_FALSE(r.pass());
    REQUIRE(r.first_failure());
    CHECK(r.first_failure()->max_residual > 1e-2);
}

TEST_CASE("tensor product of algebras is associative on C^3 block data") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    AlgebraObject a1 = build_A1(ev), a2 = build_A2(ev);
    AlgebraObject l = tensor_algebra(ev, tensor_algebra(ev, opposite(ev, a1), a2), a1);
    AlgebraObject r = tensor_algebra(ev, opposite(ev, a1), tensor_algebra(ev, a2, a1));
    REQUIRE(l.carrier->size() == r.carrier->size());
    for (int s = 0; s < l.carrier->size(); ++s) CHECK(l.carrier->s[s].words == r.carrier->s[s].words);
    CHECK(bm_residual(l.mult, r.mult) < 1e-12);
    CHECK(bm_residual(l.unit, r.unit) < 1e-12);
}

TEST_CASE("modules: regular, free, and a wrong braid orientation") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    AlgebraObject ap = build_A_P(ev);
    ModuleObject reg{ap.carrier, ap.mult, false};
    CHECK(check_module(ev, reg, ap).pass());
    ModuleObject left{ap.carrier, ap.mult, true};
    CHECK(check_module(ev, left, ap).pass());
    CHECK(check_bimodule(ev, left, reg, ap, ap).pass());

    auto x = std::make_shared<SumObject>();
    x->nfactors = 2;
    x->s.push_back({{1}, {{Factor{1, false}}, {Factor{1, true}}}});
    ModuleObject fm = free_module(ev, x, ap);
    CHECK(check_module(ev, fm, ap).pass());

    ModuleObject bad = inverse_braided_action(ev, ap);
    Report r = check_module(ev, bad, ap);
    CHECK_FALSE(r.pass());
}

TEST_CASE("algebra homomorphisms") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    AlgebraObject ap = build_A_P(ev);
    BlockMorphism id = bm_identity(ev, ap.carrier);
    Report r = check_algebra_hom(ev, id, ap, ap);
    CHECK(r.pass());
    for (const auto& c : r.checks) CHECK(c.max_residual < 1e-14);
    CHECK(is_invertible(ev, id));

    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    BlockMorphism rnd = id;
    for (auto& [k, m] : rnd.blocks)
        for (auto& t : m.terms)
            for (auto& f : t.f)
                for (auto& b : f.blk)
                    for (int i = 0; i < b.rows(); ++i)
                        for (int j = 0; j < b.cols(); ++j) b(i, j) = cplx(nd(rng), nd(rng));
    Report rr = check_algebra_hom(ev, rnd, ap, ap);
    CHECK_FALSE(rr.pass());
    const Check* mc = find_check(rr, "multiplication");
    REQUIRE(mc);
    CHECK(mc->max_residual > 1e-1);

    BlockMorphism zero = id;
    zero.blocks.erase({1, 1});
    CHECK_FALSE(is_invertible(ev, zero));
}

TEST_CASE("serial and parallel checkers agree") {
    auto ising = load_category(data_path("ising"));
    Evaluator ev(ising);
    AlgebraObject t = tensor_algebra(ev, build_A_P(ev), build_A_P(ev));
    Report a = check_algebra(ev, t, Exec{false, 1});
    Report b = check_algebra(ev, t, Exec{true, 4});
    REQUIRE(a.checks.size() == b.checks.size());
    for (size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].max_residual == b.checks[i].max_residual);
        CHECK(a.checks[i].worst_index == b.checks[i].worst_index);
    }
}

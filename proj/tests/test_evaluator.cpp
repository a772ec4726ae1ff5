#include <cmath>
#include <random>

#include "doctest.h"
#include "mtcperm/evaluator.hpp"
#include "test_util.hpp"

using namespace mtcperm;

namespace {
const char* kCats[] = {"trivial", "fibonacci", "ising", "z2", "z3"};

std::vector<Factor> all_factors(const FusionCategoryData& c) {
    std::vector<Factor> v;
    for (int l = 0; l < c.rank(); ++l) {
        v.push_back({l, false});
        v.push_back({l, true});
    }
    return v;
}
}  // namespace

TEST_CASE("hom_dim and basis enumeration") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    CHECK(ev.hom_dim(up_word({1, 1}), up_word({1})) == 1);
    CHECK(ev.hom_dim(up_word({1}), up_word({0})) == 0);
    CHECK(ev.hom_dim(up_word({1, 1, 1}), up_word({0})) == 1);
    CHECK(ev.enumerate_basis(up_word({1, 1}), 1).size() == 1);
    CHECK(ev.enumerate_basis({}, 0).size() == 1);
    auto is = load_category(data_path("ising"));
    Evaluator ei(is);
    int s = is.label_index("sigma");
    CHECK(ei.enumerate_basis(up_word({s, s}), s).empty());
    CHECK(ei.hom_dim(up_word({s, s, s, s}), up_word({0})) == 2);
    CHECK_THROWS_AS(ei.enumerate_basis(up_word({s}), 7), UnknownLabel);
}

TEST_CASE("snake identities and loop values") {
    for (auto name : kCats) {
        auto cat = load_category(data_path(name));
        Evaluator ev(cat);
        for (Factor x : all_factors(cat)) {
            CAPTURE(name);
            CAPTURE(x.label);
            CAPTURE(x.down);
            Program p1(Word{x});
            p1.then(1, ev.cup(star(x))).then(0, ev.cap(x));
            CHECK(Evaluator::residual(p1.evaluate(ev), ev.identity({x})) < 1e-12);
            Program p2(Word{x});
            p2.then(0, ev.cup(x)).then(1, ev.cap(star(x)));
            CHECK(Evaluator::residual(p2.evaluate(ev), ev.identity({x})) < 1e-12);
            Program loop(Word{});
            loop.then(0, ev.cup(x)).then(0, ev.cap(x));
            CHECK(std::abs(loop.evaluate(ev).blk[0](0, 0) - cat.qdims[x.label]) < 1e-12);
        }
    }
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    Program loop(Word{});
    loop.then(0, ev.cup({1, false})).then(0, ev.cap({1, false}));
    CHECK(std::abs(loop.evaluate(ev).blk[0](0, 0) - 1.6180339887498949) < 1e-9);
}

TEST_CASE("Reidemeister II and III for every label assignment") {
    for (auto name : kCats) {
        auto cat = load_category(data_path(name));
        Evaluator ev(cat);
        auto fs = all_factors(cat);
        double r2 = 0, r3 = 0;
        for (Factor a : fs)
            for (Factor b : fs) {
                Word w{a, b};
                r2 = std::max(r2, Evaluator::residual(ev.braid_program(w, {1, -1}), ev.identity(w)));
                r2 = std::max(r2, Evaluator::residual(ev.braid_program(w, {-1, 1}), ev.identity(w)));
                for (Factor c : fs) {
                    Word w3{a, b, c};
                    r3 = std::max(r3, Evaluator::residual(ev.braid_program(w3, {1, 2, 1}), ev.braid_program(w3, {2, 1, 2})));
                    r3 = std::max(r3, Evaluator::residual(ev.braid_program(w3, {-1, -2, -1}), ev.braid_program(w3, {-2, -1, -2})));
                }
            }
        CAPTURE(name);
        CHECK(r2 < 1e-9);
        CHECK(r3 < 1e-9);
    }
}

TEST_CASE("r_move on a pair fusing to the unit is the R-symbol") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    Morph r = ev.r_move(up_word({1, 1}), 0);
    CHECK(std::abs(r.blk[0](0, 0) - fib.R(1, 1, 0)(0, 0)) < 1e-14);
    Morph t = ev.apply_twist(up_word({0}), 0);
    CHECK(std::abs(t.blk[0](0, 0) - 1.0) < 1e-14);
    CHECK_THROWS_AS(ev.r_move(up_word({1}), 0), std::out_of_range);
    CHECK_THROWS_AS(ev.apply_at(ev.braid({1, false}, {1, false}, 1), up_word({1, 1}), 1), PositionError);
}

TEST_CASE("f_move is invertible and trivial on unit strands") {
    auto is = load_category(data_path("ising"));
    Evaluator ev(is);
    Word w = up_word({1, 1, 1, 1});
    for (int p = 0; p < 3; ++p) {
        auto F = ev.f_move(w, p);
        for (auto& m : F)
            if (m.size()) CHECK(Eigen::FullPivLU<Mat>(m).rank() == m.cols());
    }
}

TEST_CASE("twist and ribbon relations") {
    for (auto name : kCats) {
        auto cat = load_category(data_path(name));
        Evaluator ev(cat);
        for (int a = 0; a < cat.rank(); ++a)
            for (int b = 0; b < cat.rank(); ++b) {
                Word w = up_word({a, b});
                // theta_{ab} = c c (theta_a (x) theta_b), acting on each total t as theta_t
                Morph th = ev.twist_word(w, 1);
                for (int t = 0; t < cat.rank(); ++t)
                    if (th.blk[t].size())
                        CHECK(max_abs(th.blk[t] - cat.theta[t] * Mat::Identity(th.blk[t].rows(), th.blk[t].cols())) < 1e-12);
                CHECK(Evaluator::residual(ev.compose(ev.twist_word(w, -1), th), ev.identity(w)) < 1e-12);
            }
    }
}

TEST_CASE("Hopf link gives the S-matrix") {
    for (auto name : kCats) {
        auto cat = load_category(data_path(name));
        Evaluator ev(cat);
        double D = cat.global_dim();
        for (int a = 0; a < cat.rank(); ++a)
            for (int b = 0; b < cat.rank(); ++b) {
                Factor A{a, false}, B{b, false};
                Program p(Word{});
                p.then(0, ev.cup(A)).then(1, ev.cup(B));
                p.then(0, ev.braid(A, B, 1));
                p.then(0, ev.braid(B, A, 1));
                p.then(1, ev.cap(B)).then(0, ev.cap(A));
                cplx v = p.evaluate(ev).blk[0](0, 0) / D;
                CHECK(std::abs(v - cat.S(cat.dual[a], b)) < 1e-12);
            }
    }
}

TEST_CASE("naturality of the braiding with basis vertices") {
    for (auto name : {"fibonacci", "ising", "z3"}) {
        auto cat = load_category(data_path(name));
        Evaluator ev(cat);
        auto fs = all_factors(cat);
        double worst = 0;
        for (Factor I : fs)
            for (Factor J : fs)
                for (int k = 0; k < cat.rank(); ++k) {
                    Factor K{k, false};
                    int n = cat.N(ev.simple(I), ev.simple(J), k);
                    for (int m = 1; m <= n; ++m)
                        for (Factor L : fs) {
                            Morph al = ev.vertex(I, J, K, m);
                            Program lhs(Word{I, J, L});
                            lhs.then(0, al).then(0, ev.braid(K, L, 1));
                            Program rhs(Word{I, J, L});
                            rhs.then(1, ev.braid(J, L, 1)).then(0, ev.braid(I, L, 1)).then(1, al);
                            worst = std::max(worst, Evaluator::residual(lhs.evaluate(ev), rhs.evaluate(ev)));
                        }
                }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("duals of morphisms") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    Factor t{1, false};
    Morph a = ev.vertex(t, t, t, 1);
    Morph ad = ev.dual(a);
    CHECK(ad.src == Word{star(t)});
    CHECK(ad.tgt == (Word{star(t), star(t)}));
    CHECK(Evaluator::residual(ev.dual(ad), a) < 1e-12);
    auto is = load_category(data_path("ising"));
    Evaluator ei(is);
    for (Factor I : all_factors(is))
        for (Factor J : all_factors(is))
            for (int k = 0; k < is.rank(); ++k)
                for (int m = 1; m <= is.N(ei.simple(I), ei.simple(J), k); ++m) {
                    Morph v = ei.vertex(I, J, {k, false}, m);
                    CHECK(Evaluator::residual(ei.dual(ei.dual(v)), v) < 1e-12);
                }
}

TEST_CASE("tensor products") {
    auto is = load_category(data_path("ising"));
    Evaluator ev(is);
    Word a = up_word({1, 2}), b = up_word({1, 1});
    Morph idt = ev.tensor(ev.identity(a), ev.identity(b));
    CHECK(Evaluator::residual(idt, ev.identity(concat(a, b))) < 1e-12);
    Word w = up_word({1, 1, 2, 1});
    Morph br = ev.braid({1, false}, {2, false}, 1);
    Morph viaT = ev.tensor(ev.identity(up_word({1})), ev.tensor(br, ev.identity(up_word({1}))));
    CHECK(Evaluator::residual(viaT, ev.apply_at(br, w, 1)) < 1e-12);
    // interchange law
    Morph f = ev.braid_program(up_word({1, 1}), {1});
    Morph g = ev.braid_program(up_word({1, 2, 1}), {1, -2});
    Morph lhs = ev.compose(ev.tensor(ev.identity(f.tgt), g), ev.tensor(f, ev.identity(g.src)));
    Morph rhs = ev.tensor(f, g);
    CHECK(Evaluator::residual(lhs, rhs) < 1e-12);
    CHECK_THROWS_AS(ev.compose(f, g), ShapeMismatch);
}

TEST_CASE("evaluate is functorial on random splits") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    std::mt19937 rng(7);
    Word w = up_word({1, 1, 1, 1});
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> gens;
        for (int k = 0; k < 8; ++k) {
            int i = 1 + static_cast<int>(rng() % 3);
            gens.push_back(rng() % 2 ? i : -i);
        }
        size_t cut = 1 + rng() % 6;
        std::vector<int> g1(gens.begin(), gens.begin() + cut), g2(gens.begin() + cut, gens.end());
        Morph whole = ev.braid_program(w, gens);
        Morph p1 = ev.braid_program(w, g1);
        Morph p2 = ev.braid_program(p1.tgt, g2);
        CHECK(Evaluator::residual(whole, ev.compose(p2, p1)) < 1e-12);
    }
}

TEST_CASE("programs report the failing step") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    Program p(up_word({1, 0}));
    p.then(0, ev.twist({1, false}, 1));
    try {
        p.then(1, ev.twist({1, false}, 1));
        FAIL("expected TypeMismatch");
    } catch (const TypeMismatch& e) {
        CHECK(e.slice == 1);
    }
    CHECK_THROWS_AS(ev.vertex({1, false}, {1, false}, {1, false}, 2), UnknownBasisId);
}

TEST_CASE("Deligne-factor morphisms combine by per-block kron") {
    auto fib = load_category(data_path("fibonacci"));
    Evaluator ev(fib);
    Word t1 = up_word({1}), tt = up_word({1, 1});
    DMorph a = dpure({ev.braid_program(tt, {1}), ev.identity(t1)});
    DMorph b = dpure({ev.braid_program(tt, {-1}), ev.identity(t1)});
    DMorph id = didentity(ev, {tt, t1});
    CHECK(dresidual(dcompose(ev, b, a), id) < 1e-12);
    auto blocks = dense(a);
    CHECK(blocks.size() == 2);
    DMorph ta = dtensor(ev, a, id);
    CHECK(ta.src[0].size() == 4);
    DMorph s = a;
    dadd_into(s, a, -1.0);
    CHECK(dresidual(s, dzero(a.src, a.tgt)) < 1e-14);
}

TEST_CASE("diagram identities report") {
    for (auto name : kCats) {
        CAPTURE(name);
        auto cat = load_category(data_path(name));
        Evaluator ev(cat);
        auto par = diagram_identities_report(ev);
        auto ser = diagram_identities_report(ev, Exec{false});
        CHECK(par.pass());
        REQUIRE(par.checks.size() == 4);
        for (size_t i = 0; i < par.checks.size(); ++i) {
            CHECK(par.checks[i].max_residual < 1e-9);
            CHECK(par.checks[i].max_residual == doctest::Approx(ser.checks[i].max_residual).epsilon(1e-12));
            CHECK(par.checks[i].worst_index == ser.checks[i].worst_index);
        }
    }
}

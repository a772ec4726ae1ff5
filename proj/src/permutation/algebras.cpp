#include "mtcperm/permutation.hpp"

#include <algorithm>
#include <tuple>

namespace mtcperm {

namespace {

Factor up(int i) { return {i, false}; }
Factor dn(int i) { return {i, true}; }

// canonical 1-dimensional morphism from the empty word to a word of unit strands
Morph unit_embedding(const Evaluator& ev, const Word& w) {
    Morph m = ev.zero({}, w);
    m.blk[0](0, 0) = 1.0;
    return m;
}

void check_size(const Evaluator& ev, const PermOptions& opt) {
    long r = ev.cat().rank();
    if (r * r * r > opt.rank_cap)
        throw SizeError("carrier with " + std::to_string(r * r * r) + " summands exceeds rank cap " +
                        std::to_string(opt.rank_cap));
}

int key3(int r, int i, int j, int k) { return (i * r + j) * r + k; }

// theta_a theta_b / (theta_c theta_d) when the twist correction is on, else 1
cplx twist_ratio(const Evaluator& ev, const PermOptions& opt, std::initializer_list<int> num,
                 std::initializer_list<int> den) {
    cplx x = 1.0;
    if (!opt.twist_correction) return x;
    for (int a : num) x *= ev.cat().theta[a];
    for (int a : den) x /= ev.cat().theta[a];
    return x;
}

}  // namespace

const PairedBasis& BasisBook::get(Factor I, Factor J, Factor K) {
    std::lock_guard<std::mutex> lk(mu_);
    auto key = std::array<Factor, 3>{I, J, K};
    auto it = book_.find(key);
    if (it != book_.end()) return *it->second;
    Mat G;
    if (rng_) {
        int n = ev_.hom_dim({I, J}, {K});
        if (n > 0) G = random_invertible(n, *rng_);
    }
    auto pb = std::make_unique<PairedBasis>(paired_basis(ev_, I, J, K, G));
    return *book_.emplace(key, std::move(pb)).first->second;
}

const std::vector<Morph>& BasisBook::check_hat(Factor I, Factor J, Factor K) {
    const PairedBasis& pb = get(I, J, K);
    std::lock_guard<std::mutex> lk(mu_);
    auto key = std::array<Factor, 3>{I, J, K};
    auto it = check_hat_.find(key);
    if (it != check_hat_.end()) return it->second;
    return check_hat_.emplace(key, kappa_dual_basis(ev_, pb.check)).first->second;
}

void require_modular(const FusionCategoryData& cat) {
    if (!is_modular(cat)) throw NotModular("category '" + cat.name + "' has a singular S-matrix");
}

AlgebraObject build_A_P(const Evaluator& ev, const PermOptions& opt) {
    require_modular(ev.cat());
    const int r = ev.cat().rank();
    if (r > opt.rank_cap) throw SizeError("rank exceeds cap");
    BasisBook book(ev, opt.basis_rng);
    auto car = std::make_shared<SumObject>();
    car->nfactors = 2;
    for (int i = 0; i < r; ++i) car->s.push_back({{i}, {{dn(i)}, {up(i)}}});
    AlgebraObject a;
    a.name = "A_P";
    a.carrier = car;
    a.mult = BlockMorphism{tensor_objects(car, car), car, {}};
    for (int k = 0; k < r; ++k)
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const PairedBasis& pb = book.get(up(i), up(j), up(k));
                if (!pb.size()) continue;
                Morph c = ev.braid(dn(i), dn(j), -1);
                for (size_t m = 0; m < pb.size(); ++m)
                    a.mult.add(i * r + j, k, dpure({ev.compose(pb.hat_star[m], c), pb.basis[m]}));
            }
    a.unit = BlockMorphism{unit_object(2), car, {}};
    a.unit.add(0, 0, dpure({unit_embedding(ev, {dn(0)}), unit_embedding(ev, {up(0)})}));
    return a;
}

AlgebraObject lift_algebra(const Evaluator& ev, const AlgebraObject& a, int pos) {
    auto lift_obj = [pos](const SumPtr& x) {
        auto o = std::make_shared<SumObject>();
        o->nfactors = x->nfactors + 1;
        for (auto s : x->s) {
            s.words.insert(s.words.begin() + pos, Word{});
            o->s.push_back(std::move(s));
        }
        return SumPtr(o);
    };
    Morph one = ev.identity({});
    auto lift_morph = [&](const DMorph& m) {
        DMorph o = m;
        o.src.insert(o.src.begin() + pos, Word{});
        o.tgt.insert(o.tgt.begin() + pos, Word{});
        for (auto& t : o.terms) t.f.insert(t.f.begin() + pos, one);
        return o;
    };
    auto lift_bm = [&](const BlockMorphism& b, const SumPtr& src, const SumPtr& tgt) {
        BlockMorphism o{src, tgt, {}};
        for (const auto& [k, m] : b.blocks) o.blocks.emplace(k, lift_morph(m));
        return o;
    };
    AlgebraObject l;
    l.name = a.name;
    l.carrier = lift_obj(a.carrier);
    l.mult = lift_bm(a.mult, tensor_objects(l.carrier, l.carrier), l.carrier);
    l.unit = lift_bm(a.unit, unit_object(l.carrier->nfactors), l.carrier);
    return l;
}

AlgebraObject build_A1(const Evaluator& ev, const PermOptions& opt) {
    AlgebraObject a = lift_algebra(ev, build_A_P(ev, opt), 2);
    a.name = "A1";
    return a;
}

AlgebraObject build_A2(const Evaluator& ev, const PermOptions& opt) {
    AlgebraObject a = lift_algebra(ev, build_A_P(ev, opt), 0);
    a.name = "A2";
    return a;
}

AlgebraObject build_A(const Evaluator& ev, const PermOptions& opt) {
    check_size(ev, opt);
    AlgebraObject a1 = build_A1(ev, opt), a2 = build_A2(ev, opt);
    AlgebraObject a = tensor_algebra(ev, tensor_algebra(ev, opposite(ev, a1), a2), a1);
    a.name = "A";
    return a;
}

AlgebraObject build_B(const Evaluator& ev, const PermOptions& opt) {
    check_size(ev, opt);
    AlgebraObject a1 = build_A1(ev, opt), a2 = build_A2(ev, opt);
    AlgebraObject b = tensor_algebra(ev, tensor_algebra(ev, opposite(ev, a2), a1), a2);
    b.name = "B";
    return b;
}

SumPtr carrier_A(const Evaluator& ev) {
    const int r = ev.cat().rank();
    auto o = std::make_shared<SumObject>();
    o->nfactors = 3;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                o->s.push_back({{i, j, k}, {{dn(i), dn(k)}, {up(i), dn(j), up(k)}, {up(j)}}});
    return o;
}

SumPtr carrier_B(const Evaluator& ev) {
    const int r = ev.cat().rank();
    auto o = std::make_shared<SumObject>();
    o->nfactors = 3;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                o->s.push_back({{i, j, k}, {{dn(j)}, {dn(i), up(j), dn(k)}, {up(i), up(k)}}});
    return o;
}

// key (i, j, kt)
SumPtr carrier_C(const Evaluator& ev) {
    const int r = ev.cat().rank();
    auto o = std::make_shared<SumObject>();
    o->nfactors = 3;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                o->s.push_back({{i, j, k}, {{dn(k)}, {up(i), dn(j), up(k), dn(i)}, {up(j)}}});
    return o;
}

AlgebraObject build_C(const Evaluator& ev, const PermOptions& opt) {
    require_modular(ev.cat());
    check_size(ev, opt);
    const int r = ev.cat().rank();
    BasisBook book(ev, opt.basis_rng);
    AlgebraObject c;
    c.name = "C";
    c.carrier = carrier_C(ev);
    const int n = c.carrier->size();
    c.mult = BlockMorphism{tensor_objects(c.carrier, c.carrier), c.carrier, {}};
    // carries (i j k i*)(i' j' k' i'*) to (i' i j' j k k' i* i'*)
    const std::vector<int> gens{4, 3, 5, 2, 4, 6, 1, -3};
    std::vector<std::tuple<int, int, DMorph>> blocks;
    std::mutex mu;
    parallel_for(
        static_cast<std::int64_t>(n) * n,
        [&](std::int64_t idx) {
            const auto& s1 = c.carrier->s[idx / n];
            const auto& s2 = c.carrier->s[idx % n];
            int i = s1.key[0], j = s1.key[1], k = s1.key[2];
            int i2 = s2.key[0], j2 = s2.key[1], k2 = s2.key[2];
            Word w8 = concat(s1.words[1], s2.words[1]);
            Morph P = ev.braid_program(w8, gens);
            Word wp = P.tgt;
            Morph c0 = ev.braid(dn(k), dn(k2), -1);
            for (int i3 = 0; i3 < r; ++i3) {
                const PairedBasis& pg = book.get(up(i2), up(i), up(i3));
                if (!pg.size()) continue;
                for (int j3 = 0; j3 < r; ++j3) {
                    const PairedBasis& pd = book.get(up(j), up(j2), up(j3));
                    if (!pd.size()) continue;
                    for (int k3 = 0; k3 < r; ++k3) {
                        const PairedBasis& pb = book.get(up(k), up(k2), up(k3));
                        if (!pb.size()) continue;
                        DMorph acc;
                        bool first = true;
                        for (size_t b = 0; b < pb.size(); ++b) {
                            Morph f0 = ev.compose(pb.hat_star[b], c0);
                            for (size_t d = 0; d < pd.size(); ++d) {
                                Morph f1;
                                for (size_t g = 0; g < pg.size(); ++g) {
                                    Program p(wp);
                                    p.then(0, pg.basis[g]).then(1, pd.hat_star[d]).then(2, pb.basis[b]).then(
                                        3, pg.hat_star[g]);
                                    Morph x = ev.compose(p.evaluate(ev), P);
                                    f1 = g == 0 ? x : ev.add(f1, x);
                                }
                                DMorph t = dpure({f0, f1, pd.basis[d]});
                                if (first) {
                                    acc = t;
                                    first = false;
                                } else {
                                    dadd_into(acc, t);
                                }
                            }
                        }
                        std::lock_guard<std::mutex> lk(mu);
                        blocks.emplace_back(static_cast<int>(idx), key3(r, i3, j3, k3), std::move(acc));
                    }
                }
            }
        },
        opt.exec);
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return std::tie(std::get<0>(a), std::get<1>(a)) <
                                                        std::tie(std::get<0>(b), std::get<1>(b)); });
    for (auto& [s, t, m] : blocks) c.mult.blocks.emplace(std::make_pair(s, t), std::move(m));
    c.unit = BlockMorphism{unit_object(3), c.carrier, {}};
    c.unit.add(0, key3(r, 0, 0, 0),
               dpure({unit_embedding(ev, {dn(0)}), unit_embedding(ev, {up(0), dn(0), up(0), dn(0)}),
                      unit_embedding(ev, {up(0)})}));
    return c;
}

BlockMorphism build_f1(const Evaluator& ev, const PermOptions& opt) {
    require_modular(ev.cat());
    check_size(ev, opt);
    const int r = ev.cat().rank();
    BasisBook book(ev, opt.basis_rng);
    BlockMorphism f{carrier_A(ev), carrier_C(ev), {}};
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                for (int kt = 0; kt < r; ++kt) {
                    const PairedBasis& pa = book.get(dn(i), dn(k), dn(kt));
                    cplx t = twist_ratio(ev, opt, {k}, {kt});
                    for (size_t a = 0; a < pa.size(); ++a)
                        f.add(key3(r, i, j, k), key3(r, i, j, kt),
                              dpure({pa.basis[a], ev.tensor(ev.identity({up(i), dn(j)}), pa.check[a]),
                                     ev.identity({up(j)})}, t));
                }
    return f;
}

// C(i, j, kt) -> B(jt, kt, i)
BlockMorphism build_f2(const Evaluator& ev, const PermOptions& opt) {
    require_modular(ev.cat());
    check_size(ev, opt);
    const int r = ev.cat().rank();
    BasisBook book(ev, opt.basis_rng);
    BlockMorphism f{carrier_C(ev), carrier_B(ev), {}};
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int kt = 0; kt < r; ++kt)
                for (int jt = 0; jt < r; ++jt) {
                    const PairedBasis& pb = book.get(up(i), dn(j), dn(jt));
                    cplx t = twist_ratio(ev, opt, {j}, {i});
                    for (size_t b = 0; b < pb.size(); ++b)
                        f.add(key3(r, i, j, kt), key3(r, jt, kt, i),
                              dpure({ev.identity({dn(kt)}), ev.tensor(pb.basis[b], ev.identity({up(kt), dn(i)})),
                                     pb.check[b]}, t));
                }
    return f;
}

BlockMorphism build_f(const Evaluator& ev, const PermOptions& opt) {
    return bm_compose(ev, build_f2(ev, opt), build_f1(ev, opt));
}

// B(jt, kt, i) -> A(i, j, k)
BlockMorphism build_f_inv(const Evaluator& ev, const PermOptions& opt) {
    require_modular(ev.cat());
    check_size(ev, opt);
    const int r = ev.cat().rank();
    BasisBook book(ev, opt.basis_rng);
    BlockMorphism f{carrier_B(ev), carrier_A(ev), {}};
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                for (int jt = 0; jt < r; ++jt)
                    for (int kt = 0; kt < r; ++kt) {
                        const PairedBasis& pa = book.get(dn(i), dn(k), dn(kt));
                        const PairedBasis& pb = book.get(up(i), dn(j), dn(jt));
                        if (!pa.size() || !pb.size()) continue;
                        const auto& ca = book.check_hat(dn(i), dn(k), dn(kt));
                        const auto& cb = book.check_hat(up(i), dn(j), dn(jt));
                        cplx t = twist_ratio(ev, opt, {i, kt}, {j, k});
                        for (size_t a = 0; a < pa.size(); ++a)
                            for (size_t b = 0; b < pb.size(); ++b)
                                f.add(key3(r, jt, kt, i), key3(r, i, j, k),
                                      dpure({pa.hat[a], ev.tensor(pb.hat[b], ca[a]), cb[b]}, t));
                    }
    return f;
}

Report algebra_suite(const Evaluator& ev, const PermOptions& opt) {
    Report rep;
    rep.suite = "algebra";
    rep.category = ev.cat().name;
    std::vector<AlgebraObject> algs{build_A_P(ev, opt), build_A1(ev, opt), build_A2(ev, opt),
                                    build_A(ev, opt), build_B(ev, opt), build_C(ev, opt)};
    for (const auto& a : algs)
        for (Check c : check_algebra(ev, a, opt.exec).checks) {
            if (c.id.rfind(a.name + ":", 0) != 0) c.id = a.name + ":" + c.id;
            rep.add(std::move(c));
        }
    return rep;
}

Report verify_iso_suite(const Evaluator& ev, const PermOptions& opt) {
    Report rep;
    rep.suite = "iso";
    rep.category = ev.cat().name;
    const double tol = ev.cat().tolerance;
    auto merge = [&](const Report& r, const std::string& prefix) {
        for (Check c : r.checks) {
            if (!prefix.empty()) c.id = prefix + ":" + c.id;
            rep.add(std::move(c));
        }
    };
    AlgebraObject A = build_A(ev, opt), B = build_B(ev, opt), C = build_C(ev, opt);
    merge(check_algebra(ev, A, opt.exec), "");
    merge(check_algebra(ev, B, opt.exec), "");
    merge(check_algebra(ev, C, opt.exec), "");
    BlockMorphism f1 = build_f1(ev, opt), f2 = build_f2(ev, opt);
    BlockMorphism f = bm_compose(ev, f2, f1), finv = build_f_inv(ev, opt);
    merge(check_algebra_hom(ev, f1, A, C, opt.exec), "f1");
    merge(check_algebra_hom(ev, f2, C, B, opt.exec), "f2");
    merge(check_algebra_hom(ev, f, A, B, opt.exec), "f");
    merge(check_algebra_hom(ev, finv, B, A, opt.exec), "f_inv");
    std::string w;
    double r1 = bm_residual(bm_compose(ev, f, finv), bm_identity(ev, B.carrier), &w);
    rep.add(make_check("f o f_inv = id", r1, w, tol));
    double r2 = bm_residual(bm_compose(ev, finv, f), bm_identity(ev, A.carrier), &w);
    rep.add(make_check("f_inv o f = id", r2, w, tol));
    bool inv = is_invertible(ev, f, tol);
    Check c = make_check("f invertible", inv ? 0.0 : 1.0, "", tol);
    rep.add(c);
    return rep;
}

}  // namespace mtcperm

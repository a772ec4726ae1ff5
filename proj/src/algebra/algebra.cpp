#include "mtcperm/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace mtcperm {

int SumObject::index(const std::vector<int>& key) const {
    for (int i = 0; i < size(); ++i)
        if (s[i].key == key) return i;
    return -1;
}

SumPtr unit_object(int nfactors) {
    auto o = std::make_shared<SumObject>();
    o->nfactors = nfactors;
    o->s.push_back({{}, std::vector<Word>(nfactors)});
    return o;
}

SumPtr tensor_objects(const SumPtr& a, const SumPtr& b) {
    if (a->nfactors != b->nfactors) throw ShapeMismatch("tensor of sum objects over different Deligne powers");
    auto o = std::make_shared<SumObject>();
    o->nfactors = a->nfactors;
    for (const auto& x : a->s)
        for (const auto& y : b->s) {
            Summand z;
            z.key = x.key;
            z.key.insert(z.key.end(), y.key.begin(), y.key.end());
            for (int k = 0; k < a->nfactors; ++k) z.words.push_back(concat(x.words[k], y.words[k]));
            o->s.push_back(std::move(z));
        }
    return o;
}

const DMorph* BlockMorphism::block(int s, int t) const {
    auto it = blocks.find({s, t});
    return it == blocks.end() ? nullptr : &it->second;
}

void BlockMorphism::add(int s, int t, const DMorph& m, cplx c) {
    auto it = blocks.find({s, t});
    if (it == blocks.end()) {
        DMorph x = dzero(m.src, m.tgt);
        dadd_into(x, m, c);
        blocks.emplace(std::make_pair(s, t), std::move(x));
    } else {
        dadd_into(it->second, m, c);
    }
}

std::vector<std::vector<std::pair<int, const DMorph*>>> BlockMorphism::by_source() const {
    std::vector<std::vector<std::pair<int, const DMorph*>>> out(src->size());
    for (const auto& [k, m] : blocks) out[k.first].push_back({k.second, &m});
    return out;
}

BlockMorphism bm_identity(const Evaluator& ev, const SumPtr& x) {
    BlockMorphism b{x, x, {}};
    for (int i = 0; i < x->size(); ++i) b.blocks.emplace(std::make_pair(i, i), didentity(ev, x->s[i].words));
    return b;
}

BlockMorphism bm_compose(const Evaluator& ev, const BlockMorphism& g, const BlockMorphism& f) {
    if (g.src != f.tgt && g.src->size() != f.tgt->size()) throw ShapeMismatch("bm_compose: objects differ");
    BlockMorphism h{f.src, g.tgt, {}};
    auto gs = g.by_source();
    for (const auto& [k, fm] : f.blocks)
        for (const auto& [t, gm] : gs[k.second]) h.add(k.first, t, dcompose(ev, *gm, fm));
    return h;
}

BlockMorphism bm_tensor(const Evaluator& ev, const BlockMorphism& f, const BlockMorphism& g) {
    BlockMorphism h{tensor_objects(f.src, g.src), tensor_objects(f.tgt, g.tgt), {}};
    const int nbs = g.src->size(), nbt = g.tgt->size();
    for (const auto& [kf, fm] : f.blocks)
        for (const auto& [kg, gm] : g.blocks)
            h.blocks.emplace(std::make_pair(kf.first * nbs + kg.first, kf.second * nbt + kg.second),
                             dtensor(ev, fm, gm));
    return h;
}

static std::string key_str(const std::vector<int>& k) {
    std::string s = "(";
    for (size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s + ")";
}

double bm_residual(const BlockMorphism& a, const BlockMorphism& b, std::string* worst) {
    double r = 0;
    auto consider = [&](std::pair<int, int> k, double v) {
        if (v > r) {
            r = v;
            if (worst) *worst = key_str(a.src->s[k.first].key) + "->" + key_str(a.tgt->s[k.second].key);
        }
    };
    for (const auto& [k, m] : a.blocks) {
        const DMorph* o = b.block(k.first, k.second);
        consider(k, o ? dresidual(m, *o) : dresidual_dense(dense(m), {}));
    }
    for (const auto& [k, m] : b.blocks)
        if (!a.block(k.first, k.second)) consider(k, dresidual_dense(dense(m), {}));
    return r;
}

DMorph dbraid(const Evaluator& ev, const std::vector<Word>& u, const std::vector<Word>& w, int sign) {
    std::vector<Morph> f;
    for (size_t k = 0; k < u.size(); ++k) f.push_back(ev.braid_words(u[k], w[k], sign));
    return dpure(std::move(f));
}

// ------------------------------------------------------------------ constructions

AlgebraObject unit_algebra(const Evaluator& ev, int nfactors) {
    AlgebraObject a;
    a.name = "unit";
    a.carrier = unit_object(nfactors);
    auto sq = tensor_objects(a.carrier, a.carrier);
    a.mult = BlockMorphism{sq, a.carrier, {}};
    a.mult.blocks.emplace(std::make_pair(0, 0), didentity(ev, a.carrier->s[0].words));
    a.unit = bm_identity(ev, a.carrier);
    return a;
}

AlgebraObject opposite(const Evaluator& ev, const AlgebraObject& a) {
    AlgebraObject o;
    o.name = a.name + "^op";
    o.carrier = a.carrier;
    o.unit = a.unit;
    auto sq = tensor_objects(a.carrier, a.carrier);
    o.mult = BlockMorphism{sq, a.carrier, {}};
    const int n = a.carrier->size();
    for (const auto& [k, m] : a.mult.blocks) {
        int s2 = k.first / n, s1 = k.first % n;  // m block on (s2, s1); precompose with c_{s1,s2}
        DMorph c = dbraid(ev, a.carrier->s[s1].words, a.carrier->s[s2].words, 1);
        o.mult.add(s1 * n + s2, k.second, dcompose(ev, m, c));
    }
    return o;
}

AlgebraObject tensor_algebra(const Evaluator& ev, const AlgebraObject& a, const AlgebraObject& b) {
    AlgebraObject t;
    t.name = "(" + a.name + " (x) " + b.name + ")";
    t.carrier = tensor_objects(a.carrier, b.carrier);
    t.mult = BlockMorphism{tensor_objects(t.carrier, t.carrier), t.carrier, {}};
    const int na = a.carrier->size(), nb = b.carrier->size(), nt = na * nb;
    auto bs = b.mult.by_source();
    for (const auto& [ka, ma] : a.mult.blocks) {
        int a1 = ka.first / na, a2 = ka.first % na;
        for (int b1 = 0; b1 < nb; ++b1)
            for (int b2 = 0; b2 < nb; ++b2) {
                const auto& tb = bs[b1 * nb + b2];
                if (tb.empty()) continue;
                const auto& A1 = a.carrier->s[a1].words;
                const auto& A2 = a.carrier->s[a2].words;
                const auto& B1 = b.carrier->s[b1].words;
                const auto& B2 = b.carrier->s[b2].words;
                std::vector<Morph> mid;
                for (size_t k = 0; k < A1.size(); ++k)
                    mid.push_back(ev.tensor(ev.identity(A1[k]),
                                            ev.tensor(ev.braid_words(B1[k], A2[k], 1), ev.identity(B2[k]))));
                DMorph perm = dpure(std::move(mid));
                for (const auto& [bt, mb] : tb)
                    t.mult.add((a1 * nb + b1) * nt + (a2 * nb + b2), ka.second * nb + bt,
                               dcompose(ev, dtensor(ev, ma, *mb), perm));
            }
    }
    t.unit = BlockMorphism{unit_object(a.carrier->nfactors), t.carrier, {}};
    for (const auto& [ka, ua] : a.unit.blocks)
        for (const auto& [kb, ub] : b.unit.blocks) t.unit.add(0, ka.second * nb + kb.second, dtensor(ev, ua, ub));
    return t;
}

// ------------------------------------------------------------------ checkers

namespace {

// max over (x,y,z) of || sum_u g1[(u,z)] (f1[(x,y)->u] (x) id_z) - sum_v g2[(x,v)] (id_x (x) f2[(y,z)->v]) ||
Check assoc_check(const Evaluator& ev, const std::string& id, const SumObject& X, const SumObject& Y,
                  const SumObject& Z, const BlockMorphism& f1, const BlockMorphism& g1, const BlockMorphism& f2,
                  const BlockMorphism& g2, double tol, const Exec& ex) {
    const int nx = X.size(), ny = Y.size(), nz = Z.size();
    const int nu = f1.tgt->size(), nv = f2.tgt->size();
    auto f1s = f1.by_source(), g1s = g1.by_source(), f2s = f2.by_source(), g2s = g2.by_source();
    MaxResult m = sweep_max(
        static_cast<std::int64_t>(nx) * ny * nz,
        [&](std::int64_t i) -> double {
            int z = static_cast<int>(i % nz), y = static_cast<int>((i / nz) % ny), x = static_cast<int>(i / nz / ny);
            std::map<int, DMorph> lhs, rhs;
            std::vector<Word> src;
            for (int k = 0; k < X.nfactors; ++k)
                src.push_back(concat(concat(X.s[x].words[k], Y.s[y].words[k]), Z.s[z].words[k]));
            for (const auto& [u, fm] : f1s[x * ny + y]) {
                DMorph T = dtensor(ev, *fm, didentity(ev, Z.s[z].words));
                for (const auto& [w, gm] : g1s[u * nz + z]) {
                    DMorph c = dcompose(ev, *gm, T);
                    auto it = lhs.find(w);
                    if (it == lhs.end()) lhs.emplace(w, std::move(c));
                    else dadd_into(it->second, c);
                }
            }
            for (const auto& [v, fm] : f2s[y * nz + z]) {
                DMorph T = dtensor(ev, didentity(ev, X.s[x].words), *fm);
                for (const auto& [w, gm] : g2s[x * nv + v]) {
                    DMorph c = dcompose(ev, *gm, T);
                    auto it = rhs.find(w);
                    if (it == rhs.end()) rhs.emplace(w, std::move(c));
                    else dadd_into(it->second, c);
                }
            }
            (void)nu;
            double r = 0;
            for (auto& [w, a] : lhs) {
                auto it = rhs.find(w);
                r = std::max(r, it == rhs.end() ? dresidual_dense(dense(a), {}) : dresidual(a, it->second));
            }
            for (auto& [w, b] : rhs)
                if (!lhs.count(w)) r = std::max(r, dresidual_dense(dense(b), {}));
            return r;
        },
        ex);
    std::string worst;
    if (m.index >= 0) {
        std::int64_t i = m.index;
        int z = static_cast<int>(i % nz), y = static_cast<int>((i / nz) % ny), x = static_cast<int>(i / nz / ny);
        worst = key_str(X.s[x].key) + "," + key_str(Y.s[y].key) + "," + key_str(Z.s[z].key);
    }
    return make_check(id, m.value, worst, tol);
}

// g o (u (x) id_X) = id_X (unit on the left) or g o (id_X (x) u) = id_X
Check unit_check(const Evaluator& ev, const std::string& id, const SumObject& X, const BlockMorphism& u,
                 const BlockMorphism& g, bool unit_left, double tol, const Exec& ex) {
    const int nx = X.size(), ny = u.tgt->size();
    auto gs = g.by_source();
    MaxResult m = sweep_max(
        nx,
        [&](std::int64_t xi) -> double {
            int x = static_cast<int>(xi);
            std::map<int, DMorph> acc;
            for (const auto& [k, um] : u.blocks) {
                int y = k.second;
                DMorph T = unit_left ? dtensor(ev, um, didentity(ev, X.s[x].words))
                                     : dtensor(ev, didentity(ev, X.s[x].words), um);
                int src = unit_left ? y * nx + x : x * ny + y;
                for (const auto& [w, gm] : gs[src]) {
                    DMorph c = dcompose(ev, *gm, T);
                    auto it = acc.find(w);
                    if (it == acc.end()) acc.emplace(w, std::move(c));
                    else dadd_into(it->second, c);
                }
            }
            double r = 0;
            DMorph idx = didentity(ev, X.s[x].words);
            bool seen = false;
            for (auto& [w, a] : acc) {
                if (w == x) {
                    seen = true;
                    r = std::max(r, dresidual(a, idx));
                } else {
                    r = std::max(r, dresidual_dense(dense(a), {}));
                }
            }
            if (!seen) r = std::max(r, dresidual_dense(dense(idx), {}));
            return r;
        },
        ex);
    return make_check(id, m.value, m.index >= 0 ? key_str(X.s[m.index].key) : "", tol);
}

}  // namespace

Report check_algebra(const Evaluator& ev, const AlgebraObject& a, const Exec& ex) {
    Report rep;
    rep.suite = "algebra";
    rep.category = ev.cat().name;
    const double tol = ev.cat().tolerance;
    const SumObject& A = *a.carrier;
    rep.add(assoc_check(ev, a.name + ":associativity", A, A, A, a.mult, a.mult, a.mult, a.mult, tol, ex));
    rep.add(unit_check(ev, a.name + ":left_unit", A, a.unit, a.mult, true, tol, ex));
    rep.add(unit_check(ev, a.name + ":right_unit", A, a.unit, a.mult, false, tol, ex));
    return rep;
}

Report check_module(const Evaluator& ev, const ModuleObject& m, const AlgebraObject& a, const Exec& ex) {
    Report rep;
    rep.suite = "module";
    rep.category = ev.cat().name;
    const double tol = ev.cat().tolerance;
    const SumObject& M = *m.carrier;
    const SumObject& A = *a.carrier;
    if (m.left) {
        rep.add(assoc_check(ev, "left_module:associativity", A, A, M, a.mult, m.action, m.action, m.action, tol, ex));
        rep.add(unit_check(ev, "left_module:unit", M, a.unit, m.action, true, tol, ex));
    } else {
        rep.add(assoc_check(ev, "right_module:associativity", M, A, A, m.action, m.action, a.mult, m.action, tol, ex));
        rep.add(unit_check(ev, "right_module:unit", M, a.unit, m.action, false, tol, ex));
    }
    return rep;
}

Report check_bimodule(const Evaluator& ev, const ModuleObject& left, const ModuleObject& right,
                      const AlgebraObject& a, const AlgebraObject& b, const Exec& ex) {
    Report rep = check_module(ev, left, a, ex);
    Report r2 = check_module(ev, right, b, ex);
    for (auto& c : r2.checks) rep.add(c);
    rep.suite = "bimodule";
    const SumObject& M = *left.carrier;
    rep.add(assoc_check(ev, "bimodule:compatibility", *a.carrier, M, *b.carrier, left.action, right.action,
                        right.action, left.action, ev.cat().tolerance, ex));
    return rep;
}

ModuleObject free_module(const Evaluator& ev, const SumPtr& x, const AlgebraObject& a) {
    ModuleObject m;
    m.left = false;
    m.carrier = tensor_objects(x, a.carrier);
    m.action = bm_tensor(ev, bm_identity(ev, x), a.mult);
    m.action.src = tensor_objects(m.carrier, a.carrier);
    return m;
}

Report check_algebra_hom(const Evaluator& ev, const BlockMorphism& f, const AlgebraObject& a, const AlgebraObject& b,
                         const Exec& ex) {
    Report rep;
    rep.suite = "algebra_hom";
    rep.category = ev.cat().name;
    const double tol = ev.cat().tolerance;
    // unit
    {
        BlockMorphism fu = bm_compose(ev, f, a.unit);
        std::string w;
        double r = bm_residual(fu, b.unit, &w);
        rep.add(make_check("unit", r, w, tol));
    }
    const int na = a.carrier->size(), nb = b.carrier->size();
    auto fs = f.by_source(), mas = a.mult.by_source(), mbs = b.mult.by_source();
    MaxResult m = sweep_max(
        static_cast<std::int64_t>(na) * na,
        [&](std::int64_t i) -> double {
            int s1 = static_cast<int>(i / na), s2 = static_cast<int>(i % na);
            std::map<int, DMorph> lhs, rhs;
            auto put = [](std::map<int, DMorph>& acc, int k, DMorph&& c) {
                auto it = acc.find(k);
                if (it == acc.end()) acc.emplace(k, std::move(c));
                else dadd_into(it->second, c);
            };
            for (const auto& [s, mm] : mas[i])
                for (const auto& [t, fm] : fs[s]) put(lhs, t, dcompose(ev, *fm, *mm));
            for (const auto& [t1, f1] : fs[s1])
                for (const auto& [t2, f2] : fs[s2]) {
                    DMorph T = dtensor(ev, *f1, *f2);
                    for (const auto& [t, mb] : mbs[t1 * nb + t2]) put(rhs, t, dcompose(ev, *mb, T));
                }
            double r = 0;
            for (auto& [t, x] : lhs) {
                auto it = rhs.find(t);
                r = std::max(r, it == rhs.end() ? dresidual_dense(dense(x), {}) : dresidual(x, it->second));
            }
            for (auto& [t, y] : rhs)
                if (!lhs.count(t)) r = std::max(r, dresidual_dense(dense(y), {}));
            return r;
        },
        ex);
    std::string worst;
    if (m.index >= 0)
        worst = key_str(a.carrier->s[m.index / na].key) + "," + key_str(a.carrier->s[m.index % na].key);
    rep.add(make_check("multiplication", m.value, worst, tol));
    return rep;
}

bool is_invertible(const Evaluator& ev, const BlockMorphism& f, double tol) {
    const int r = ev.cat().rank();
    const int n = f.src->nfactors;
    auto dim_at = [&](const Summand& s, const TotalTuple& tt) {
        int d = 1;
        for (int k = 0; k < n; ++k) d *= ev.basis(s.words[k])->dim(tt[k]);
        return d;
    };
    std::map<std::pair<int, int>, DenseBlocks> dn;
    for (const auto& [k, m] : f.blocks) dn.emplace(k, dense(m));
    int ntup = 1;
    for (int k = 0; k < n; ++k) ntup *= r;
    for (int ti = 0; ti < ntup; ++ti) {
        TotalTuple tt(n);
        for (int k = n - 1, x = ti; k >= 0; --k, x /= r) tt[k] = x % r;
        std::vector<int> ro(f.tgt->size() + 1, 0), co(f.src->size() + 1, 0);
        for (int t = 0; t < f.tgt->size(); ++t) ro[t + 1] = ro[t] + dim_at(f.tgt->s[t], tt);
        for (int s = 0; s < f.src->size(); ++s) co[s + 1] = co[s] + dim_at(f.src->s[s], tt);
        if (ro.back() != co.back()) return false;
        if (ro.back() == 0) continue;
        Mat M = Mat::Zero(ro.back(), co.back());
        for (const auto& [k, blocks] : dn) {
            auto it = blocks.find(tt);
            if (it != blocks.end()) M.block(ro[k.second], co[k.first], it->second.rows(), it->second.cols()) = it->second;
        }
        Eigen::FullPivLU<Mat> lu(M);
        lu.setThreshold(tol);
        if (lu.rank() < M.rows()) return false;
    }
    return true;
}

}  // namespace mtcperm

#include "mtcperm/evaluator.hpp"

#include <algorithm>
#include <functional>

namespace mtcperm {

Word star(const Word& w) {
    Word r;
    for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(star(*it));
    return r;
}

Word concat(const Word& a, const Word& b) {
    Word r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

Word up_word(std::initializer_list<int> labels) {
    Word w;
    for (int l : labels) w.push_back({l, false});
    return w;
}

std::string word_str(const FusionCategoryData& cat, const Word& w) {
    std::string s = "[";
    for (size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + cat.label(w[i].label) + (w[i].down ? "*" : "");
    return s + "]";
}

size_t TreeBasis::VecHash::operator()(const std::vector<int>& v) const noexcept {
    size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<size_t>(x + 7)) * 1099511628211ull;
    return h;
}

static std::vector<int> tree_key(const Tree& t) {
    std::vector<int> k(t.x.begin() + 1, t.x.end());
    k.insert(k.end(), t.mu.begin() + 1, t.mu.end());
    return k;
}

int TreeBasis::index(const Tree& t) const {
    auto it = pos_.find(tree_key(t));
    return it == pos_.end() ? -1 : it->second;
}

void TreeBasis::build(const FusionCategoryData& cat, const Word& w) {
    word = w;
    const int r = cat.rank();
    const int n = static_cast<int>(w.size());
    by_total.assign(r, {});
    std::vector<int> s(n);
    for (int m = 0; m < n; ++m) {
        if (w[m].label < 0 || w[m].label >= r) throw UnknownLabel("label index out of range in word");
        s[m] = w[m].down ? cat.dual[w[m].label] : w[m].label;
    }
    Tree cur;
    cur.x.assign(n + 1, 0);
    cur.mu.assign(n + 1, 1);
    std::function<void(int)> rec = [&](int m) {
        if (m == n) {
            by_total[cur.x[n]].push_back(cur);
            return;
        }
        for (int c = 0; c < r; ++c) {
            int nn = cat.N(cur.x[m], s[m], c);
            for (int mu = 1; mu <= nn; ++mu) {
                cur.x[m + 1] = c;
                cur.mu[m + 1] = mu;
                rec(m + 1);
            }
        }
    };
    rec(0);
    pos_.clear();
    for (int t = 0; t < r; ++t)
        for (size_t i = 0; i < by_total[t].size(); ++i) pos_[tree_key(by_total[t][i])] = static_cast<int>(i);
}

std::shared_ptr<const TreeBasis> Evaluator::basis(const Word& w) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = bases_.find(w);
        if (it != bases_.end()) return it->second;
    }
    auto b = std::make_shared<TreeBasis>();
    b->build(cat_, w);
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = bases_.emplace(w, b);
    return it->second;
}

int Evaluator::hom_dim(const Word& src, const Word& tgt) const {
    auto a = basis(src), b = basis(tgt);
    int d = 0;
    for (int t = 0; t < cat_.rank(); ++t) d += a->dim(t) * b->dim(t);
    return d;
}

std::vector<Tree> Evaluator::enumerate_basis(const Word& w, int root) const {
    if (root < 0 || root >= cat_.rank()) throw UnknownLabel("root label out of range");
    return basis(w)->by_total[root];
}

Morph Evaluator::zero(const Word& src, const Word& tgt) const {
    auto a = basis(src), b = basis(tgt);
    Morph m{src, tgt, {}};
    m.blk.resize(cat_.rank());
    for (int t = 0; t < cat_.rank(); ++t) m.blk[t] = Mat::Zero(b->dim(t), a->dim(t));
    return m;
}

Morph Evaluator::identity(const Word& w) const {
    auto a = basis(w);
    Morph m{w, w, {}};
    m.blk.resize(cat_.rank());
    for (int t = 0; t < cat_.rank(); ++t) m.blk[t] = Mat::Identity(a->dim(t), a->dim(t));
    return m;
}

Morph Evaluator::compose(const Morph& g, const Morph& f) const {
    if (g.src != f.tgt)
        throw ShapeMismatch("compose: " + word_str(cat_, g.src) + " != " + word_str(cat_, f.tgt));
    Morph m{f.src, g.tgt, {}};
    m.blk.resize(cat_.rank());
    for (int t = 0; t < cat_.rank(); ++t) m.blk[t] = g.blk[t] * f.blk[t];
    return m;
}

Morph Evaluator::add(const Morph& a, const Morph& b, cplx cb) const {
    if (a.src != b.src || a.tgt != b.tgt) throw ShapeMismatch("add: word mismatch");
    Morph m = a;
    for (int t = 0; t < cat_.rank(); ++t) m.blk[t] += cb * b.blk[t];
    return m;
}

Morph Evaluator::scale(const Morph& a, cplx c) const {
    Morph m = a;
    for (auto& b : m.blk) b *= c;
    return m;
}

double Evaluator::residual(const Morph& a, const Morph& b) {
    if (a.src != b.src || a.tgt != b.tgt) throw ShapeMismatch("residual: word mismatch");
    double r = 0;
    for (size_t t = 0; t < a.blk.size(); ++t) r = std::max(r, max_abs(a.blk[t] - b.blk[t]));
    return r;
}

// ------------------------------------------------------------------ generators

Morph Evaluator::braid(Factor a, Factor b, int sign) const {
    Morph m = zero({a, b}, {b, a});
    int sa = simple(a), sb = simple(b);
    for (int g = 0; g < cat_.rank(); ++g) {
        int n = cat_.N(sa, sb, g);
        if (!n) continue;
        if (sign > 0) m.blk[g] = cat_.R(sa, sb, g).transpose();
        else m.blk[g] = cat_.R(sb, sa, g).inverse().transpose();
    }
    return m;
}

Morph Evaluator::twist(Factor a, int sign) const {
    Morph m = identity({a});
    cplx th = cat_.theta[simple(a)];
    return scale(m, sign > 0 ? th : 1.0 / th);
}

Morph Evaluator::cup(Factor x) const {
    Morph m = zero({}, {x, star(x)});
    const CupCap& cc = cat_.cupcap[x.label];
    m.blk[0](0, 0) = x.down ? cc.coev : cc.coevt;
    return m;
}

Morph Evaluator::cap(Factor x) const {
    Morph m = zero({x, star(x)}, {});
    const CupCap& cc = cat_.cupcap[x.label];
    m.blk[0](0, 0) = x.down ? cc.evt : cc.ev;
    return m;
}

Morph Evaluator::vertex(Factor I, Factor J, Factor K, int m) const {
    Morph v = zero({I, J}, {K});
    int k = simple(K);
    int n = cat_.N(simple(I), simple(J), k);
    if (m < 1 || m > n) throw UnknownBasisId("vertex index " + std::to_string(m) + " out of range for Hom(" +
                                             word_str(cat_, {I, J}) + "," + word_str(cat_, {K}) + ")");
    v.blk[k](0, m - 1) = 1.0;
    return v;
}

// ------------------------------------------------------------------ local application

Morph Evaluator::apply_local(const Morph& L, const Word& w, int p) const {
    const int kin = static_cast<int>(L.src.size()), kout = static_cast<int>(L.tgt.size());
    Word out(w.begin(), w.begin() + p);
    out.insert(out.end(), L.tgt.begin(), L.tgt.end());
    out.insert(out.end(), w.begin() + p + kin, w.end());
    auto B = basis(w), B2 = basis(out), LS = basis(L.src), LT = basis(L.tgt);
    Morph res = zero(w, out);
    const int r = cat_.rank();

    struct Piece {
        int g, ls, nu;
        cplx c;
    };
    std::vector<Piece> pieces;
    std::vector<std::pair<Tree, cplx>> outs;
    Tree lt_src;
    for (int t = 0; t < r; ++t) {
        const auto& trees = B->by_total[t];
        for (int j = 0; j < static_cast<int>(trees.size()); ++j) {
            const Tree& T = trees[j];
            const int left = T.x[p], top = T.x[p + kin];
            pieces.clear();
            if (kin == 0) {
                pieces.push_back({0, 0, 1, 1.0});
            } else if (kin == 1) {
                pieces.push_back({simple(w[p]), 0, T.mu[p + 1], 1.0});
            } else {
                int s0 = simple(w[p]), s1 = simple(w[p + 1]);
                const FBlock* F = cat_.F(left, s0, s1, top);
                int row = F->li(T.x[p + 1], T.mu[p + 1], T.mu[p + 2]);
                for (size_t c = 0; c < F->right.size(); ++c) {
                    cplx v = F->M(row, c);
                    if (v == cplx(0)) continue;
                    auto [g, mloc, nu] = F->right[c];
                    lt_src.x = {0, s0, g};
                    lt_src.mu = {1, 1, mloc};
                    pieces.push_back({g, LS->index(lt_src), nu, v});
                }
            }
            for (const Piece& pc : pieces) {
                const Mat& Lg = L.blk[pc.g];
                if (Lg.size() == 0) continue;
                for (int lt = 0; lt < Lg.rows(); ++lt) {
                    cplx v = pc.c * Lg(lt, pc.ls);
                    if (v == cplx(0)) continue;
                    const Tree& LTr = LT->by_total[pc.g][lt];
                    outs.clear();
                    Tree nt;
                    nt.x.assign(T.x.begin(), T.x.begin() + p + 1);
                    nt.mu.assign(T.mu.begin(), T.mu.begin() + p + 1);
                    if (kout == 0) {
                        if (top != left || pc.nu != 1) continue;
                        outs.push_back({nt, 1.0});
                    } else if (kout == 1) {
                        nt.x.push_back(top);
                        nt.mu.push_back(pc.nu);
                        outs.push_back({nt, 1.0});
                    } else {
                        int v0 = simple(L.tgt[0]), v1 = simple(L.tgt[1]);
                        const FBlock* F = cat_.F(left, v0, v1, top);
                        int row = F->ri(pc.g, LTr.mu[2], pc.nu);
                        for (size_t c = 0; c < F->left.size(); ++c) {
                            cplx u = F->Minv(row, c);
                            if (u == cplx(0)) continue;
                            auto [e, al, be] = F->left[c];
                            Tree t2 = nt;
                            t2.x.push_back(e);
                            t2.x.push_back(top);
                            t2.mu.push_back(al);
                            t2.mu.push_back(be);
                            outs.push_back({t2, u});
                        }
                    }
                    for (auto& [tr, u] : outs) {
                        tr.x.insert(tr.x.end(), T.x.begin() + p + kin + 1, T.x.end());
                        tr.mu.insert(tr.mu.end(), T.mu.begin() + p + kin + 1, T.mu.end());
                        int idx = B2->index(tr);
                        if (idx < 0) throw NumericalError("internal: recomposed tree not in target basis");
                        res.blk[t](idx, j) += v * u;
                    }
                }
            }
        }
    }
    return res;
}

Morph Evaluator::apply_at(const Morph& local, const Word& w, int pos) const {
    const int kin = static_cast<int>(local.src.size());
    if (pos < 0 || pos + kin > static_cast<int>(w.size()))
        throw PositionError("position " + std::to_string(pos) + " out of range for word of length " +
                            std::to_string(w.size()));
    if (!std::equal(local.src.begin(), local.src.end(), w.begin() + pos))
        throw TypeMismatch("wires " + word_str(cat_, Word(w.begin() + pos, w.begin() + pos + kin)) +
                           " do not match generator input " + word_str(cat_, local.src));
    if (kin <= 2 && local.tgt.size() <= 2) return apply_local(local, w, pos);
    Word pre(w.begin(), w.begin() + pos), post(w.begin() + pos + kin, w.end());
    return tensor(identity(pre), tensor(local, identity(post)));
}

// ------------------------------------------------------------------ tensor product

std::shared_ptr<const Evaluator::ProductBasis> Evaluator::product_basis(const Word& u, const Word& w) const {
    auto key = std::make_pair(u, w);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = products_.find(key);
        if (it != products_.end()) return it->second;
    }
    const int r = cat_.rank();
    auto BU = basis(u), BW = basis(w), BS = basis(concat(u, w));
    auto pb = std::make_shared<ProductBasis>();
    pb->T.resize(r);
    pb->Tinv.resize(r);
    pb->groups.resize(r);
    const int nu_ = static_cast<int>(u.size()), nw = static_cast<int>(w.size());
    std::vector<int> ws(nw);
    for (int k = 0; k < nw; ++k) ws[k] = simple(w[k]);
    for (int z = 0; z < r; ++z) {
        // product entries ordered (x, y, mu, iu, iw)
        std::map<std::array<int, 3>, int> gpos;
        int off = 0;
        for (int x = 0; x < r; ++x)
            for (int y = 0; y < r; ++y)
                for (int m = 1; m <= cat_.N(x, y, z); ++m) {
                    int sz = BU->dim(x) * BW->dim(y);
                    if (!sz) continue;
                    pb->groups[z].push_back({x, y, m, off});
                    gpos[{x, y, m}] = off;
                    off += sz;
                }
        const int nstd = BS->dim(z);
        if (off != nstd) throw NumericalError("internal: product basis size mismatch");
        Mat T = Mat::Zero(off, nstd);
        for (int j = 0; j < nstd; ++j) {
            const Tree& S = BS->by_total[z][j];
            Tree ut;
            ut.x.assign(S.x.begin(), S.x.begin() + nu_ + 1);
            ut.mu.assign(S.mu.begin(), S.mu.begin() + nu_ + 1);
            const int xU = ut.x.back();
            const int iu = BU->index(ut);
            struct State {
                Tree wt;
                int mo;
                cplx c;
            };
            std::vector<State> st{{Tree{{0}, {1}}, 1, 1.0}}, nxt;
            for (int k = 0; k < nw; ++k) {
                nxt.clear();
                int zk = S.x[nu_ + k], zk1 = S.x[nu_ + k + 1], be = S.mu[nu_ + k + 1];
                for (const State& s0 : st) {
                    int yk = s0.wt.x.back();
                    const FBlock* F = cat_.F(xU, yk, ws[k], zk1);
                    int row = F->li(zk, s0.mo, be);
                    for (size_t c = 0; c < F->right.size(); ++c) {
                        cplx v = F->M(row, c);
                        if (v == cplx(0)) continue;
                        auto [f, mup, nuv] = F->right[c];
                        State s1{s0.wt, nuv, s0.c * v};
                        s1.wt.x.push_back(f);
                        s1.wt.mu.push_back(mup);
                        nxt.push_back(std::move(s1));
                    }
                }
                std::swap(st, nxt);
            }
            for (const State& s0 : st) {
                int y = s0.wt.x.back();
                int iw = BW->index(s0.wt);
                int row = gpos.at({xU, y, s0.mo}) + iu * BW->dim(y) + iw;
                T(row, j) += s0.c;
            }
        }
        pb->T[z] = T;
        if (off) {
            Eigen::FullPivLU<Mat> lu(T);
            if (lu.rank() < off) throw NumericalError("product basis change is singular");
            pb->Tinv[z] = lu.inverse();
        } else {
            pb->Tinv[z] = T;
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = products_.emplace(key, pb);
    return it->second;
}

Morph Evaluator::tensor(const Morph& f, const Morph& g) const {
    if (g.src.empty() && g.tgt.empty()) {
        Morph m = f;
        for (int t = 0; t < cat_.rank(); ++t) m.blk[t] *= g.blk[0](0, 0);
        return m;
    }
    if (f.src.empty() && f.tgt.empty()) {
        Morph m = g;
        for (int t = 0; t < cat_.rank(); ++t) m.blk[t] *= f.blk[0](0, 0);
        return m;
    }
    const int r = cat_.rank();
    auto PS = product_basis(f.src, g.src), PT = product_basis(f.tgt, g.tgt);
    auto BFS = basis(f.src), BGS = basis(g.src), BFT = basis(f.tgt), BGT = basis(g.tgt);
    Morph m = zero(concat(f.src, g.src), concat(f.tgt, g.tgt));
    for (int z = 0; z < r; ++z) {
        if (m.blk[z].size() == 0) continue;
        Mat H = Mat::Zero(PT->T[z].rows(), PS->T[z].rows());
        std::map<std::array<int, 3>, int> tpos;
        for (auto& gq : PT->groups[z]) tpos[{gq[0], gq[1], gq[2]}] = gq[3];
        bool any = false;
        for (auto& gq : PS->groups[z]) {
            auto it = tpos.find({gq[0], gq[1], gq[2]});
            if (it == tpos.end()) continue;
            const Mat& fx = f.blk[gq[0]];
            const Mat& gy = g.blk[gq[1]];
            if (fx.size() == 0 || gy.size() == 0) continue;
            H.block(it->second, gq[3], fx.rows() * gy.rows(), fx.cols() * gy.cols()) = kron(fx, gy);
            any = true;
        }
        if (any) m.blk[z] = PT->Tinv[z] * H * PS->T[z];
    }
    return m;
}

// ------------------------------------------------------------------ derived constructions

Morph Evaluator::cup_word(const Word& u) const {
    Program p(Word{});
    for (size_t k = 0; k < u.size(); ++k) p.then(static_cast<int>(k), cup(u[k]));
    return p.evaluate(*this);
}

Morph Evaluator::cap_word(const Word& u) const {
    Program p(concat(u, star(u)));
    for (int k = static_cast<int>(u.size()) - 1; k >= 0; --k) p.then(k, cap(u[k]));
    return p.evaluate(*this);
}

Morph Evaluator::dual(const Morph& f) const {
    // V* -> V* U U* -> V* V U* -> U*
    const Word& U = f.src;
    const Word& V = f.tgt;
    Word vs = star(V);
    Program p(vs);
    const int nv = static_cast<int>(V.size());
    for (size_t k = 0; k < U.size(); ++k) p.then(nv + static_cast<int>(k), cup(U[k]));
    p.then(nv, f);
    for (int k = nv - 1; k >= 0; --k) p.then(k, cap(vs[k]));
    return p.evaluate(*this);
}

Morph Evaluator::braid_words(const Word& u, const Word& w, int sign) const {
    Program p(concat(u, w));
    const int nu = static_cast<int>(u.size()), nw = static_cast<int>(w.size());
    for (int j = nu - 1; j >= 0; --j)
        for (int t = 0; t < nw; ++t) {
            const Word& cur = p.target();
            p.then(j + t, braid(cur[j + t], cur[j + t + 1], sign));
        }
    return p.evaluate(*this);
}

Morph Evaluator::twist_word(const Word& u, int sign) const {
    // theta_{U} for a composite word: theta_{XY} = c_{Y,X} c_{X,Y} (theta_X (x) theta_Y), recursively
    if (u.size() <= 1) return u.empty() ? identity(u) : twist(u[0], sign);
    Word head(u.begin(), u.end() - 1), last{u.back()};
    Morph tx = tensor(twist_word(head, sign), twist(u.back(), sign));
    Morph dbl = sign > 0 ? compose(braid_words(last, head, 1), braid_words(head, last, 1))
                         : compose(braid_words(last, head, -1), braid_words(head, last, -1));
    return compose(dbl, tx);
}

Morph Evaluator::braid_program(const Word& w, const std::vector<int>& gens) const {
    Program p(w);
    for (int g : gens) {
        int i = std::abs(g);
        const Word& cur = p.target();
        if (i < 1 || i >= static_cast<int>(cur.size()))
            throw PositionError("braid generator a" + std::to_string(i) + " out of range");
        p.then(i - 1, braid(cur[i - 1], cur[i], g > 0 ? 1 : -1));
    }
    return p.evaluate(*this);
}

std::vector<Mat> Evaluator::f_move(const Word& w, int p) const {
    if (p < 0 || p + 1 >= static_cast<int>(w.size())) throw PositionError("f_move needs two strands at position");
    auto B = basis(w);
    std::vector<Mat> out(cat_.rank());
    int s0 = simple(w[p]), s1 = simple(w[p + 1]);
    for (int t = 0; t < cat_.rank(); ++t) {
        const auto& trees = B->by_total[t];
        std::map<std::vector<int>, std::map<int, cplx>> rows;  // grouped key -> (col -> coef)
        for (int j = 0; j < static_cast<int>(trees.size()); ++j) {
            const Tree& T = trees[j];
            const FBlock* F = cat_.F(T.x[p], s0, s1, T.x[p + 2]);
            int row = F->li(T.x[p + 1], T.mu[p + 1], T.mu[p + 2]);
            for (size_t c = 0; c < F->right.size(); ++c) {
                auto [g, ml, nu] = F->right[c];
                std::vector<int> key(T.x.begin(), T.x.begin() + p + 1);
                key.insert(key.end(), T.mu.begin(), T.mu.begin() + p + 1);
                key.insert(key.end(), {g, ml, nu});
                key.insert(key.end(), T.x.begin() + p + 2, T.x.end());
                key.insert(key.end(), T.mu.begin() + p + 3, T.mu.end());
                rows[key][j] += F->M(row, c);
            }
        }
        Mat M = Mat::Zero(rows.size(), trees.size());
        int i = 0;
        for (auto& [k, cols] : rows) {
            for (auto& [j, v] : cols) M(i, j) = v;
            ++i;
        }
        out[t] = M;
    }
    return out;
}

// ------------------------------------------------------------------ programs

Program& Program::then(int pos, Morph op) {
    const int kin = static_cast<int>(op.src.size());
    if (pos < 0 || pos + kin > static_cast<int>(cur_.size()) ||
        !std::equal(op.src.begin(), op.src.end(), cur_.begin() + pos))
        throw TypeMismatch("generator input does not match wires at offset " + std::to_string(pos),
                           static_cast<int>(steps_.size()));
    Word out(cur_.begin(), cur_.begin() + pos);
    out.insert(out.end(), op.tgt.begin(), op.tgt.end());
    out.insert(out.end(), cur_.begin() + pos + kin, cur_.end());
    cur_ = std::move(out);
    steps_.push_back({pos, std::move(op)});
    return *this;
}

Morph Program::evaluate(const Evaluator& ev) const {
    Morph acc = ev.identity(src_);
    for (const Step& s : steps_) acc = ev.compose(ev.apply_at(s.op, acc.tgt, s.pos), acc);
    return acc;
}

// ------------------------------------------------------------------ Deligne-factor morphisms

DMorph dpure(std::vector<Morph> f, cplx c) {
    DMorph m;
    for (auto& x : f) {
        m.src.push_back(x.src);
        m.tgt.push_back(x.tgt);
    }
    m.terms.push_back({c, std::move(f)});
    return m;
}

DMorph didentity(const Evaluator& ev, const std::vector<Word>& w) {
    std::vector<Morph> f;
    for (auto& x : w) f.push_back(ev.identity(x));
    return dpure(std::move(f));
}

DMorph dzero(const std::vector<Word>& src, const std::vector<Word>& tgt) {
    DMorph m;
    m.src = src;
    m.tgt = tgt;
    return m;
}

DMorph dcompose(const Evaluator& ev, const DMorph& g, const DMorph& f) {
    if (g.src != f.tgt) throw ShapeMismatch("dcompose: word tuples differ");
    DMorph m = dzero(f.src, g.tgt);
    for (const auto& a : g.terms)
        for (const auto& b : f.terms) {
            DTerm t{a.c * b.c, {}};
            for (size_t k = 0; k < a.f.size(); ++k) t.f.push_back(ev.compose(a.f[k], b.f[k]));
            m.terms.push_back(std::move(t));
        }
    return m;
}

DMorph dtensor(const Evaluator& ev, const DMorph& f, const DMorph& g) {
    if (f.src.size() != g.src.size()) throw ShapeMismatch("dtensor: factor count differs");
    DMorph m;
    for (size_t k = 0; k < f.src.size(); ++k) {
        m.src.push_back(concat(f.src[k], g.src[k]));
        m.tgt.push_back(concat(f.tgt[k], g.tgt[k]));
    }
    for (const auto& a : f.terms)
        for (const auto& b : g.terms) {
            DTerm t{a.c * b.c, {}};
            for (size_t k = 0; k < a.f.size(); ++k) t.f.push_back(ev.tensor(a.f[k], b.f[k]));
            m.terms.push_back(std::move(t));
        }
    return m;
}

void dadd_into(DMorph& acc, const DMorph& x, cplx c) {
    if (acc.src != x.src || acc.tgt != x.tgt) throw ShapeMismatch("dadd: word tuples differ");
    for (const auto& t : x.terms) acc.terms.push_back({c * t.c, t.f});
}

DenseBlocks dense(const DMorph& m) {
    DenseBlocks out;
    for (const auto& term : m.terms) {
        if (term.c == cplx(0)) continue;
        const size_t n = term.f.size();
        std::vector<std::vector<int>> live(n);
        bool empty = false;
        for (size_t k = 0; k < n; ++k) {
            for (size_t t = 0; t < term.f[k].blk.size(); ++t)
                if (term.f[k].blk[t].size()) live[k].push_back(static_cast<int>(t));
            empty |= live[k].empty();
        }
        if (empty) continue;
        TotalTuple tt(n);
        std::function<void(size_t, const Mat&)> rec = [&](size_t k, const Mat& M) {
            if (k == n) {
                auto [pos, ins] = out.emplace(tt, M);
                if (!ins) pos->second += M;
                return;
            }
            for (int t : live[k]) {
                tt[k] = t;
                rec(k + 1, kron(M, term.f[k].blk[t]));
            }
        };
        rec(0, Mat::Constant(1, 1, term.c));
    }
    return out;
}

double dresidual_dense(const DenseBlocks& a, const DenseBlocks& b) {
    double r = 0;
    for (const auto& [k, m] : a) {
        auto it = b.find(k);
        r = std::max(r, it == b.end() ? max_abs(m) : max_abs(m - it->second));
    }
    for (const auto& [k, m] : b)
        if (!a.count(k)) r = std::max(r, max_abs(m));
    return r;
}

double dresidual(const DMorph& a, const DMorph& b) {
    if (a.src != b.src || a.tgt != b.tgt) throw ShapeMismatch("dresidual: word tuples differ");
    return dresidual_dense(dense(a), dense(b));
}

namespace {

std::string factor_str(const FusionCategoryData& cat, Factor f) { return cat.labels[f.label] + (f.down ? "*" : ""); }

std::string tuple_str(const FusionCategoryData& cat, const std::vector<Factor>& parts) {
    std::string s = "(";
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + factor_str(cat, parts[i]);
    return s + ")";
}

}  // namespace

Report diagram_identities_report(const Evaluator& ev, const Exec& ex) {
    const auto& cat = ev.cat();
    std::vector<Factor> fs;
    for (int l = 0; l < cat.rank(); ++l) {
        fs.push_back({l, false});
        fs.push_back({l, true});
    }
    const auto n = static_cast<std::int64_t>(fs.size());
    auto pick = [&](std::int64_t idx, int k) {
        std::vector<Factor> v;
        for (int i = 0; i < k; ++i, idx /= n) v.push_back(fs[idx % n]);
        return v;
    };
    Report r;
    r.suite = "diagrams";
    r.category = cat.name;
    auto add = [&](const std::string& id, const MaxResult& m, int k) {
        r.add(make_check(id, m.value, m.index < 0 ? "" : tuple_str(cat, pick(m.index, k)), cat.tolerance));
    };

    add("snake", sweep_max(n, [&](std::int64_t i) {
        Factor x = fs[i];
        Program p1(Word{x}), p2(Word{x});
        p1.then(1, ev.cup(star(x))).then(0, ev.cap(x));
        p2.then(0, ev.cup(x)).then(1, ev.cap(star(x)));
        const Morph id = ev.identity({x});
        return std::max(Evaluator::residual(p1.evaluate(ev), id), Evaluator::residual(p2.evaluate(ev), id));
    }, ex), 1);
    add("loop value", sweep_max(n, [&](std::int64_t i) {
        Program loop(Word{});
        loop.then(0, ev.cup(fs[i])).then(0, ev.cap(fs[i]));
        return std::abs(loop.evaluate(ev).blk[0](0, 0) - cat.qdims[fs[i].label]);
    }, ex), 1);
    add("reidemeister II", sweep_max(n * n, [&](std::int64_t i) {
        Word w = pick(i, 2);
        const Morph id = ev.identity(w);
        return std::max(Evaluator::residual(ev.braid_program(w, {1, -1}), id),
                        Evaluator::residual(ev.braid_program(w, {-1, 1}), id));
    }, ex), 2);
    add("yang-baxter", sweep_max(n * n * n, [&](std::int64_t i) {
        Word w = pick(i, 3);
        return std::max(Evaluator::residual(ev.braid_program(w, {1, 2, 1}), ev.braid_program(w, {2, 1, 2})),
                        Evaluator::residual(ev.braid_program(w, {-1, -2, -1}), ev.braid_program(w, {-2, -1, -2})));
    }, ex), 3);
    return r;
}

}  // namespace mtcperm

#include "mtcperm/catdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace mtcperm {

using nlohmann::json;

int FusionCategoryData::label_index(const std::string& s) const {
    for (int i = 0; i < rank(); ++i)
        if (labels[i] == s) return i;
    throw UnknownLabel("unknown label '" + s + "'");
}

double FusionCategoryData::global_dim() const {
    double s = 0;
    for (double d : qdims) s += d * d;
    return std::sqrt(s);
}

void FusionCategoryData::init(std::vector<std::string> ls, std::vector<int> du) {
    labels = std::move(ls);
    dual = std::move(du);
    r_ = rank();
    n_.assign(static_cast<size_t>(r_) * r_ * r_, 0);
    f_.clear();
    f_.resize(static_cast<size_t>(r_) * r_ * r_ * r_);
    rm_.assign(static_cast<size_t>(r_) * r_ * r_, Mat());
    theta.assign(r_, cplx(1.0));
    qdims.assign(r_, 1.0);
}

FBlock& FusionCategoryData::ensure_F(int a, int b, int c, int d) {
    auto& slot = f_[((a * r_ + b) * r_ + c) * r_ + d];
    if (slot) return *slot;
    slot = std::make_unique<FBlock>();
    for (int e = 0; e < r_; ++e)
        for (int al = 1; al <= N(a, b, e); ++al)
            for (int be = 1; be <= N(e, c, d); ++be) {
                slot->left_pos[{e, al, be}] = static_cast<int>(slot->left.size());
                slot->left.push_back({e, al, be});
            }
    for (int f = 0; f < r_; ++f)
        for (int mu = 1; mu <= N(b, c, f); ++mu)
            for (int nu = 1; nu <= N(a, f, d); ++nu) {
                slot->right_pos[{f, mu, nu}] = static_cast<int>(slot->right.size());
                slot->right.push_back({f, mu, nu});
            }
    slot->M = Mat::Zero(slot->left.size(), slot->right.size());
    return *slot;
}

static std::string tuple_str(const FusionCategoryData& c, std::initializer_list<int> idx) {
    std::string s = "(";
    bool first = true;
    for (int i : idx) {
        if (!first) s += ",";
        s += c.label(i);
        first = false;
    }
    return s + ")";
}

void FusionCategoryData::finalize_F() {
    const int r = r_;
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c)
                for (int d = 0; d < r; ++d) {
                    int nl = 0, nr = 0;
                    for (int e = 0; e < r; ++e) nl += N(a, b, e) * N(e, c, d);
                    for (int f = 0; f < r; ++f) nr += N(b, c, f) * N(a, f, d);
                    auto& slot = f_[((a * r + b) * r + c) * r + d];
                    if (nl != nr)
                        throw ConsistencyError("fusion rules are not associative at (a,b,c,d)=" +
                                               tuple_str(*this, {a, b, c, d}));
                    if (nl == 0) {
                        if (slot && slot->M.cwiseAbs().sum() > 0)
                            throw ConsistencyError("F-block given for inadmissible (a,b,c,d)=" +
                                                   tuple_str(*this, {a, b, c, d}));
                        slot.reset();
                        continue;
                    }
                    if (!slot)
                        throw MissingData("F-block required by nonzero tree counts is absent at (a,b,c,d)=" +
                                          tuple_str(*this, {a, b, c, d}));
                    Eigen::FullPivLU<Mat> lu(slot->M);
                    if (lu.rank() < nl)
                        throw ConsistencyError("F-block not invertible at (a,b,c,d)=" +
                                               tuple_str(*this, {a, b, c, d}));
                    slot->Minv = lu.inverse();
                }
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) {
                int n = N(a, b, c);
                const Mat& m = R(a, b, c);
                if (n == 0) continue;
                if (m.rows() != n || m.cols() != n)
                    throw MissingData("R-symbol missing or misshapen at (a,b,c)=" + tuple_str(*this, {a, b, c}));
                if (Eigen::FullPivLU<Mat>(m).rank() < n)
                    throw ConsistencyError("R-symbol not invertible at (a,b,c)=" + tuple_str(*this, {a, b, c}));
            }
}

void FusionCategoryData::finalize_derived(bool compute_qdims, bool compute_S) {
    if (compute_qdims) qdims = quantum_dimensions(*this);
    if (compute_S) S = s_matrix(*this);
    cupcap.assign(r_, CupCap{});
    for (int l = 0; l < r_; ++l) {
        int lb = dual[l];
        const FBlock* f1 = F(l, lb, l, l);
        if (!f1) throw MissingData("F-block for snake identity missing at label " + labels[l]);
        cplx s1 = f1->Minv(f1->ri(0, 1, 1), f1->li(0, 1, 1));
        CupCap cc;
        cc.ev = 1.0;
        cc.coevt = qdims[l];
        cc.coev = 1.0 / s1;
        cc.evt = qdims[l] * s1;
        cupcap[l] = cc;
    }
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(' || ch == '[') ++depth;
        if (ch == ')' || ch == ']') --depth;
        if (ch == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

static cplx read_cplx(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

FusionCategoryData parse_category(const std::string& text, const LoadOptions& opt,
                                  const std::string& default_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed category file: ") + e.what());
    }
    FusionCategoryData cat;
    try {
        if (!j.contains("labels") || !j["labels"].is_array() || j["labels"].empty())
            throw ParseError("category file needs a non-empty \"labels\" array");
        std::vector<std::string> labels = j["labels"].get<std::vector<std::string>>();
        auto idx = [&](const std::string& s) {
            auto it = std::find(labels.begin(), labels.end(), s);
            if (it == labels.end()) throw ParseError("unknown label '" + s + "' in category file");
            return static_cast<int>(it - labels.begin());
        };
        std::vector<int> dual(labels.size());
        std::iota(dual.begin(), dual.end(), 0);
        if (j.contains("dual"))
            for (auto& [k, v] : j["dual"].items()) dual[idx(k)] = idx(v.get<std::string>());
        cat.init(labels, dual);
        cat.name = j.value("name", default_name);
        cat.tolerance = j.value("tolerance", kDefaultTol);
        if (opt.tolerance_override > 0) cat.tolerance = opt.tolerance_override;

        auto keyparts = [&](const std::string& key, size_t n) {
            auto parts = split_top_level(key, ',');
            if (parts.size() != n) throw ParseError("bad index key '" + key + "'");
            return parts;
        };
        if (j.contains("N"))
            for (auto& [k, v] : j["N"].items()) {
                auto p = keyparts(k, 3);
                int n = v.get<int>();
                if (n < 0) throw ParseError("negative fusion multiplicity at " + k);
                cat.set_N(idx(p[0]), idx(p[1]), idx(p[2]), n);
            }
        if (j.contains("R"))
            for (auto& [k, v] : j["R"].items()) {
                auto p = keyparts(k, 3);
                int a = idx(p[0]), b = idx(p[1]), c = idx(p[2]);
                int n = cat.N(a, b, c);
                if (n == 0) throw ParseError("R-symbol given for inadmissible " + k);
                if (!v.is_array() || static_cast<int>(v.size()) != n)
                    throw ParseError("R-symbol " + k + " must be a " + std::to_string(n) + "x" +
                                     std::to_string(n) + " matrix");
                Mat m(n, n);
                for (int r = 0; r < n; ++r) {
                    if (!v[r].is_array() || static_cast<int>(v[r].size()) != n)
                        throw ParseError("R-symbol row size mismatch at " + k);
                    for (int c2 = 0; c2 < n; ++c2) m(r, c2) = read_cplx(v[r][c2]);
                }
                cat.set_R(a, b, c, m);
            }
        if (j.contains("F"))
            for (auto& [k, v] : j["F"].items()) {
                auto p = keyparts(k, 4);
                int a = idx(p[0]), b = idx(p[1]), c = idx(p[2]), d = idx(p[3]);
                FBlock& blk = cat.ensure_F(a, b, c, d);
                for (auto& [ek, ev] : v.items()) {
                    auto halves = split_top_level(ek, '|');
                    if (halves.size() != 2) throw ParseError("bad F entry key '" + ek + "'");
                    auto l = keyparts(halves[0], 3), r = keyparts(halves[1], 3);
                    std::array<int, 3> lk{idx(l[0]), std::stoi(l[1]), std::stoi(l[2])};
                    std::array<int, 3> rk{idx(r[0]), std::stoi(r[1]), std::stoi(r[2])};
                    auto li = blk.left_pos.find(lk);
                    auto ri = blk.right_pos.find(rk);
                    if (li == blk.left_pos.end() || ri == blk.right_pos.end())
                        throw ParseError("F entry '" + ek + "' outside the basis of block " + k);
                    blk.M(li->second, ri->second) = read_cplx(ev);
                }
            }
        if (j.contains("theta"))
            for (auto& [k, v] : j["theta"].items()) cat.theta[idx(k)] = read_cplx(v);
    } catch (const json::exception& e) {
        throw ParseError(std::string("category file schema error: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ParseError("category file: malformed multiplicity index");
    }
    check_structure(cat);
    cat.finalize_F();
    cat.finalize_derived();
    if (opt.validate) {
        Report rep = consistency_report(cat);
        if (const Check* c = rep.first_failure()) throw ConsistencyError(c->note.empty() ? c->id : c->note);
    }
    return cat;
}

FusionCategoryData load_category(const std::string& path, const LoadOptions& opt) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open category file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string base = path.substr(path.find_last_of('/') + 1);
    if (base.size() > 5 && base.substr(base.size() - 5) == ".json") base.resize(base.size() - 5);
    return parse_category(ss.str(), opt, base);
}

void check_structure(const FusionCategoryData& cat) {
    const int r = cat.rank();
    for (int i = 0; i < r; ++i) {
        if (cat.dual[cat.dual[i]] != i) throw ConsistencyError("dual map is not an involution at " + cat.label(i));
        for (int j = 0; j < r; ++j) {
            if (cat.N(0, i, j) != (i == j) || cat.N(i, 0, j) != (i == j))
                throw ConsistencyError("unit strictness violated at (" + cat.label(i) + "," + cat.label(j) + ")");
            if (cat.N(i, j, 0) != (j == cat.dual[i]))
                throw ConsistencyError("rigidity violated: N[" + cat.label(i) + "][" + cat.label(j) + "][1] wrong");
        }
    }
    if (cat.dual[0] != 0) throw ConsistencyError("unit must be self-dual");
}

namespace {

struct FusionLists {
    std::vector<std::vector<int>> prod;  // (a*r+b) -> channels
    explicit FusionLists(const FusionCategoryData& c) {
        int r = c.rank();
        prod.resize(r * r);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b)
                for (int x = 0; x < r; ++x)
                    if (c.N(a, b, x) > 0) prod[a * r + b].push_back(x);
    }
};

using Key5 = std::array<int, 5>;

void acc(std::map<Key5, cplx>& m, const Key5& k, cplx v) {
    if (v != cplx(0)) m[k] += v;
}

double pentagon_residual(const FusionCategoryData& cat, const FusionLists& fl, int a, int b, int c, int d, int e) {
    const int r = cat.rank();
    double worst = -1.0;
    for (int f : fl.prod[a * r + b])
        for (int g : fl.prod[f * r + c]) {
            if (cat.N(g, d, e) == 0) continue;
            for (int v1 = 1; v1 <= cat.N(a, b, f); ++v1)
                for (int v2 = 1; v2 <= cat.N(f, c, g); ++v2)
                    for (int v3 = 1; v3 <= cat.N(g, d, e); ++v3) {
                        std::map<Key5, cplx> lhs, rhs;
                        // path 1: F^{fcd}_e then F^{abl}_e
                        const FBlock& F1 = *cat.F(f, c, d, e);
                        int row1 = F1.li(g, v2, v3);
                        for (size_t j = 0; j < F1.right.size(); ++j) {
                            cplx c1 = F1.M(row1, j);
                            if (c1 == cplx(0)) continue;
                            auto [l, w, u] = F1.right[j];
                            const FBlock& F2 = *cat.F(a, b, l, e);
                            int row2 = F2.li(f, v1, u);
                            for (size_t jj = 0; jj < F2.right.size(); ++jj) {
                                auto [k, x, y] = F2.right[jj];
                                acc(lhs, {l, w, k, x, y}, c1 * F2.M(row2, jj));
                            }
                        }
                        // path 2: F^{abc}_g, F^{ahd}_e, F^{bcd}_k
                        const FBlock& G1 = *cat.F(a, b, c, g);
                        int rg = G1.li(f, v1, v2);
                        for (size_t j = 0; j < G1.right.size(); ++j) {
                            cplx c1 = G1.M(rg, j);
                            if (c1 == cplx(0)) continue;
                            auto [h, p, q] = G1.right[j];
                            const FBlock& G2 = *cat.F(a, h, d, e);
                            int rg2 = G2.li(g, q, v3);
                            for (size_t j2 = 0; j2 < G2.right.size(); ++j2) {
                                cplx c2 = c1 * G2.M(rg2, j2);
                                if (c2 == cplx(0)) continue;
                                auto [k, rr, y] = G2.right[j2];
                                const FBlock& G3 = *cat.F(b, c, d, k);
                                int rg3 = G3.li(h, p, rr);
                                for (size_t j3 = 0; j3 < G3.right.size(); ++j3) {
                                    auto [l, w, x] = G3.right[j3];
                                    acc(rhs, {l, w, k, x, y}, c2 * G3.M(rg3, j3));
                                }
                            }
                        }
                        for (auto& [k, v] : lhs) {
                            auto it = rhs.find(k);
                            worst = std::max(worst, std::abs(v - (it == rhs.end() ? cplx(0) : it->second)));
                        }
                        for (auto& [k, v] : rhs)
                            if (!lhs.count(k)) worst = std::max(worst, std::abs(v));
                        worst = std::max(worst, 0.0);
                    }
        }
    return worst;
}

using Key3 = std::array<int, 3>;

Mat braid_matrix(const FusionCategoryData& cat, int a, int b, int c, bool reverse) {
    if (!reverse) return cat.R(a, b, c);
    return cat.R(b, a, c).inverse();
}

double hexagon_residual(const FusionCategoryData& cat, const FusionLists& fl, int a, int b, int c, int d,
                        bool reverse) {
    const int r = cat.rank();
    double worst = -1.0;
    for (int e : fl.prod[a * r + b]) {
        if (cat.N(e, c, d) == 0) continue;
        for (int al = 1; al <= cat.N(a, b, e); ++al)
            for (int be = 1; be <= cat.N(e, c, d); ++be) {
                std::map<Key3, cplx> lhs, rhs;
                // c_{a, b (x) c}: F^{abc}_d then R^{af}_d on the outer vertex
                const FBlock& F0 = *cat.F(a, b, c, d);
                int row = F0.li(e, al, be);
                for (size_t j = 0; j < F0.right.size(); ++j) {
                    cplx c1 = F0.M(row, j);
                    if (c1 == cplx(0)) continue;
                    auto [f, mu, nu] = F0.right[j];
                    Mat Rm = braid_matrix(cat, a, f, d, reverse);
                    for (int nu2 = 1; nu2 <= cat.N(f, a, d); ++nu2) {
                        cplx v = c1 * Rm(nu - 1, nu2 - 1);
                        if (v != cplx(0)) lhs[{f, mu, nu2}] += v;
                    }
                }
                // (id (x) c_{a,c}) (c_{a,b} (x) id)
                Mat Rab = braid_matrix(cat, a, b, e, reverse);
                for (int al2 = 1; al2 <= cat.N(b, a, e); ++al2) {
                    cplx c1 = Rab(al - 1, al2 - 1);
                    if (c1 == cplx(0)) continue;
                    const FBlock& F1 = *cat.F(b, a, c, d);
                    int row1 = F1.li(e, al2, be);
                    for (size_t j = 0; j < F1.right.size(); ++j) {
                        cplx c2 = c1 * F1.M(row1, j);
                        if (c2 == cplx(0)) continue;
                        auto [g, mu, nu] = F1.right[j];
                        Mat Rac = braid_matrix(cat, a, c, g, reverse);
                        for (int mu2 = 1; mu2 <= cat.N(c, a, g); ++mu2) {
                            cplx c3 = c2 * Rac(mu - 1, mu2 - 1);
                            if (c3 == cplx(0)) continue;
                            const FBlock& F2 = *cat.F(b, c, a, d);
                            int row2 = F2.ri(g, mu2, nu);
                            for (size_t jj = 0; jj < F2.left.size(); ++jj) {
                                cplx c4 = c3 * F2.Minv(row2, jj);
                                if (c4 != cplx(0)) rhs[F2.left[jj]] += c4;
                            }
                        }
                    }
                }
                double w = 0;
                for (auto& [k, v] : lhs) {
                    auto it = rhs.find(k);
                    w = std::max(w, std::abs(v - (it == rhs.end() ? cplx(0) : it->second)));
                }
                for (auto& [k, v] : rhs)
                    if (!lhs.count(k)) w = std::max(w, std::abs(v));
                worst = std::max(worst, w);
            }
    }
    return worst;
}

std::string index_str(const FusionCategoryData& cat, std::int64_t idx, int len, const char* names) {
    const int r = cat.rank();
    std::vector<int> v(len);
    for (int i = len - 1; i >= 0; --i) {
        v[i] = static_cast<int>(idx % r);
        idx /= r;
    }
    std::string s = "(";
    for (int i = 0; i < len; ++i) s += std::string(i ? "," : "") + names[i];
    s += ")=(";
    for (int i = 0; i < len; ++i) s += (i ? "," : "") + cat.label(v[i]);
    return s + ")";
}

}  // namespace

AxiomResult verify_pentagon(const FusionCategoryData& cat, const Exec& ex) {
    FusionLists fl(cat);
    const std::int64_t r = cat.rank();
    const std::int64_t n = r * r * r * r * r;
    MaxResult m = sweep_max(
        n,
        [&](std::int64_t i) {
            int e = i % r, d = (i / r) % r, c = (i / (r * r)) % r, b = (i / (r * r * r)) % r,
                a = static_cast<int>(i / (r * r * r * r));
            return pentagon_residual(cat, fl, a, b, c, d, e);
        },
        ex);
    AxiomResult res;
    res.max_residual = m.value;
    if (m.index >= 0) res.worst_index = index_str(cat, m.index, 5, "abcde");
    res.pass = m.value < cat.tolerance;
    return res;
}

AxiomResult verify_hexagon_one(const FusionCategoryData& cat, bool reverse, const Exec& ex) {
    FusionLists fl(cat);
    const std::int64_t r = cat.rank();
    MaxResult m = sweep_max(
        r * r * r * r,
        [&](std::int64_t i) {
            int d = i % r, c = (i / r) % r, b = (i / (r * r)) % r, a = static_cast<int>(i / (r * r * r));
            return hexagon_residual(cat, fl, a, b, c, d, reverse);
        },
        ex);
    AxiomResult res;
    res.max_residual = m.value;
    if (m.index >= 0) res.worst_index = index_str(cat, m.index, 4, "abcd");
    res.pass = m.value < cat.tolerance;
    return res;
}

AxiomResult verify_hexagon(const FusionCategoryData& cat, const Exec& ex) {
    AxiomResult p = verify_hexagon_one(cat, false, ex);
    AxiomResult q = verify_hexagon_one(cat, true, ex);
    if (q.max_residual > p.max_residual) {
        q.worst_index += " [c^-1]";
        return q;
    }
    return p;
}

AxiomResult verify_unit_F(const FusionCategoryData& cat) {
    AxiomResult res;
    const int r = cat.rank();
    auto note = [&](double v, int a, int b, int c, int d) {
        if (v > res.max_residual || res.worst_index.empty()) {
            if (v >= res.max_residual) {
                res.max_residual = v;
                res.worst_index = "(a,b,c,d)=" + tuple_str(cat, {a, b, c, d});
            }
        }
    };
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c)
                for (int d = 0; d < r; ++d) {
                    if (a != 0 && b != 0 && c != 0) continue;
                    const FBlock* F = cat.F(a, b, c, d);
                    if (!F) continue;
                    Mat expect = Mat::Zero(F->left.size(), F->right.size());
                    for (size_t i = 0; i < F->left.size(); ++i) {
                        auto [e, al, be] = F->left[i];
                        std::array<int, 3> rk;
                        if (a == 0) rk = {d, be, 1};
                        else if (b == 0) rk = {c, 1, be};
                        else rk = {b, 1, al};
                        expect(i, F->ri(rk[0], rk[1], rk[2])) = 1.0;
                    }
                    note(max_abs(F->M - expect), a, b, c, d);
                }
    res.pass = res.max_residual < cat.tolerance;
    return res;
}

AxiomResult verify_ribbon(const FusionCategoryData& cat) {
    AxiomResult res;
    const int r = cat.rank();
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) {
                int n = cat.N(a, b, c);
                if (!n) continue;
                Mat lhs = cat.R(a, b, c) * cat.R(b, a, c);
                Mat rhs = Mat::Identity(n, n) * (cat.theta[c] / (cat.theta[a] * cat.theta[b]));
                double v = max_abs(lhs - rhs);
                if (v > res.max_residual) {
                    res.max_residual = v;
                    res.worst_index = "double braiding at (a,b,c)=" + tuple_str(cat, {a, b, c});
                }
            }
    for (int a = 0; a < r; ++a) {
        cplx s = 0;
        for (int c = 0; c < r; ++c)
            if (cat.N(a, a, c)) s += cat.qdims[c] / cat.qdims[a] * cat.R(a, a, c).trace();
        double v = std::abs(s - cat.theta[a]);
        if (v > res.max_residual) {
            res.max_residual = v;
            res.worst_index = "twist trace formula at a=" + cat.label(a);
        }
        double u = std::abs(std::abs(cat.theta[a]) - 1.0);
        if (u > res.max_residual) {
            res.max_residual = u;
            res.worst_index = "twist not unimodular at a=" + cat.label(a);
        }
    }
    double v0 = std::abs(cat.theta[0] - 1.0);
    if (v0 > res.max_residual) {
        res.max_residual = v0;
        res.worst_index = "theta of unit";
    }
    res.pass = res.max_residual < cat.tolerance;
    return res;
}

AxiomResult verify_selfdual_twists(const FusionCategoryData& cat) {
    AxiomResult res;
    for (int a = 0; a < cat.rank(); ++a) {
        double v = std::abs(cat.theta[a] - cat.theta[cat.dual[a]]);
        if (v > res.max_residual) {
            res.max_residual = v;
            res.worst_index = "a=" + cat.label(a);
        }
    }
    res.pass = res.max_residual < cat.tolerance;
    return res;
}

AxiomResult verify_cupcap(const FusionCategoryData& cat) {
    AxiomResult res;
    for (int l = 0; l < cat.rank(); ++l) {
        int lb = cat.dual[l];
        const FBlock* A = cat.F(l, lb, l, l);
        const FBlock* B = cat.F(lb, l, lb, lb);
        cplx s1 = A->Minv(A->ri(0, 1, 1), A->li(0, 1, 1));
        cplx s2 = B->M(B->li(0, 1, 1), B->ri(0, 1, 1));
        cplx s3 = A->M(A->li(0, 1, 1), A->ri(0, 1, 1));
        cplx s4 = B->Minv(B->ri(0, 1, 1), B->li(0, 1, 1));
        double d = cat.qdims[l];
        double v = std::max({std::abs(s1 - s2), std::abs(s3 - s4), std::abs(d * d * s1 * s3 - 1.0)});
        if (v > res.max_residual) {
            res.max_residual = v;
            res.worst_index = "label " + cat.label(l);
        }
    }
    res.pass = res.max_residual < cat.tolerance;
    return res;
}

AxiomResult verify_dimension_law(const FusionCategoryData& cat) {
    AxiomResult res;
    const int r = cat.rank();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            double s = 0;
            for (int k = 0; k < r; ++k) s += cat.N(i, j, k) * cat.qdims[k];
            double v = std::abs(cat.qdims[i] * cat.qdims[j] - s);
            if (v > res.max_residual) {
                res.max_residual = v;
                res.worst_index = "(i,j)=" + tuple_str(cat, {i, j});
            }
        }
    res.pass = res.max_residual < cat.tolerance;
    return res;
}

std::vector<double> quantum_dimensions(const FusionCategoryData& cat) {
    const int r = cat.rank();
    std::vector<double> d(r, 1.0);
    for (int i = 1; i < r; ++i) {
        Eigen::MatrixXd Ni(r, r);
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k) Ni(j, k) = cat.N(i, j, k);
        Eigen::EigenSolver<Eigen::MatrixXd> es(Ni, false);
        if (es.info() != Eigen::Success)
            throw NumericalError("eigensolver failed for fusion matrix of " + cat.label(i));
        double best = -1;
        for (int k = 0; k < r; ++k) best = std::max(best, es.eigenvalues()[k].real());
        d[i] = best;
    }
    return d;
}

Mat s_matrix(const FusionCategoryData& cat) {
    const int r = cat.rank();
    double D = 0;
    for (double x : cat.qdims) D += x * x;
    D = std::sqrt(D);
    Mat S = Mat::Zero(r, r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            cplx s = 0;
            for (int c = 0; c < r; ++c)
                s += double(cat.N(cat.dual[a], b, c)) * cat.theta[c] / (cat.theta[a] * cat.theta[b]) * cat.qdims[c];
            S(a, b) = s / D;
        }
    return S;
}

bool is_modular(const FusionCategoryData& cat) {
    Mat S = cat.S.size() ? cat.S : s_matrix(cat);
    return std::abs(S.determinant()) > cat.tolerance;
}

Report consistency_report(const FusionCategoryData& cat, const Exec& ex) {
    Report rep;
    rep.suite = "consistency";
    rep.category = cat.name;
    auto add = [&](const std::string& id, const AxiomResult& r, const std::string& what) {
        Check c = make_check(id, r.max_residual, r.worst_index, cat.tolerance);
        if (!c.pass) {
            std::ostringstream os;
            os.precision(2);
            os << std::scientific << what << " residual " << r.max_residual;
            if (!r.worst_index.empty()) os << " at " << r.worst_index;
            c.note = os.str();
        }
        rep.add(c);
    };
    add("unit_F", verify_unit_F(cat), "unit F-move");
    add("pentagon", verify_pentagon(cat, ex), "pentagon");
    add("hexagon", verify_hexagon_one(cat, false, ex), "hexagon");
    add("hexagon_inverse", verify_hexagon_one(cat, true, ex), "hexagon (inverse braiding)");
    add("ribbon", verify_ribbon(cat), "ribbon");
    add("selfdual_twists", verify_selfdual_twists(cat), "selfdual twist");
    add("snake_scalars", verify_cupcap(cat), "snake scalar");
    add("dimension_law", verify_dimension_law(cat), "dimension law");
    return rep;
}

// ---------------------------------------------------------------- Deligne powers

DeligneCategoryData::DeligneCategoryData(const FusionCategoryData& b, int nn, long rank_cap) : base(&b), n(nn) {
    if (n < 1) throw SizeError("Deligne power needs n >= 1");
    double size = std::pow(double(b.rank()), n);
    if (size > double(rank_cap))
        throw SizeError("Deligne power rank " + std::to_string(static_cast<long long>(size)) + " exceeds cap " +
                        std::to_string(rank_cap));
    long total = static_cast<long>(size);
    for (long t = 0; t < total; ++t) {
        std::vector<int> v(n);
        long x = t;
        for (int m = n - 1; m >= 0; --m) {
            v[m] = static_cast<int>(x % b.rank());
            x /= b.rank();
        }
        tuples.push_back(v);
    }
}

int DeligneCategoryData::index(const std::vector<int>& t) const {
    int x = 0;
    for (int v : t) x = x * base->rank() + v;
    return x;
}

int DeligneCategoryData::N(int i, int j, int k) const {
    int p = 1;
    for (int m = 0; m < n; ++m) p *= base->N(tuples[i][m], tuples[j][m], tuples[k][m]);
    return p;
}

cplx DeligneCategoryData::theta(int i) const {
    cplx p = 1.0;
    for (int m = 0; m < n; ++m) p *= base->theta[tuples[i][m]];
    return p;
}

double DeligneCategoryData::qdim(int i) const {
    double p = 1.0;
    for (int m = 0; m < n; ++m) p *= base->qdims[tuples[i][m]];
    return p;
}

std::string DeligneCategoryData::label(int i) const {
    if (n == 1) return base->label(tuples[i][0]);
    std::string s = "(";
    for (int m = 0; m < n; ++m) s += (m ? "," : "") + base->label(tuples[i][m]);
    return s + ")";
}

namespace {

// mixed-radix combination of per-factor 1-based multiplicity indices
int combine_mult(const std::vector<int>& idx, const std::vector<int>& dims) {
    int x = 0;
    for (size_t m = 0; m < idx.size(); ++m) x = x * dims[m] + (idx[m] - 1);
    return x + 1;
}

std::vector<int> split_mult(int x, const std::vector<int>& dims) {
    std::vector<int> v(dims.size());
    x -= 1;
    for (int m = static_cast<int>(dims.size()) - 1; m >= 0; --m) {
        v[m] = x % dims[m] + 1;
        x /= dims[m];
    }
    return v;
}

}  // namespace

FusionCategoryData DeligneCategoryData::materialize() const {
    const FusionCategoryData& B = *base;
    FusionCategoryData C;
    std::vector<std::string> labels;
    std::vector<int> dual;
    for (int i = 0; i < rank(); ++i) {
        labels.push_back(label(i));
        std::vector<int> d(n);
        for (int m = 0; m < n; ++m) d[m] = B.dual[tuples[i][m]];
        dual.push_back(index(d));
    }
    C.init(labels, dual);
    C.name = n == 1 ? B.name : B.name + "^" + std::to_string(n);
    C.tolerance = B.tolerance;
    const int r = rank();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k) C.set_N(i, j, k, N(i, j, k));
    auto mdims = [&](int a, int b, int c) {
        std::vector<int> d(n);
        for (int m = 0; m < n; ++m) d[m] = B.N(tuples[a][m], tuples[b][m], tuples[c][m]);
        return d;
    };
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k) {
                int nn = C.N(i, j, k);
                if (!nn) continue;
                auto dims = mdims(i, j, k);
                Mat Rm(nn, nn);
                for (int p = 1; p <= nn; ++p)
                    for (int q = 1; q <= nn; ++q) {
                        auto pi = split_mult(p, dims), qi = split_mult(q, dims);
                        cplx v = 1.0;
                        for (int m = 0; m < n; ++m)
                            v *= B.R(tuples[i][m], tuples[j][m], tuples[k][m])(pi[m] - 1, qi[m] - 1);
                        Rm(p - 1, q - 1) = v;
                    }
                C.set_R(i, j, k, Rm);
            }
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c)
                for (int d = 0; d < r; ++d) {
                    bool any = false;
                    for (int e = 0; e < r && !any; ++e) any = C.N(a, b, e) && C.N(e, c, d);
                    if (!any) continue;
                    FBlock& blk = C.ensure_F(a, b, c, d);
                    for (size_t li = 0; li < blk.left.size(); ++li) {
                        auto [e, al, be] = blk.left[li];
                        auto al_i = split_mult(al, mdims(a, b, e)), be_i = split_mult(be, mdims(e, c, d));
                        for (size_t ri = 0; ri < blk.right.size(); ++ri) {
                            auto [f, mu, nu] = blk.right[ri];
                            auto mu_i = split_mult(mu, mdims(b, c, f)), nu_i = split_mult(nu, mdims(a, f, d));
                            cplx v = 1.0;
                            for (int m = 0; m < n && v != cplx(0); ++m) {
                                const FBlock* F = B.F(tuples[a][m], tuples[b][m], tuples[c][m], tuples[d][m]);
                                v *= F->M(F->li(tuples[e][m], al_i[m], be_i[m]), F->ri(tuples[f][m], mu_i[m], nu_i[m]));
                            }
                            blk.M(li, ri) = v;
                        }
                    }
                }
    for (int i = 0; i < r; ++i) C.theta[i] = theta(i);
    C.finalize_F();
    for (int i = 0; i < r; ++i) C.qdims[i] = qdim(i);
    Mat S = Mat::Ones(1, 1);
    for (int m = 0; m < n; ++m) S = kron(S, B.S);
    C.S = S;
    C.finalize_derived(false, false);
    (void)combine_mult;
    return C;
}

DeligneCategoryData deligne_power(const FusionCategoryData& cat, int n, long rank_cap) {
    return DeligneCategoryData(cat, n, rank_cap);
}

}  // namespace mtcperm

#include "mtcperm/dualbases.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace mtcperm {

namespace {

// coefficient of a morphism living in a one-dimensional Hom space
cplx scalar_of(const Morph& m) {
    int found = -1;
    for (size_t t = 0; t < m.blk.size(); ++t)
        if (m.blk[t].size()) {
            if (found >= 0 || m.blk[t].size() != 1) throw ShapeMismatch("reference Hom space is not one-dimensional");
            found = static_cast<int>(t);
        }
    if (found < 0) throw ShapeMismatch("reference Hom space is zero");
    return m.blk[found](0, 0);
}

Factor only(const Word& w, const char* what) {
    if (w.size() != 1) throw ShapeMismatch(std::string(what) + ": expected a single strand");
    return w[0];
}

// solve P X = I where P[m,p] = pair(basis_m, test_p); returns sum_p X[p,n] test_p
std::vector<Morph> solve_dual(const Evaluator& ev, const std::vector<Morph>& basis, const std::vector<Morph>& test,
                              const std::function<cplx(const Morph&, const Morph&)>& pair) {
    const int n = static_cast<int>(basis.size());
    if (static_cast<int>(test.size()) != n)
        throw SingularPairing("dual Hom space dimension " + std::to_string(test.size()) + " differs from " +
                              std::to_string(n));
    if (n == 0) return {};
    Mat P(n, n);
    for (int m = 0; m < n; ++m)
        for (int p = 0; p < n; ++p) P(m, p) = pair(basis[m], test[p]);
    Eigen::FullPivLU<Mat> lu(P);
    lu.setThreshold(1e-10);
    if (lu.rank() < n) throw SingularPairing("Gram matrix of the pairing is singular");
    Mat X = lu.inverse();
    std::vector<Morph> out;
    for (int k = 0; k < n; ++k) {
        Morph d = ev.scale(test[0], X(0, k));
        for (int p = 1; p < n; ++p) d = ev.add(d, test[p], X(p, k));
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

cplx kappa(const Evaluator& ev, const Morph& alpha, const Morph& bhat) {
    if (alpha.src != bhat.tgt || alpha.tgt != bhat.src) throw ShapeMismatch("kappa: Hom spaces do not pair");
    only(alpha.tgt, "kappa");
    return scalar_of(ev.compose(alpha, bhat));
}

cplx eta(const Evaluator& ev, const Morph& alpha, const Morph& gamma) {
    if (alpha.src.size() != 2 || gamma.src != star(alpha.src) || gamma.tgt != star(alpha.tgt))
        throw ShapeMismatch("eta: Hom spaces do not pair");
    Factor I = alpha.src[0], J = alpha.src[1], K = only(alpha.tgt, "eta");
    Program p(Word{});
    p.then(0, ev.cup(I)).then(1, ev.cup(J)).then(0, alpha).then(1, gamma);
    return scalar_of(p.evaluate(ev)) / scalar_of(ev.cup(K));
}

cplx theta_pairing(const Evaluator& ev, const Morph& alpha, const Morph& delta) {
    if (alpha.src.size() != 2) throw ShapeMismatch("theta pairing: alpha must have two inputs");
    Factor I = alpha.src[0], J = alpha.src[1], K = only(alpha.tgt, "theta pairing");
    if (delta.src != Word{star(J)} || delta.tgt != (Word{star(K), I}))
        throw ShapeMismatch("theta pairing: Hom spaces do not pair");
    Program p(Word{});
    p.then(0, ev.cup(star(J))).then(0, delta).then(1, alpha);
    return scalar_of(p.evaluate(ev)) / scalar_of(ev.cup(star(K)));
}

std::vector<Morph> hom_basis(const Evaluator& ev, const Word& src, const Word& tgt) {
    std::vector<Morph> out;
    Morph z = ev.zero(src, tgt);
    for (size_t t = 0; t < z.blk.size(); ++t)
        for (int r = 0; r < z.blk[t].rows(); ++r)
            for (int c = 0; c < z.blk[t].cols(); ++c) {
                Morph e = z;
                e.blk[t](r, c) = 1.0;
                out.push_back(std::move(e));
            }
    return out;
}

std::vector<Morph> vertex_basis(const Evaluator& ev, Factor I, Factor J, Factor K, const Mat& G) {
    auto tree = hom_basis(ev, {I, J}, {K});
    if (G.size() == 0) return tree;
    if (G.rows() != static_cast<Eigen::Index>(tree.size()) || G.cols() != G.rows())
        throw ShapeMismatch("basis change has the wrong size");
    std::vector<Morph> out;
    for (int m = 0; m < G.rows(); ++m) {
        Morph v = ev.zero({I, J}, {K});
        for (int p = 0; p < G.cols(); ++p) v = ev.add(v, tree[p], G(m, p));
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Morph> kappa_dual_basis(const Evaluator& ev, const std::vector<Morph>& basis) {
    if (basis.empty()) return {};
    const Morph& b0 = basis[0];
    auto test = hom_basis(ev, b0.tgt, b0.src);
    if (b0.tgt.size() == 1)
        return solve_dual(ev, basis, test, [&](const Morph& b, const Morph& d) { return scalar_of(ev.compose(b, d)); });
    if (b0.src.size() == 1)
        return solve_dual(ev, basis, test, [&](const Morph& b, const Morph& d) { return scalar_of(ev.compose(d, b)); });
    throw ShapeMismatch("kappa dual needs a single-strand source or target");
}

std::vector<Morph> eta_dual_basis(const Evaluator& ev, const std::vector<Morph>& basis) {
    if (basis.empty()) return {};
    auto test = hom_basis(ev, star(basis[0].src), star(basis[0].tgt));
    return solve_dual(ev, basis, test, [&](const Morph& a, const Morph& g) { return eta(ev, a, g); });
}

std::vector<Morph> theta_dual_basis(const Evaluator& ev, const std::vector<Morph>& basis) {
    if (basis.empty()) return {};
    Factor I = basis[0].src[0], J = basis[0].src[1], K = basis[0].tgt[0];
    auto test = hom_basis(ev, {star(J)}, {star(K), I});
    return solve_dual(ev, basis, test, [&](const Morph& a, const Morph& d) { return theta_pairing(ev, a, d); });
}

Morph check_from_hat(const Evaluator& ev, const Morph& ahat) {
    Factor K = only(ahat.src, "check_from_hat");
    Factor J = ahat.tgt.at(1);
    Program p(Word{star(J)});
    p.then(0, ev.cup(star(K))).then(1, ahat).then(2, ev.cap(J));
    return p.evaluate(ev);
}

Morph check_from_hat_star(const Evaluator& ev, const Morph& ahat_star, Factor I) {
    Factor Js = ahat_star.src.at(0);
    Program p(Word{Js});
    p.then(1, ev.cup(star(I))).then(0, ahat_star);
    return p.evaluate(ev);
}

PairedBasis paired_basis(const Evaluator& ev, Factor I, Factor J, Factor K, const Mat& G) {
    PairedBasis pb{I, J, K, {}, {}, {}, {}, {}, {}, {}};
    pb.basis = vertex_basis(ev, I, J, K, G);
    pb.hat = kappa_dual_basis(ev, pb.basis);
    for (size_t m = 0; m < pb.size(); ++m) {
        pb.hat_star.push_back(ev.dual(pb.hat[m]));
        pb.check.push_back(check_from_hat(ev, pb.hat[m]));
        pb.star.push_back(ev.dual(pb.basis[m]));
    }
    pb.eta_dual = eta_dual_basis(ev, pb.basis);
    pb.theta_dual = theta_dual_basis(ev, pb.basis);
    return pb;
}

double DualityResiduals::max() const {
    return std::max({kappa, eta, theta, star_pairing, bent, eta_solve, theta_solve});
}

DualityResiduals duality_residuals(const Evaluator& ev, const PairedBasis& pb) {
    DualityResiduals r;
    const size_t n = pb.size();
    for (size_t m = 0; m < n; ++m)
        for (size_t k = 0; k < n; ++k) {
            cplx d = m == k ? 1.0 : 0.0;
            r.kappa = std::max(r.kappa, std::abs(kappa(ev, pb.basis[m], pb.hat[k]) - d));
            r.eta = std::max(r.eta, std::abs(eta(ev, pb.basis[m], pb.hat_star[k]) - d));
            r.theta = std::max(r.theta, std::abs(theta_pairing(ev, pb.basis[m], pb.check[k]) - d));
            // kappa duality between alpha* and ahat*: hat of the dual is the dual of the hat
            r.star_pairing = std::max(r.star_pairing, std::abs(scalar_of(ev.compose(pb.hat_star[m], pb.star[k])) - d));
        }
    for (size_t m = 0; m < n; ++m) {
        r.bent = std::max(r.bent, Evaluator::residual(check_from_hat_star(ev, pb.hat_star[m], pb.I), pb.check[m]));
        r.eta_solve = std::max(r.eta_solve, Evaluator::residual(pb.eta_dual[m], pb.hat_star[m]));
        r.theta_solve = std::max(r.theta_solve, Evaluator::residual(pb.theta_dual[m], pb.check[m]));
    }
    return r;
}

double check_completeness(const Evaluator& ev, Factor I, Factor J) {
    Word w{I, J};
    Morph sum = ev.zero(w, w);
    for (int k = 0; k < ev.cat().rank(); ++k) {
        auto basis = vertex_basis(ev, I, J, {k, false});
        auto hat = kappa_dual_basis(ev, basis);
        for (size_t m = 0; m < basis.size(); ++m) sum = ev.add(sum, ev.compose(hat[m], basis[m]));
    }
    return Evaluator::residual(sum, ev.identity(w));
}

Morph completeness_tensor(const Evaluator& ev, const PairedBasis& pb) {
    Word src{pb.I, pb.J, pb.K}, tgt{pb.K, pb.I, pb.J};
    Morph sum = ev.zero(src, tgt);
    for (size_t m = 0; m < pb.size(); ++m) sum = ev.add(sum, ev.tensor(pb.basis[m], pb.hat[m]));
    return sum;
}

Mat random_invertible(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    while (true) {
        Mat G(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) G(i, j) = cplx(nd(rng), nd(rng));
        Eigen::JacobiSVD<Mat> svd(G);
        auto s = svd.singularValues();
        if (n == 0 || s(n - 1) > 0.2 * s(0)) return G;
    }
}

std::vector<Factor> all_factors(const FusionCategoryData& cat) {
    std::vector<Factor> out;
    for (int i = 0; i < cat.rank(); ++i) out.push_back({i, false});
    for (int i = 0; i < cat.rank(); ++i) out.push_back({i, true});
    return out;
}

Report dualbases_suite(const Evaluator& ev, int random_changes, std::uint64_t seed, const Exec& ex) {
    const auto& cat = ev.cat();
    const auto fs = all_factors(cat);
    const std::int64_t nf = static_cast<std::int64_t>(fs.size());
    auto triple = [&](std::int64_t idx) { return std::array<Factor, 3>{fs[idx / (nf * nf)], fs[idx / nf % nf], fs[idx % nf]}; };
    auto name = [&](std::int64_t idx) -> std::string {
        if (idx < 0) return "";
        auto t = triple(idx);
        return "(" + word_str(cat, {t[0]}) + "," + word_str(cat, {t[1]}) + "," + word_str(cat, {t[2]}) + ")";
    };
    const std::int64_t n3 = nf * nf * nf;
    // per-triple residuals, max-reduced per component afterwards; -1 marks an empty Hom space
    std::vector<std::array<double, 6>> res(n3);
    parallel_for(
        n3,
        [&](std::int64_t idx) {
            auto [I, J, K] = triple(idx);
            std::array<double, 6> r{};
            r.fill(-1.0);
            const int n = cat.N(ev.simple(I), ev.simple(J), ev.simple(K));
            if (n > 0) {
                std::mt19937_64 rng(seed + static_cast<std::uint64_t>(idx));
                PairedBasis pb = paired_basis(ev, I, J, K);
                Morph base = completeness_tensor(ev, pb);
                DualityResiduals d = duality_residuals(ev, pb);
                double indep = 0.0;
                for (int t = 0; t < random_changes; ++t) {
                    PairedBasis pg = paired_basis(ev, I, J, K, random_invertible(n, rng));
                    DualityResiduals dg = duality_residuals(ev, pg);
                    d.kappa = std::max(d.kappa, dg.kappa);
                    d.eta = std::max({d.eta, dg.eta, dg.eta_solve});
                    d.theta = std::max({d.theta, dg.theta, dg.theta_solve});
                    d.star_pairing = std::max(d.star_pairing, dg.star_pairing);
                    d.bent = std::max(d.bent, dg.bent);
                    indep = std::max(indep, Evaluator::residual(completeness_tensor(ev, pg), base));
                }
                r = {d.kappa, std::max(d.eta, d.eta_solve), std::max(d.theta, d.theta_solve), d.star_pairing, d.bent, indep};
            }
            res[idx] = r;
        },
        ex);
    Report rep;
    rep.suite = "dualbases";
    rep.category = cat.name;
    const char* ids[] = {"kappa delta", "eta delta", "theta delta", "star pairing delta", "bent dual", "basis independence"};
    for (int c = 0; c < 6; ++c) {
        MaxResult m = sweep_max_serial(n3, [&](std::int64_t i) { return res[i][c]; });
        rep.add(make_check(ids[c], std::max(0.0, m.value), name(m.index), cat.tolerance));
    }
    MaxResult comp = sweep_max(
        nf * nf, [&](std::int64_t i) { return check_completeness(ev, fs[i / nf], fs[i % nf]); }, ex);
    std::string cw = comp.index < 0 ? "" : "(" + word_str(cat, {fs[comp.index / nf]}) + "," + word_str(cat, {fs[comp.index % nf]}) + ")";
    rep.add(make_check("completeness", comp.value, cw, cat.tolerance));
    return rep;
}

}  // namespace mtcperm

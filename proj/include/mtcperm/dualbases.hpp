#pragma once

#include <random>
#include <vector>

#include "mtcperm/evaluator.hpp"
#include "mtcperm/report.hpp"
#include "mtcperm/sweep.hpp"

namespace mtcperm {

// Pairings; each returns the scalar coefficient against the one-dimensional reference morphism.
// kappa: alpha in Hom(IJ,K), bhat in Hom(K,IJ); alpha o bhat against id_K.
cplx kappa(const Evaluator& ev, const Morph& alpha, const Morph& bhat);
// eta: gamma in Hom(J*I*, K*); closed against the cup producing (K, K*).
cplx eta(const Evaluator& ev, const Morph& alpha, const Morph& gamma);
// theta pairing: delta in Hom(J*, K* I); closed against the cup producing (K*, K).
cplx theta_pairing(const Evaluator& ev, const Morph& alpha, const Morph& delta);

// Every elementary tree-basis morphism of Hom(src, tgt).
std::vector<Morph> hom_basis(const Evaluator& ev, const Word& src, const Word& tgt);
// Basis of Hom([I,J],[K]) given by coefficient rows of G in the tree basis (G empty: tree basis).
std::vector<Morph> vertex_basis(const Evaluator& ev, Factor I, Factor J, Factor K, const Mat& G = Mat());

// kappa-dual by composition: for a fusing basis b_m: X -> [K] returns d_n: [K] -> X with b_m o d_n = delta;
// for a splitting basis b_m: [L] -> Y returns d_n: Y -> [L] with d_n o b_m = delta.
std::vector<Morph> kappa_dual_basis(const Evaluator& ev, const std::vector<Morph>& basis);
std::vector<Morph> eta_dual_basis(const Evaluator& ev, const std::vector<Morph>& basis);
std::vector<Morph> theta_dual_basis(const Evaluator& ev, const std::vector<Morph>& basis);

// check variant of a hat: [J*] -> cup on the left -> ahat -> cap gives [K*, I]
Morph check_from_hat(const Evaluator& ev, const Morph& ahat);
// check variant from the dual of a hat by bending the I leg: [J*] -> [J*, I*, I] -> [K*, I]
Morph check_from_hat_star(const Evaluator& ev, const Morph& ahat_star, Factor I);

struct PairedBasis {
    Factor I, J, K;
    std::vector<Morph> basis;       // alpha: [I,J] -> [K]
    std::vector<Morph> hat;         // kappa duals: [K] -> [I,J]
    std::vector<Morph> hat_star;    // categorical duals of hats: [J*,I*] -> [K*]
    std::vector<Morph> check;       // [J*] -> [K*, I]
    std::vector<Morph> star;        // categorical duals of alpha: [K*] -> [J*, I*]
    std::vector<Morph> eta_dual;    // solved from the eta Gram system
    std::vector<Morph> theta_dual;  // solved from the theta Gram system
    size_t size() const { return basis.size(); }
};

PairedBasis paired_basis(const Evaluator& ev, Factor I, Factor J, Factor K, const Mat& G = Mat());

// residuals of the duality deltas, star pairing delta and the bent-dual identity for one triple
struct DualityResiduals {
    double kappa = 0, eta = 0, theta = 0, star_pairing = 0, bent = 0, eta_solve = 0, theta_solve = 0;
    double max() const;
};
DualityResiduals duality_residuals(const Evaluator& ev, const PairedBasis& pb);

// || sum_k sum_alpha ahat o alpha - id_{IJ} ||
double check_completeness(const Evaluator& ev, Factor I, Factor J);
// sum_alpha alpha (x) ahat as a morphism [I,J,K] -> [K,I,J]
Morph completeness_tensor(const Evaluator& ev, const PairedBasis& pb);

Mat random_invertible(int n, std::mt19937_64& rng);

// every simple label in both orientations
std::vector<Factor> all_factors(const FusionCategoryData& cat);

// Pairing deltas, star pairing delta, bent dual, completeness and basis independence of sum alpha (x) ahat over all
// oriented triples; each triple is also rebuilt from `random_changes` random bases (seeded per triple).
Report dualbases_suite(const Evaluator& ev, int random_changes = 10, std::uint64_t seed = 1, const Exec& ex = {});

}  // namespace mtcperm

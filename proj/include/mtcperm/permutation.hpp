#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "mtcperm/algebra.hpp"
#include "mtcperm/dualbases.hpp"
#include "mtcperm/sweep.hpp"

namespace mtcperm {

struct PermOptions {
    long rank_cap = 10000;
    Exec exec{};
    // when set, every Hom-space basis used by f, f^{-1} is replaced by a random invertible change of basis
    std::mt19937_64* basis_rng = nullptr;
    // f1 gains theta_k / theta_kt, f2 gains theta_j / theta_i (and f^{-1} the reciprocal of both);
    // without these factors the displayed maps are not multiplicative, see README
    bool twist_correction = true;
};

// Cache of paired bases per oriented triple, so every builder uses the same bases.
class BasisBook {
public:
    BasisBook(const Evaluator& ev, std::mt19937_64* rng = nullptr) : ev_(ev), rng_(rng) {}
    const PairedBasis& get(Factor I, Factor J, Factor K);
    // kappa duals of the check morphisms: [K*, I] -> [J*]
    const std::vector<Morph>& check_hat(Factor I, Factor J, Factor K);

private:
    const Evaluator& ev_;
    std::mt19937_64* rng_;
    std::mutex mu_;
    std::map<std::array<Factor, 3>, std::unique_ptr<PairedBasis>> book_;
    std::map<std::array<Factor, 3>, std::vector<Morph>> check_hat_;
};

void require_modular(const FusionCategoryData& cat);

AlgebraObject build_A_P(const Evaluator& ev, const PermOptions& opt = {});
// embeds a C^2 algebra into C^3 with an empty-word factor inserted at position `pos`
AlgebraObject lift_algebra(const Evaluator& ev, const AlgebraObject& a, int pos);
AlgebraObject build_A1(const Evaluator& ev, const PermOptions& opt = {});
AlgebraObject build_A2(const Evaluator& ev, const PermOptions& opt = {});
AlgebraObject build_A(const Evaluator& ev, const PermOptions& opt = {});
AlgebraObject build_B(const Evaluator& ev, const PermOptions& opt = {});
AlgebraObject build_C(const Evaluator& ev, const PermOptions& opt = {});

SumPtr carrier_A(const Evaluator& ev);
SumPtr carrier_B(const Evaluator& ev);
SumPtr carrier_C(const Evaluator& ev);

BlockMorphism build_f1(const Evaluator& ev, const PermOptions& opt = {});
BlockMorphism build_f2(const Evaluator& ev, const PermOptions& opt = {});
BlockMorphism build_f(const Evaluator& ev, const PermOptions& opt = {});
BlockMorphism build_f_inv(const Evaluator& ev, const PermOptions& opt = {});

// check_algebra on A_P, A1, A2, A, B, C
Report algebra_suite(const Evaluator& ev, const PermOptions& opt = {});
Report verify_iso_suite(const Evaluator& ev, const PermOptions& opt = {});

// ---------------------------------------------------------------- braid identities

// Generator encoding: +-i is a_i^{+-1} (strands i, i+1, 1-based); +-(kTwistBase + p) is theta^{+-1} on strand p.
inline constexpr int kTwistBase = 1000;

// Named strands; composite braidings and twists on adjacent name blocks are expanded into generators.
class StrandCalculus {
public:
    explicit StrandCalculus(std::vector<std::string> names) : names_(std::move(names)) {}
    // c_{U,W} (sign +1) or c^{-1}_{W,U} (sign -1) on adjacent blocks U W -> W U
    StrandCalculus& braid(const std::vector<std::string>& u, const std::vector<std::string>& w, int sign);
    // theta_U^{+-1}, expanded via theta_{U1 U2} = c_{U2,U1} c_{U1,U2} (theta_U1 (x) theta_U2)
    StrandCalculus& twist(const std::vector<std::string>& u, int sign);
    const std::vector<int>& gens() const { return gens_; }
    const std::vector<std::string>& order() const { return names_; }

private:
    int find(const std::string& n) const;
    std::vector<std::string> names_;
    std::vector<int> gens_;
};

// tokens "a3", "a3^-1", "t2", "t2^-1"; "a1-a3" lists commuting generators of one layer
std::vector<int> parse_braid_word(const std::string& text);
std::string print_braid_word(const std::vector<int>& gens);
Morph eval_braid_word(const Evaluator& ev, const Word& w, const std::vector<int>& gens);

struct WordIdentity {
    std::string id;
    std::vector<int> lhs, rhs;
};
// one file per identity, lines "lhs: ..." and "rhs: ..."; '#' starts a comment
WordIdentity parse_word_identity(const std::string& id, const std::string& text);
std::vector<WordIdentity> load_word_identities(const std::string& dir);
std::string default_words_dir();

// Module-functor pentagons on strands (X, X', Y, Y', C): ids f, g, l, h, k, p.
// p carries twists; drop_twists sets theta to 1, which breaks it.
std::vector<WordIdentity> module_functor_identities(bool drop_twists = false);

// P^{xy,eps}: X and Y sit at positions x, y of the triple; eps picks c or c^{-1} in psi.
struct ModuleVariant {
    std::string xy;
    int sign = 1;
    std::string name() const { return "P" + xy + (sign > 0 ? "+" : "-"); }
};
std::vector<ModuleVariant> all_variants();
// module pentagon for psi on strands (X, X', X'', Y, Y', Y'', C); mixed uses c then c^{-1} in the 23/32 psi
WordIdentity module_pentagon_words(const ModuleVariant& v, bool mixed = false);
// psi_{1,D,C} and psi_{D,1,C} must be identities: evaluated on (X, Y, C) with units inserted
double module_triangle_residual(const Evaluator& ev, const ModuleVariant& v, const std::vector<int>& labels3,
                                bool mixed = false);

// max |lhs - rhs| over all simple labelings of the strands (up orientation)
MaxResult identity_sweep(const Evaluator& ev, const WordIdentity& id, int strands, const Exec& ex = {});

Report module_pentagon_suite(const Evaluator& ev, const PermOptions& opt = {}, bool drop_twists = false,
                             const std::string& words_dir = "");
Report module_axiom_suite(const Evaluator& ev, const PermOptions& opt = {}, bool mixed = false);

}  // namespace mtcperm

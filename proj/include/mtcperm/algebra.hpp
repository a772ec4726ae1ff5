#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mtcperm/evaluator.hpp"
#include "mtcperm/report.hpp"
#include "mtcperm/sweep.hpp"

namespace mtcperm {

struct Summand {
    std::vector<int> key;
    std::vector<Word> words;  // one word per Deligne factor
};

// Formal direct sum of tuples of words.
struct SumObject {
    int nfactors = 1;
    std::vector<Summand> s;
    int size() const { return static_cast<int>(s.size()); }
    int index(const std::vector<int>& key) const;  // -1 if absent
};
using SumPtr = std::shared_ptr<const SumObject>;

SumPtr unit_object(int nfactors);
// summand (a,b) sits at a*|B| + b, keys and words concatenated
SumPtr tensor_objects(const SumPtr& a, const SumPtr& b);

struct BlockMorphism {
    SumPtr src, tgt;
    std::map<std::pair<int, int>, DMorph> blocks;  // (src summand, tgt summand); absent = zero

    const DMorph* block(int s, int t) const;
    void add(int s, int t, const DMorph& m, cplx c = 1.0);
    // blocks grouped by source summand
    std::vector<std::vector<std::pair<int, const DMorph*>>> by_source() const;
};

BlockMorphism bm_identity(const Evaluator& ev, const SumPtr& x);
BlockMorphism bm_compose(const Evaluator& ev, const BlockMorphism& g, const BlockMorphism& f);
BlockMorphism bm_tensor(const Evaluator& ev, const BlockMorphism& f, const BlockMorphism& g);
double bm_residual(const BlockMorphism& a, const BlockMorphism& b, std::string* worst = nullptr);
// c_{U,W} blockwise on U (x) W for summand word tuples
DMorph dbraid(const Evaluator& ev, const std::vector<Word>& u, const std::vector<Word>& w, int sign = 1);

struct AlgebraObject {
    std::string name;
    SumPtr carrier;
    BlockMorphism mult;  // carrier (x) carrier -> carrier
    BlockMorphism unit;  // unit object -> carrier
};

struct ModuleObject {
    SumPtr carrier;
    BlockMorphism action;  // M (x) A -> M (right) or A (x) M -> M (left)
    bool left = false;
};

AlgebraObject unit_algebra(const Evaluator& ev, int nfactors);
AlgebraObject opposite(const Evaluator& ev, const AlgebraObject& a);
AlgebraObject tensor_algebra(const Evaluator& ev, const AlgebraObject& a, const AlgebraObject& b);

Report check_algebra(const Evaluator& ev, const AlgebraObject& a, const Exec& ex = {});
Report check_algebra_hom(const Evaluator& ev, const BlockMorphism& f, const AlgebraObject& a, const AlgebraObject& b,
                         const Exec& ex = {});
Report check_module(const Evaluator& ev, const ModuleObject& m, const AlgebraObject& a, const Exec& ex = {});
// left action by a, right action by b
Report check_bimodule(const Evaluator& ev, const ModuleObject& left, const ModuleObject& right,
                      const AlgebraObject& a, const AlgebraObject& b, const Exec& ex = {});
// free right module X (x) A with action id (x) m
ModuleObject free_module(const Evaluator& ev, const SumPtr& x, const AlgebraObject& a);

// block-wise rank check of the assembled matrix at every total tuple
bool is_invertible(const Evaluator& ev, const BlockMorphism& f, double tol = 1e-9);

}  // namespace mtcperm

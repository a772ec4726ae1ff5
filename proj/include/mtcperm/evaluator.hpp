#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mtcperm/catdata.hpp"

namespace mtcperm {

// One strand: a simple label with an orientation. A down strand carries the dual object.
struct Factor {
    int label = 0;
    bool down = false;
    auto operator<=>(const Factor&) const = default;
};
using Word = std::vector<Factor>;

inline Factor star(Factor f) { return {f.label, !f.down}; }
Word star(const Word& w);  // reversed, orientations flipped
Word concat(const Word& a, const Word& b);
Word up_word(std::initializer_list<int> labels);
std::string word_str(const FusionCategoryData& cat, const Word& w);

// Left-associated splitting tree with a virtual leading unit: x[0] = 0, x[m] is the channel
// after absorbing strand m-1, mu[m] the multiplicity at vertex (x[m-1], s_{m-1} -> x[m]).
struct Tree {
    std::vector<int> x, mu;
    int total() const { return x.back(); }
};

class TreeBasis {
public:
    Word word;
    std::vector<std::vector<Tree>> by_total;

    int dim(int t) const { return static_cast<int>(by_total[t].size()); }
    int index(const Tree& t) const;  // -1 if not a basis tree
    void build(const FusionCategoryData& cat, const Word& w);

private:
    struct VecHash {
        size_t operator()(const std::vector<int>& v) const noexcept;
    };
    std::unordered_map<std::vector<int>, int, VecHash> pos_;
};

// Morphism between two words, block diagonal in the total charge:
// blk[t] has rows = target trees with total t, cols = source trees with total t.
struct Morph {
    Word src, tgt;
    std::vector<Mat> blk;
};

// Evaluator over one category; owns thread-safe caches of tree and product bases.
class Evaluator {
public:
    explicit Evaluator(const FusionCategoryData& cat) : cat_(cat) {}
    Evaluator(const Evaluator&) = delete;

    const FusionCategoryData& cat() const { return cat_; }
    int simple(Factor f) const { return f.down ? cat_.dual[f.label] : f.label; }

    std::shared_ptr<const TreeBasis> basis(const Word& w) const;
    int hom_dim(const Word& src, const Word& tgt) const;
    std::vector<Tree> enumerate_basis(const Word& w, int root) const;

    Morph zero(const Word& src, const Word& tgt) const;
    Morph identity(const Word& w) const;
    Morph compose(const Morph& g, const Morph& f) const;  // g after f
    Morph add(const Morph& a, const Morph& b, cplx cb = 1.0) const;
    Morph scale(const Morph& a, cplx c) const;
    Morph tensor(const Morph& f, const Morph& g) const;

    // generators
    Morph braid(Factor a, Factor b, int sign) const;  // [a,b] -> [b,a]; sign -1 gives c^{-1}_{b,a}
    Morph twist(Factor a, int sign) const;
    Morph cup(Factor x) const;  // [] -> [x, x*]
    Morph cap(Factor x) const;  // [x, x*] -> []
    // basis vertex m (1-based) of Hom([I,J],[K]) in the tree basis
    Morph vertex(Factor I, Factor J, Factor K, int m) const;
    // id_{w[0:pos)} (x) local (x) id_rest, as a morphism from w
    Morph apply_at(const Morph& local, const Word& w, int pos) const;

    Morph cup_word(const Word& u) const;  // [] -> u u*
    Morph cap_word(const Word& u) const;  // u u* -> []
    Morph dual(const Morph& f) const;     // f: U->V gives f*: V* -> U*

    // c_{U,W} (sign +1) or c^{-1}_{W,U} (sign -1) as a morphism U W -> W U
    Morph braid_words(const Word& u, const Word& w, int sign) const;
    Morph twist_word(const Word& u, int sign) const;
    // braid word on w: generators +-i mean a_i^{+-1} on strands (i-1, i), applied left to right
    Morph braid_program(const Word& w, const std::vector<int>& gens) const;

    // change of basis grouping strands (p, p+1); rows listed in f_move_rows
    std::vector<Mat> f_move(const Word& w, int p) const;
    Morph r_move(const Word& w, int p) const { return apply_at(braid(w.at(p), w.at(p + 1), 1), w, p); }
    Morph apply_twist(const Word& w, int p) const { return apply_at(twist(w.at(p), 1), w, p); }

    static double residual(const Morph& a, const Morph& b);

private:
    struct ProductBasis {
        // per total z: T (rows product entries, cols standard trees) and its inverse
        std::vector<Mat> T, Tinv;
        // product entries ordered by (x, y, mu, iu, iw); offsets of each (x,y,mu) group
        std::vector<std::vector<std::array<int, 4>>> groups;  // {x, y, mu, offset}
    };
    std::shared_ptr<const ProductBasis> product_basis(const Word& u, const Word& w) const;
    Morph apply_local(const Morph& local, const Word& w, int pos) const;

    const FusionCategoryData& cat_;
    mutable std::mutex mu_;
    mutable std::map<Word, std::shared_ptr<TreeBasis>> bases_;
    mutable std::map<std::pair<Word, Word>, std::shared_ptr<ProductBasis>> products_;
};

// A sliced diagram: each step applies a local morphism at a wire offset.
class Program {
public:
    explicit Program(Word src) : src_(src), cur_(std::move(src)) {}
    Program& then(int pos, Morph op);  // throws TypeMismatch naming the step index
    const Word& source() const { return src_; }
    const Word& target() const { return cur_; }
    size_t size() const { return steps_.size(); }
    Morph evaluate(const Evaluator& ev) const;

private:
    struct Step {
        int pos;
        Morph op;
    };
    Word src_, cur_;
    std::vector<Step> steps_;
};

// ---------------------------------------------------------------- Deligne-factor morphisms

// A pure tensor of per-factor morphisms with a coefficient.
struct DTerm {
    cplx c{1.0};
    std::vector<Morph> f;
};

// Morphism in C^n between tuples of words: a sum of pure tensors.
struct DMorph {
    std::vector<Word> src, tgt;
    std::vector<DTerm> terms;
};

using TotalTuple = std::vector<int>;
using DenseBlocks = std::map<TotalTuple, Mat>;

DMorph dpure(std::vector<Morph> f, cplx c = 1.0);
DMorph didentity(const Evaluator& ev, const std::vector<Word>& w);
DMorph dzero(const std::vector<Word>& src, const std::vector<Word>& tgt);
DMorph dcompose(const Evaluator& ev, const DMorph& g, const DMorph& f);
DMorph dtensor(const Evaluator& ev, const DMorph& f, const DMorph& g);
void dadd_into(DMorph& acc, const DMorph& x, cplx c = 1.0);
// kron-ordered dense blocks per total tuple (factor 0 most significant)
DenseBlocks dense(const DMorph& m);
double dresidual(const DMorph& a, const DMorph& b);
double dresidual_dense(const DenseBlocks& a, const DenseBlocks& b);

// Snake identities, loop values, Reidemeister II and Yang-Baxter over every oriented label assignment.
Report diagram_identities_report(const Evaluator& ev, const Exec& ex = {});

}  // namespace mtcperm

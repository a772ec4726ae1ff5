#pragma once

#include <string>
#include <vector>

#include "mtcperm/evaluator.hpp"

namespace mtcperm {

struct WireSpec {
    std::string label;
    bool down = false;
    bool operator==(const WireSpec&) const = default;
};

enum class GenKind { Id, BraidPos, BraidNeg, TwistPos, TwistNeg, Cup, Cap, Vertex };
// alpha: [I,J]->[K]; hat: [K]->[I,J]; hat_star: [J*,I*]->[K*]; check: [J*]->[K*,I]; star: [K*]->[J*,I*]
enum class VertexVariant { Alpha, Hat, HatStar, Check, Star };

struct Generator {
    GenKind kind = GenKind::Id;
    WireSpec wire;               // id, cup, cap
    VertexVariant variant{};     // vertex
    WireSpec in1, in2, out;      // vertex: basis element of Hom(in1 in2, out)
    int index = 1;               // vertex: 1-based basis index
    int line = 0, col = 0;
    bool operator==(const Generator& o) const {
        return kind == o.kind && wire == o.wire && variant == o.variant && in1 == o.in1 && in2 == o.in2 &&
               out == o.out && index == o.index;
    }
};

struct Slice {
    std::vector<std::vector<Generator>> factors;  // one generator list per Deligne factor
    int line = 0;
    bool operator==(const Slice& o) const { return factors == o.factors; }
};

// Slices listed bottom to top; the source word per factor is optional when slice 0 fixes it.
struct DiagramProgram {
    bool has_source = false;
    std::vector<std::vector<WireSpec>> source;
    std::vector<Slice> slices;
    size_t nfactors() const;
    bool operator==(const DiagramProgram& o) const {
        return has_source == o.has_source && source == o.source && slices == o.slices;
    }
};

DiagramProgram parse_dsl(const std::string& text);
std::string print_dsl(const DiagramProgram& p);

// One morphism per factor; TypeMismatch names the 1-based slice, UnknownBasisId a bad vertex index.
std::vector<Morph> evaluate_program(const Evaluator& ev, const DiagramProgram& p);
// source words given explicitly (overrides the program's source directive)
std::vector<Morph> evaluate_program(const Evaluator& ev, const DiagramProgram& p, const std::vector<Word>& source);

std::vector<Word> parse_source_spec(const FusionCategoryData& cat, const std::string& spec);

}  // namespace mtcperm

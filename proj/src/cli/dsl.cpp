#include "mtcperm/dsl.hpp"

#include <algorithm>
#include <cctype>

#include "mtcperm/dualbases.hpp"

namespace mtcperm {

size_t DiagramProgram::nfactors() const {
    if (has_source) return source.size();
    return slices.empty() ? 1 : slices.front().factors.size();
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    DiagramProgram program() {
        DiagramProgram p;
        while (!eof()) {
            skip_blank();
            if (eol()) {
                next_line();
                continue;
            }
            if (peek_word() == "source") {
                if (p.has_source || !p.slices.empty()) fail("source directive must come first, once");
                take_word();
                skip_blank();
                expect(':');
                p.has_source = true;
                p.source = source_spec();
            } else {
                Slice sl;
                sl.line = line_;
                sl.factors.push_back(factor());
                while (true) {
                    skip_blank();
                    if (!lookahead("||")) break;
                    pos_ += 2;
                    sl.factors.push_back(factor());
                }
                p.slices.push_back(std::move(sl));
            }
            skip_blank();
            if (!eol()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
            next_line();
        }
        const size_t nf = p.nfactors();
        for (const auto& sl : p.slices)
            if (sl.factors.size() != nf)
                throw ParseError("slice has " + std::to_string(sl.factors.size()) + " factors, expected " +
                                     std::to_string(nf),
                                 sl.line, 1);
        return p;
    }

private:
    const std::string& s_;
    size_t pos_ = 0, line_start_ = 0;
    int line_ = 1;

    bool eof() const { return pos_ >= s_.size(); }
    int col() const { return static_cast<int>(pos_ - line_start_) + 1; }
    [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, line_, col()); }
    bool lookahead(const char* t) const { return s_.compare(pos_, std::char_traits<char>::length(t), t) == 0; }
    bool eol() const { return eof() || s_[pos_] == '\n' || lookahead("//"); }
    void skip_blank() {
        while (!eof() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    void next_line() {
        while (!eof() && s_[pos_] != '\n') ++pos_;
        if (!eof()) {
            ++pos_;
            ++line_;
            line_start_ = pos_;
        }
    }
    void expect(char c) {
        if (eof() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
    std::string peek_word() const {
        size_t j = pos_;
        while (j < s_.size() && ident_char(s_[j])) ++j;
        return s_.substr(pos_, j - pos_);
    }
    std::string take_word() {
        std::string w = peek_word();
        pos_ += w.size();
        return w;
    }
    std::string ident(const char* what) {
        skip_blank();
        std::string w = take_word();
        if (w.empty()) fail(std::string("expected ") + what);
        return w;
    }
    WireSpec wire() {
        WireSpec w{ident("label"), false};
        if (!eof() && s_[pos_] == '*') {
            w.down = true;
            ++pos_;
        }
        skip_blank();
        return w;
    }
    std::vector<std::vector<WireSpec>> source_spec() {
        std::vector<std::vector<WireSpec>> out(1);
        while (true) {
            skip_blank();
            if (eol()) break;
            if (lookahead("||")) {
                pos_ += 2;
                out.emplace_back();
                continue;
            }
            if (s_[pos_] == '(') {
                // "()" is the empty word
                ++pos_;
                skip_blank();
                expect(')');
                continue;
            }
            out.back().push_back(wire());
        }
        return out;
    }
    std::vector<Generator> factor() {
        std::vector<Generator> gens;
        while (true) {
            skip_blank();
            if (eol() || lookahead("||")) break;
            gens.push_back(generator());
        }
        if (gens.empty()) fail("expected a generator");
        return gens;
    }
    Generator generator() {
        Generator g;
        g.line = line_;
        g.col = col();
        std::string w = take_word();
        if (w.empty()) fail("expected a generator");
        if (w == "braid" || w == "twist") {
            if (eof() || (s_[pos_] != '+' && s_[pos_] != '-')) fail("expected '+' or '-'");
            bool pos = s_[pos_++] == '+';
            g.kind = w == "braid" ? (pos ? GenKind::BraidPos : GenKind::BraidNeg)
                                  : (pos ? GenKind::TwistPos : GenKind::TwistNeg);
            return g;
        }
        if (w == "id" || w == "cup" || w == "cap") {
            g.kind = w == "id" ? GenKind::Id : w == "cup" ? GenKind::Cup : GenKind::Cap;
            expect('(');
            g.wire = wire();
            expect(')');
            return g;
        }
        if (w == "vertex") {
            g.kind = GenKind::Vertex;
            expect('(');
            std::string v = ident("vertex variant");
            if (v == "a") g.variant = VertexVariant::Alpha;
            else if (v == "ahat") g.variant = VertexVariant::Hat;
            else if (v == "ahatstar") g.variant = VertexVariant::HatStar;
            else if (v == "acheck") g.variant = VertexVariant::Check;
            else if (v == "astar") g.variant = VertexVariant::Star;
            else if (eof() || s_[pos_] == '\n') fail("unterminated vertex");
            else {
                pos_ -= v.size();
                fail("unknown vertex variant '" + v + "'");
            }
            skip_blank();
            expect(':');
            g.in1 = wire();
            expect(',');
            g.in2 = wire();
            if (!lookahead("->")) fail("expected '->'");
            pos_ += 2;
            g.out = wire();
            expect('#');
            std::string n = take_word();
            if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                fail("expected a basis index");
            g.index = std::stoi(n);
            skip_blank();
            expect(')');
            return g;
        }
        pos_ -= w.size();
        fail("unknown generator '" + w + "'");
    }
};

std::string wire_str(const WireSpec& w) { return w.label + (w.down ? "*" : ""); }

const char* variant_str(VertexVariant v) {
    switch (v) {
        case VertexVariant::Alpha: return "a";
        case VertexVariant::Hat: return "ahat";
        case VertexVariant::HatStar: return "ahatstar";
        case VertexVariant::Check: return "acheck";
        case VertexVariant::Star: return "astar";
    }
    return "?";
}

std::string gen_str(const Generator& g) {
    switch (g.kind) {
        case GenKind::Id: return "id(" + wire_str(g.wire) + ")";
        case GenKind::Cup: return "cup(" + wire_str(g.wire) + ")";
        case GenKind::Cap: return "cap(" + wire_str(g.wire) + ")";
        case GenKind::BraidPos: return "braid+";
        case GenKind::BraidNeg: return "braid-";
        case GenKind::TwistPos: return "twist+";
        case GenKind::TwistNeg: return "twist-";
        case GenKind::Vertex:
            return std::string("vertex(") + variant_str(g.variant) + ":" + wire_str(g.in1) + "," + wire_str(g.in2) +
                   "->" + wire_str(g.out) + "#" + std::to_string(g.index) + ")";
    }
    return "?";
}

Factor to_factor(const FusionCategoryData& cat, const WireSpec& w) { return {cat.label_index(w.label), w.down}; }

struct Local {
    Word in;
    Morph m;
};

Local local_morph(const Evaluator& ev, const Generator& g, const Word& cur, size_t pos, int slice) {
    const auto& cat = ev.cat();
    auto need = [&](size_t k) {
        if (pos + k > cur.size())
            throw TypeMismatch(gen_str(g) + " needs " + std::to_string(k) + " wire(s) at offset " + std::to_string(pos),
                               slice);
    };
    switch (g.kind) {
        case GenKind::Id: {
            need(1);
            Factor f = to_factor(cat, g.wire);
            if (cur[pos] != f)
                throw TypeMismatch("id(" + wire_str(g.wire) + ") meets wire " + word_str(cat, {cur[pos]}), slice);
            return {{f}, ev.identity({f})};
        }
        case GenKind::BraidPos:
        case GenKind::BraidNeg:
            need(2);
            return {{cur[pos], cur[pos + 1]}, ev.braid(cur[pos], cur[pos + 1], g.kind == GenKind::BraidPos ? 1 : -1)};
        case GenKind::TwistPos:
        case GenKind::TwistNeg:
            need(1);
            return {{cur[pos]}, ev.twist(cur[pos], g.kind == GenKind::TwistPos ? 1 : -1)};
        case GenKind::Cup: return {{}, ev.cup(to_factor(cat, g.wire))};
        case GenKind::Cap: {
            Factor f = to_factor(cat, g.wire);
            need(2);
            if (cur[pos] != f || cur[pos + 1] != star(f))
                throw TypeMismatch(gen_str(g) + " meets wires " + word_str(cat, {cur[pos], cur[pos + 1]}), slice);
            return {{f, star(f)}, ev.cap(f)};
        }
        case GenKind::Vertex: {
            Factor I = to_factor(cat, g.in1), J = to_factor(cat, g.in2), K = to_factor(cat, g.out);
            PairedBasis pb = paired_basis(ev, I, J, K);
            if (g.index < 1 || g.index > static_cast<int>(pb.size()))
                throw UnknownBasisId(gen_str(g) + ": Hom space has dimension " + std::to_string(pb.size()));
            const size_t m = g.index - 1;
            const Morph* mm = nullptr;
            switch (g.variant) {
                case VertexVariant::Alpha: mm = &pb.basis[m]; break;
                case VertexVariant::Hat: mm = &pb.hat[m]; break;
                case VertexVariant::HatStar: mm = &pb.hat_star[m]; break;
                case VertexVariant::Check: mm = &pb.check[m]; break;
                case VertexVariant::Star: mm = &pb.star[m]; break;
            }
            need(mm->src.size());
            for (size_t k = 0; k < mm->src.size(); ++k)
                if (cur[pos + k] != mm->src[k])
                    throw TypeMismatch(gen_str(g) + " expects " + word_str(cat, mm->src), slice);
            return {mm->src, *mm};
        }
    }
    throw TypeMismatch("unknown generator", slice);
}

// source word from slice 0 when every generator there names its inputs
Word infer_source(const Evaluator& ev, const std::vector<Generator>& gens) {
    Word w;
    for (const auto& g : gens) {
        switch (g.kind) {
            case GenKind::Id: w.push_back(to_factor(ev.cat(), g.wire)); break;
            case GenKind::Cup: break;
            case GenKind::Cap: {
                Factor f = to_factor(ev.cat(), g.wire);
                w.push_back(f);
                w.push_back(star(f));
                break;
            }
            case GenKind::Vertex: {
                Factor I = to_factor(ev.cat(), g.in1), J = to_factor(ev.cat(), g.in2), K = to_factor(ev.cat(), g.out);
                switch (g.variant) {
                    case VertexVariant::Alpha: w.insert(w.end(), {I, J}); break;
                    case VertexVariant::Hat: w.push_back(K); break;
                    case VertexVariant::HatStar: w.insert(w.end(), {star(J), star(I)}); break;
                    case VertexVariant::Check: w.push_back(star(J)); break;
                    case VertexVariant::Star: w.push_back(star(K)); break;
                }
                break;
            }
            default:
                throw TypeMismatch("source word cannot be inferred from " + gen_str(g) + "; add a 'source:' line", 1);
        }
    }
    return w;
}

}  // namespace

DiagramProgram parse_dsl(const std::string& text) { return Parser(text).program(); }

std::string print_dsl(const DiagramProgram& p) {
    std::string out;
    if (p.has_source) {
        out += "source:";
        for (size_t f = 0; f < p.source.size(); ++f) {
            if (f) out += " ||";
            if (p.source[f].empty()) out += " ()";
            for (const auto& w : p.source[f]) out += " " + wire_str(w);
        }
        out += "\n";
    }
    for (const auto& sl : p.slices) {
        for (size_t f = 0; f < sl.factors.size(); ++f) {
            if (f) out += " || ";
            for (size_t i = 0; i < sl.factors[f].size(); ++i) out += (i ? " " : "") + gen_str(sl.factors[f][i]);
        }
        out += "\n";
    }
    return out;
}

std::vector<Word> parse_source_spec(const FusionCategoryData& cat, const std::string& spec) {
    DiagramProgram p = parse_dsl("source: " + spec + "\n");
    std::vector<Word> out;
    for (const auto& f : p.source) {
        Word w;
        for (const auto& x : f) w.push_back(to_factor(cat, x));
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<Morph> evaluate_program(const Evaluator& ev, const DiagramProgram& p) {
    std::vector<Word> src;
    if (p.has_source) {
        for (const auto& f : p.source) {
            Word w;
            for (const auto& x : f) w.push_back(to_factor(ev.cat(), x));
            src.push_back(std::move(w));
        }
    } else {
        if (p.slices.empty()) throw TypeMismatch("empty program without a source line");
        for (const auto& f : p.slices.front().factors) src.push_back(infer_source(ev, f));
    }
    return evaluate_program(ev, p, src);
}

std::vector<Morph> evaluate_program(const Evaluator& ev, const DiagramProgram& p, const std::vector<Word>& source) {
    const size_t nf = p.slices.empty() ? source.size() : p.slices.front().factors.size();
    if (source.size() != nf)
        throw TypeMismatch("source has " + std::to_string(source.size()) + " factors, program " + std::to_string(nf));
    std::vector<Morph> out;
    for (size_t f = 0; f < nf; ++f) {
        Program prog(source[f]);
        for (size_t s = 0; s < p.slices.size(); ++s) {
            const int slice = static_cast<int>(s) + 1;
            const Word& cur = prog.target();
            size_t pos = 0;
            Morph layer = ev.identity({});
            for (const auto& g : p.slices[s].factors[f]) {
                Local l = local_morph(ev, g, cur, pos, slice);
                pos += l.in.size();
                layer = ev.tensor(layer, l.m);
            }
            if (pos != cur.size())
                throw TypeMismatch("generators cover " + std::to_string(pos) + " of " + std::to_string(cur.size()) +
                                       " wires",
                                   slice);
            prog.then(0, layer);
        }
        out.push_back(prog.evaluate(ev));
    }
    return out;
}

}  // namespace mtcperm

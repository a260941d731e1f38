#include <cctype>
#include <cstring>
#include <optional>
#include <vector>

#include "wdc/errors.hpp"
#include "wdc/formula.hpp"

// Concrete syntax. Lower-case identifiers are first-order variables and
// relation symbols, upper-case identifiers are second-order variables.
// Binding strength, loosest first:
//   ?   (+)   (*)   <->   ->   |   &   !/quantifiers/atoms
// Quantifier bodies extend as far right as possible.

namespace wdc {
namespace {

enum class Tok {
    Ident, Numeral, ConstLit, KwFalse, KwTrue, KwExists, KwForall, KwExistsSO, KwSum, KwProd,
    KwSumSO, KwProdSO, KwTc, KwDtc, KwLfp, KwGfp, KwIfp, KwPfp,
    LParen, RParen, LBracket, RBracket, Dot, Comma, Colon, Question,
    Eq, Less, Neq, Bang, Amp, Pipe, Arrow, DArrow, OPlus, OTimes, End
};

struct Token {
    Tok kind;
    std::string text;
    size_t pos;
};

struct Lexer {
    const std::string& src;
    size_t i = 0;
    std::vector<Token> out;

    explicit Lexer(const std::string& s) : src(s) {}

    void skip_ws() {
        while (i < src.size()) {
            if (isspace((unsigned char)src[i])) { ++i; continue; }
            if (src[i] == '/' && i + 1 < src.size() && src[i + 1] == '/') {
                while (i < src.size() && src[i] != '\n') ++i;
                continue;
            }
            break;
        }
    }

    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, i); }

    void push(Tok k, std::string text, size_t pos) { out.push_back({k, std::move(text), pos}); }

    void lex_const_literal(size_t kw_pos) {
        // after "c": expect '(' then raw text to the matching ')'
        skip_ws();
        if (i >= src.size() || src[i] != '(') fail("expected '(' after weight constant 'c'");
        ++i;
        size_t start = i;
        int depth = 1;
        while (i < src.size()) {
            if (src[i] == '(') ++depth;
            if (src[i] == ')' && --depth == 0) break;
            ++i;
        }
        if (i >= src.size()) fail("unterminated weight literal");
        std::string lit = src.substr(start, i - start);
        ++i;  // closing paren
        // trim surrounding spaces of the literal
        size_t a = lit.find_first_not_of(" \t");
        size_t b = lit.find_last_not_of(" \t");
        lit = (a == std::string::npos) ? "" : lit.substr(a, b - a + 1);
        if (lit.empty()) fail("empty weight literal");
        push(Tok::ConstLit, lit, kw_pos);
    }

    void run() {
        while (true) {
            skip_ws();
            if (i >= src.size()) break;
            size_t pos = i;
            char c = src[i];
            if (isalpha((unsigned char)c) || c == '_') {
                size_t start = i;
                while (i < src.size() && (isalnum((unsigned char)src[i]) || src[i] == '_')) ++i;
                std::string w = src.substr(start, i - start);
                if (w == "false") push(Tok::KwFalse, w, pos);
                else if (w == "true") push(Tok::KwTrue, w, pos);
                else if (w == "exists") push(Tok::KwExists, w, pos);
                else if (w == "forall") push(Tok::KwForall, w, pos);
                else if (w == "existsSO") push(Tok::KwExistsSO, w, pos);
                else if (w == "sum") push(Tok::KwSum, w, pos);
                else if (w == "prod") push(Tok::KwProd, w, pos);
                else if (w == "sumSO") push(Tok::KwSumSO, w, pos);
                else if (w == "prodSO") push(Tok::KwProdSO, w, pos);
                else if (w == "tc") push(Tok::KwTc, w, pos);
                else if (w == "dtc") push(Tok::KwDtc, w, pos);
                else if (w == "lfp") push(Tok::KwLfp, w, pos);
                else if (w == "gfp") push(Tok::KwGfp, w, pos);
                else if (w == "ifp") push(Tok::KwIfp, w, pos);
                else if (w == "pfp") push(Tok::KwPfp, w, pos);
                else if (w == "c") {
                    size_t save = i;
                    skip_ws();
                    if (i < src.size() && src[i] == '(') { i = save; lex_const_literal(pos); }
                    else { i = save; push(Tok::Ident, w, pos); }
                } else push(Tok::Ident, w, pos);
                continue;
            }
            if (isdigit((unsigned char)c)) {
                size_t start = i;
                while (i < src.size() && isdigit((unsigned char)src[i])) ++i;
                push(Tok::Numeral, src.substr(start, i - start), pos);
                continue;
            }
            auto starts = [&](const char* s) { return src.compare(i, strlen(s), s) == 0; };
            if (starts("(+)")) { push(Tok::OPlus, "(+)", pos); i += 3; continue; }
            if (starts("(*)")) { push(Tok::OTimes, "(*)", pos); i += 3; continue; }
            if (starts("<->")) { push(Tok::DArrow, "<->", pos); i += 3; continue; }
            if (starts("->")) { push(Tok::Arrow, "->", pos); i += 2; continue; }
            if (starts("!=")) { push(Tok::Neq, "!=", pos); i += 2; continue; }
            switch (c) {
                case '(': push(Tok::LParen, "(", pos); ++i; continue;
                case ')': push(Tok::RParen, ")", pos); ++i; continue;
                case '[': push(Tok::LBracket, "[", pos); ++i; continue;
                case ']': push(Tok::RBracket, "]", pos); ++i; continue;
                case '.': push(Tok::Dot, ".", pos); ++i; continue;
                case ',': push(Tok::Comma, ",", pos); ++i; continue;
                case ':': push(Tok::Colon, ":", pos); ++i; continue;
                case '?': push(Tok::Question, "?", pos); ++i; continue;
                case '=': push(Tok::Eq, "=", pos); ++i; continue;
                case '<': push(Tok::Less, "<", pos); ++i; continue;
                case '!': push(Tok::Bang, "!", pos); ++i; continue;
                case '&': push(Tok::Amp, "&", pos); ++i; continue;
                case '|': push(Tok::Pipe, "|", pos); ++i; continue;
            }
            fail(std::string("unexpected character '") + c + "'");
        }
        push(Tok::End, "", src.size());
    }
};

bool upper_initial(const std::string& s) { return !s.empty() && isupper((unsigned char)s[0]); }

struct Parser {
    std::vector<Token> toks;
    size_t i = 0;

    const Token& cur() const { return toks[i]; }
    bool at(Tok k) const { return cur().kind == k; }
    Token eat() { return toks[i++]; }
    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, cur().pos); }
    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what + ", got '" + cur().text + "'");
        return eat();
    }

    std::string fo_name() {
        Token t = expect(Tok::Ident, "a first-order variable");
        if (upper_initial(t.text)) fail("'" + t.text + "': first-order names start lower-case");
        return t.text;
    }
    std::string so_name() {
        Token t = expect(Tok::Ident, "a second-order variable");
        if (!upper_initial(t.text)) fail("'" + t.text + "': second-order names start upper-case");
        return t.text;
    }
    int arity_suffix() {
        expect(Tok::Colon, "':'");
        Token t = expect(Tok::Numeral, "an arity");
        int a = std::stoi(t.text);
        if (a < 1) fail("arity must be >= 1");
        return a;
    }

    // a term in atom/application position: variable or numeral
    std::string term() {
        if (at(Tok::Numeral)) return eat().text;
        Token t = expect(Tok::Ident, "a variable or numeral");
        return t.text;
    }

    std::vector<std::string> term_list_paren() {
        expect(Tok::LParen, "'('");
        std::vector<std::string> out;
        if (!at(Tok::RParen)) {
            out.push_back(term());
            while (at(Tok::Comma)) { eat(); out.push_back(term()); }
        }
        expect(Tok::RParen, "')'");
        return out;
    }

    std::vector<std::string> var_list_paren(bool so_case_lower) {
        expect(Tok::LParen, "'('");
        std::vector<std::string> out;
        out.push_back(so_case_lower ? fo_name() : fo_name());
        while (at(Tok::Comma)) { eat(); out.push_back(fo_name()); }
        expect(Tok::RParen, "')'");
        return out;
    }

    FormulaPtr parse() {
        auto f = guard_level();
        expect(Tok::End, "end of input");
        return f;
    }

    FormulaPtr guard_level() {
        auto lhs = oplus_level();
        if (at(Tok::Question)) {
            eat();
            auto rhs = guard_level();  // right associative
            return f_guard(lhs, rhs);
        }
        return lhs;
    }

    FormulaPtr oplus_level() {
        auto f = otimes_level();
        while (at(Tok::OPlus)) { eat(); f = f_oplus(f, otimes_level()); }
        return f;
    }
    FormulaPtr otimes_level() {
        auto f = iff_level();
        while (at(Tok::OTimes)) { eat(); f = f_otimes(f, iff_level()); }
        return f;
    }
    FormulaPtr iff_level() {
        auto f = implies_level();
        while (at(Tok::DArrow)) { eat(); f = f_iff(f, implies_level()); }
        return f;
    }
    FormulaPtr implies_level() {
        auto f = or_level();
        if (at(Tok::Arrow)) { eat(); return f_implies(f, implies_level()); }  // right assoc
        return f;
    }
    FormulaPtr or_level() {
        auto f = and_level();
        while (at(Tok::Pipe)) { eat(); f = f_or(f, and_level()); }
        return f;
    }
    FormulaPtr and_level() {
        auto f = unary_level();
        while (at(Tok::Amp)) { eat(); f = f_and(f, unary_level()); }
        return f;
    }

    FormulaPtr unary_level() {
        switch (cur().kind) {
            case Tok::Bang: eat(); return f_not(unary_level());
            case Tok::KwFalse: eat(); return f_false();
            case Tok::KwTrue: eat(); return f_true();
            case Tok::ConstLit: return f_const(eat().text);
            case Tok::KwExists: { eat(); auto x = fo_name(); expect(Tok::Dot, "'.'"); return f_exists(x, guard_level()); }
            case Tok::KwForall: { eat(); auto x = fo_name(); expect(Tok::Dot, "'.'"); return f_forall(x, guard_level()); }
            case Tok::KwSum: { eat(); auto x = fo_name(); expect(Tok::Dot, "'.'"); return f_sum(x, guard_level()); }
            case Tok::KwProd: { eat(); auto x = fo_name(); expect(Tok::Dot, "'.'"); return f_prod(x, guard_level()); }
            case Tok::KwExistsSO: { eat(); auto X = so_name(); int k = arity_suffix(); expect(Tok::Dot, "'.'"); return f_exists_so(X, k, guard_level()); }
            case Tok::KwSumSO: { eat(); auto X = so_name(); int k = arity_suffix(); expect(Tok::Dot, "'.'"); return f_sum_so(X, k, guard_level()); }
            case Tok::KwProdSO: { eat(); auto X = so_name(); int k = arity_suffix(); expect(Tok::Dot, "'.'"); return f_prod_so(X, k, guard_level()); }
            case Tok::LBracket: return closure();
            case Tok::LParen: {
                eat();
                auto f = guard_level();
                expect(Tok::RParen, "')'");
                return f;
            }
            case Tok::Ident: case Tok::Numeral: return atom();
            default: fail("expected a formula, got '" + cur().text + "'");
        }
    }

    FormulaPtr closure() {
        expect(Tok::LBracket, "'['");
        FKind kind;
        switch (cur().kind) {
            case Tok::KwTc: kind = FKind::Tc; break;
            case Tok::KwDtc: kind = FKind::Dtc; break;
            case Tok::KwLfp: kind = FKind::Lfp; break;
            case Tok::KwGfp: kind = FKind::Gfp; break;
            case Tok::KwIfp: kind = FKind::Ifp; break;
            case Tok::KwPfp: kind = FKind::Pfp; break;
            default: fail("expected tc, dtc, lfp, gfp, ifp or pfp after '['");
        }
        eat();
        if (kind == FKind::Tc || kind == FKind::Dtc) {
            auto xs = var_list_paren(true);
            expect(Tok::Arrow, "'->'");
            auto ys = var_list_paren(true);
            if (ys.size() != xs.size()) fail("closure binder tuples must have equal length");
            expect(Tok::Dot, "'.'");
            auto body = guard_level();
            expect(Tok::RBracket, "']'");
            auto terms = term_list_paren();
            if (terms.size() != 2 * xs.size()) fail("closure application needs 2k terms");
            return f_closure(kind, xs, ys, body, terms);
        }
        Token r = expect(Tok::Ident, "a relation symbol");
        if (upper_initial(r.text)) fail("fixpoint relation symbols start lower-case");
        auto xs = var_list_paren(true);
        expect(Tok::Dot, "'.'");
        auto body = guard_level();
        expect(Tok::RBracket, "']'");
        auto terms = term_list_paren();
        if (terms.size() != xs.size()) fail("fixpoint application needs k terms");
        return f_fixpoint(kind, r.text, xs, body, terms);
    }

    FormulaPtr atom() {
        std::string first = term();
        if (at(Tok::LParen)) {
            if (is_digit_str(first)) fail("numerals cannot head an atom");
            auto args = term_list_paren();
            if (upper_initial(first)) return f_so(first, args);
            return f_rel(first, args);
        }
        if (at(Tok::Eq)) { eat(); return f_eq(first, term()); }
        if (at(Tok::Neq)) { eat(); return f_neq(first, term()); }
        if (at(Tok::Less)) { eat(); return f_less(first, term()); }
        fail("expected '(', '=', '<' or '!=' after '" + first + "'");
    }

    static bool is_digit_str(const std::string& s) {
        return !s.empty() && isdigit((unsigned char)s[0]);
    }
};

// ------------------------------------------------------------------ printer

// Levels mirror the parser: 0 guard, 1 (+), 2 (*), 3 <->, 4 ->, 5 |, 6 &, 7 unary.
int level_of(const Formula& f) {
    switch (f.kind) {
        case FKind::Guard: return 0;
        case FKind::OPlus: return 1;
        case FKind::OTimes: return 2;
        case FKind::Iff: return 3;
        case FKind::Implies: return 4;
        case FKind::Or: return 5;
        case FKind::And: return 6;
        // quantifier bodies are parsed greedily to the end of the enclosing
        // expression, so an embedded quantifier must always be parenthesized
        case FKind::ExistsFO: case FKind::ForallFO: case FKind::ExistsSO:
        case FKind::SumFO: case FKind::ProdFO: case FKind::SumSO:
        case FKind::ProdSO: return 0;
        default: return 7;
    }
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i];
    }
    return out;
}

std::string pr(const Formula& f, int min_level);

std::string child(const Formula& f, int min_level) {
    std::string s = pr(f, min_level);
    if (level_of(f) < min_level) return "(" + s + ")";
    return s;
}

std::string pr(const Formula& f, int) {
    switch (f.kind) {
        case FKind::False: return "false";
        case FKind::True: return "true";
        case FKind::Eq: return f.args[0] + " = " + f.args[1];
        case FKind::Neq: return f.args[0] + " != " + f.args[1];
        case FKind::Less: return f.args[0] + " < " + f.args[1];
        case FKind::RelAtom: return f.name + "(" + join(f.args) + ")";
        case FKind::SOAtom: return f.name + "(" + join(f.args) + ")";
        case FKind::Not: return "!" + child(*f.a, 7);
        case FKind::Or: case FKind::And: case FKind::OPlus: case FKind::OTimes: {
            // left-associated chains get thousands of nodes long on
            // machine-generated formulas; walk the spine iteratively so the
            // recursion depth stays the formula's logical depth
            int la, rb;
            const char* op;
            switch (f.kind) {
                case FKind::Or: la = 5; rb = 6; op = " | "; break;
                case FKind::And: la = 6; rb = 7; op = " & "; break;
                case FKind::OPlus: la = 1; rb = 2; op = " (+) "; break;
                default: la = 2; rb = 3; op = " (*) "; break;
            }
            std::vector<const Formula*> spine;
            const Formula* g = &f;
            while (g->kind == f.kind) {
                spine.push_back(g);
                g = g->a.get();
            }
            std::string out = child(*g, la);
            for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
                out += op;
                out += child(*(*it)->b, rb);
            }
            return out;
        }
        case FKind::Implies: return child(*f.a, 5) + " -> " + child(*f.b, 4);
        case FKind::Iff: return child(*f.a, 3) + " <-> " + child(*f.b, 4);
        case FKind::ExistsFO: return "exists " + f.name + ". " + pr(*f.a, 0);
        case FKind::ForallFO: return "forall " + f.name + ". " + pr(*f.a, 0);
        case FKind::ExistsSO:
            return "existsSO " + f.name + ":" + std::to_string(f.so_arity) + ". " + pr(*f.a, 0);
        case FKind::Tc: case FKind::Dtc:
            return std::string("[") + (f.kind == FKind::Tc ? "tc" : "dtc") + " (" + join(f.bound1) +
                   ")->(" + join(f.bound2) + "). " + pr(*f.a, 0) + "](" + join(f.args) + ")";
        case FKind::Lfp: case FKind::Gfp: case FKind::Ifp: case FKind::Pfp: {
            const char* kw = f.kind == FKind::Lfp   ? "lfp"
                             : f.kind == FKind::Gfp ? "gfp"
                             : f.kind == FKind::Ifp ? "ifp"
                                                    : "pfp";
            return std::string("[") + kw + " " + f.name + "(" + join(f.bound1) + "). " +
                   pr(*f.a, 0) + "](" + join(f.args) + ")";
        }
        case FKind::Const: return "c(" + f.name + ")";
        case FKind::SumFO: return "sum " + f.name + ". " + pr(*f.a, 0);
        case FKind::ProdFO: return "prod " + f.name + ". " + pr(*f.a, 0);
        case FKind::SumSO:
            return "sumSO " + f.name + ":" + std::to_string(f.so_arity) + ". " + pr(*f.a, 0);
        case FKind::ProdSO:
            return "prodSO " + f.name + ":" + std::to_string(f.so_arity) + ". " + pr(*f.a, 0);
        case FKind::Guard: return child(*f.a, 1) + " ? " + child(*f.b, 0);
    }
    return "?";
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
    Lexer lx(text);
    lx.run();
    Parser p{std::move(lx.out)};
    auto f = p.parse();
    validate(*f);
    return f;
}

std::string print_formula(const Formula& f) { return pr(f, 0); }

}  // namespace wdc

#include "gim/expr.hpp"

#include <cctype>

#include "gim/errors.hpp"

namespace gim {

namespace {

enum class Tok {
    ident, integer,
    lparen, rparen, comma, semi, at,
    pipe, amp, backslash, tilde,
    plus, minus, star, slash,
    le, ge, eq,
    end,
};

struct Lexer {
    const std::string& text;
    size_t pos = 0;
    Tok tok = Tok::end;
    std::string value;  // ident text or integer digits
    size_t tok_pos = 0;

    explicit Lexer(const std::string& t) : text(t) { advance(); }

    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1, col = 1;
        for (size_t i = 0; i < tok_pos && i < text.size(); ++i) {
            if (text[i] == '\n') { ++line; col = 1; } else ++col;
        }
        throw ParseError(msg, line, col);
    }

    void advance() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        tok_pos = pos;
        value.clear();
        if (pos >= text.size()) { tok = Tok::end; return; }
        char c = text[pos];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                value += text[pos++];
            tok = Tok::ident;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                value += text[pos++];
            tok = Tok::integer;
            return;
        }
        ++pos;
        switch (c) {
            case '(': tok = Tok::lparen; return;
            case ')': tok = Tok::rparen; return;
            case ',': tok = Tok::comma; return;
            case ';': tok = Tok::semi; return;
            case '@': tok = Tok::at; return;
            case '|': tok = Tok::pipe; return;
            case '&': tok = Tok::amp; return;
            case '\\': tok = Tok::backslash; return;
            case '~': tok = Tok::tilde; return;
            case '+': tok = Tok::plus; return;
            case '-': tok = Tok::minus; return;
            case '*': tok = Tok::star; return;
            case '/': tok = Tok::slash; return;
            case '<':
            case '>': {
                if (pos >= text.size() || text[pos] != '=')
                    fail(std::string("expected '=' after '") + c + "'");
                ++pos;
                tok = (c == '<') ? Tok::le : Tok::ge;
                return;
            }
            case '=': tok = Tok::eq; return;
            default: fail(std::string("unexpected character '") + c + "'");
        }
    }

    bool accept(Tok t) {
        if (tok != t) return false;
        advance();
        return true;
    }

    void expect(Tok t, const char* what) {
        if (tok != t) fail(std::string("expected ") + what);
        advance();
    }

    std::string expect_ident(const char* what) {
        if (tok != Tok::ident) fail(std::string("expected ") + what);
        std::string v = value;
        advance();
        return v;
    }
};

// ---- set expressions --------------------------------------------------

SetExprPtr make_node(SetExpr::Kind kind) {
    auto n = std::make_unique<SetExpr>();
    n->kind = kind;
    return n;
}

SetExprPtr parse_set(Lexer& lx);

std::string event_arg(Lexer& lx) {
    // cross/rel/multi accept event names plus the reserved full/empty.
    return lx.expect_ident("an event name");
}

SetExprPtr parse_set_primary(Lexer& lx) {
    if (lx.accept(Tok::lparen)) {
        auto inner = parse_set(lx);
        lx.expect(Tok::rparen, "')'");
        return inner;
    }
    std::string head = lx.expect_ident("a set primary");
    if (head == "full") return make_node(SetExpr::Kind::full);
    if (head == "empty") return make_node(SetExpr::Kind::empty);
    if (head == "rv" || head == "ev") {
        lx.expect(Tok::lparen, "'('");
        auto n = make_node(head == "rv" ? SetExpr::Kind::rv : SetExpr::Kind::ev);
        n->name = lx.expect_ident("a name");
        lx.expect(Tok::rparen, "')'");
        return n;
    }
    if (head == "cross" || head == "rel") {
        lx.expect(Tok::lparen, "'('");
        auto n = make_node(head == "cross" ? SetExpr::Kind::cross : SetExpr::Kind::rel);
        n->args.push_back(event_arg(lx));
        lx.expect(Tok::comma, "','");
        n->args.push_back(event_arg(lx));
        lx.expect(Tok::rparen, "')'");
        return n;
    }
    if (head == "multi") {
        lx.expect(Tok::lparen, "'('");
        auto n = make_node(SetExpr::Kind::multi);
        n->args.push_back(event_arg(lx));
        while (lx.accept(Tok::semi)) n->args.push_back(event_arg(lx));
        lx.expect(Tok::rparen, "')'");
        return n;
    }
    lx.fail("unknown set primary '" + head + "'");
}

SetExprPtr parse_set_unary(Lexer& lx) {
    if (lx.accept(Tok::tilde)) {
        auto n = make_node(SetExpr::Kind::set_complement);
        n->lhs = parse_set_unary(lx);
        return n;
    }
    return parse_set_primary(lx);
}

SetExprPtr parse_set_conj(Lexer& lx) {
    auto left = parse_set_unary(lx);
    while (lx.accept(Tok::amp)) {
        auto n = make_node(SetExpr::Kind::set_intersect);
        n->lhs = std::move(left);
        n->rhs = parse_set_unary(lx);
        left = std::move(n);
    }
    return left;
}

SetExprPtr parse_set_diff(Lexer& lx) {
    auto left = parse_set_conj(lx);
    while (lx.accept(Tok::backslash)) {
        auto n = make_node(SetExpr::Kind::set_difference);
        n->lhs = std::move(left);
        n->rhs = parse_set_conj(lx);
        left = std::move(n);
    }
    return left;
}

SetExprPtr parse_set(Lexer& lx) {
    auto left = parse_set_diff(lx);
    while (lx.accept(Tok::pipe)) {
        auto n = make_node(SetExpr::Kind::set_union);
        n->lhs = std::move(left);
        n->rhs = parse_set_diff(lx);
        left = std::move(n);
    }
    return left;
}

// ---- quantity expressions ----------------------------------------------

// Leading zeros would otherwise be read as an octal prefix.
BigInt digits_to_int(const std::string& digits) {
    size_t first = digits.find_first_not_of('0');
    if (first == std::string::npos) return BigInt(0);
    return BigInt(digits.substr(first));
}

Rational parse_rational_tok(Lexer& lx) {
    if (lx.tok != Tok::integer) lx.fail("expected a rational literal");
    BigInt num = digits_to_int(lx.value);
    lx.advance();
    if (lx.accept(Tok::slash)) {
        if (lx.tok != Tok::integer) lx.fail("expected a denominator");
        BigInt den = digits_to_int(lx.value);
        lx.advance();
        if (den == 0) lx.fail("division by zero in rational literal");
        return Rational(num, den);
    }
    return Rational(num);
}

std::vector<std::string> parse_name_list(Lexer& lx) {
    std::vector<std::string> names;
    names.push_back(lx.expect_ident("a variable name"));
    while (lx.accept(Tok::comma)) names.push_back(lx.expect_ident("a variable name"));
    return names;
}

// "X, Y, @E, @F" after the conditioning bar.
void parse_context(Lexer& lx, QuantityTerm& term) {
    do {
        if (lx.accept(Tok::at))
            term.ctx_events.push_back(lx.expect_ident("an event name"));
        else
            term.ctx_rvs.push_back(lx.expect_ident("a name"));
    } while (lx.accept(Tok::comma));
}

QuantityTerm parse_quantity(Lexer& lx) {
    QuantityTerm term;
    std::string head = lx.expect_ident("a quantity");
    if (head == "H") {
        term.kind = QuantityTerm::Kind::entropy;
        lx.expect(Tok::lparen, "'('");
        term.parts.push_back(parse_name_list(lx));
        if (lx.accept(Tok::pipe)) parse_context(lx, term);
        lx.expect(Tok::rparen, "')'");
        return term;
    }
    if (head == "I") {
        term.kind = QuantityTerm::Kind::information;
        lx.expect(Tok::lparen, "'('");
        term.parts.push_back(parse_name_list(lx));
        lx.expect(Tok::semi, "';'");
        term.parts.push_back(parse_name_list(lx));
        if (lx.accept(Tok::semi)) term.parts.push_back(parse_name_list(lx));
        if (lx.accept(Tok::pipe)) parse_context(lx, term);
        lx.expect(Tok::rparen, "')'");
        return term;
    }
    if (head == "m") {
        term.kind = QuantityTerm::Kind::region;
        lx.expect(Tok::lparen, "'('");
        term.set = parse_set(lx);
        lx.expect(Tok::rparen, "')'");
        return term;
    }
    lx.fail("expected H(...), I(...), m(...) or a rational, got '" + head + "'");
}

// factor := rational | quantity;  term := factor { '*' factor }
// At most one quantity per product.
QuantityTerm parse_term(Lexer& lx) {
    QuantityTerm acc;  // starts as constant 1
    bool have_quantity = false;
    while (true) {
        if (lx.tok == Tok::integer) {
            acc.coef *= parse_rational_tok(lx);
        } else if (lx.tok == Tok::ident) {
            if (have_quantity) lx.fail("cannot multiply two quantities");
            QuantityTerm q = parse_quantity(lx);
            q.coef = acc.coef;
            acc = std::move(q);
            have_quantity = true;
        } else {
            lx.fail("expected a quantity or rational");
        }
        if (!lx.accept(Tok::star)) break;
    }
    return acc;
}

QuantityExpr parse_quantity_sum(Lexer& lx) {
    QuantityExpr expr;
    bool negate = false;
    if (lx.accept(Tok::minus)) negate = true;
    else lx.accept(Tok::plus);
    while (true) {
        QuantityTerm term = parse_term(lx);
        if (negate) term.coef = -term.coef;
        expr.terms.push_back(std::move(term));
        if (lx.accept(Tok::plus)) negate = false;
        else if (lx.accept(Tok::minus)) negate = true;
        else break;
    }
    return expr;
}

}  // namespace

SetExprPtr parse_set_expr(const std::string& text) {
    Lexer lx(text);
    auto e = parse_set(lx);
    if (lx.tok != Tok::end) lx.fail("trailing input after set expression");
    return e;
}

QuantityExpr parse_quantity_expr(const std::string& text) {
    Lexer lx(text);
    auto e = parse_quantity_sum(lx);
    if (lx.tok != Tok::end) lx.fail("trailing input after expression");
    return e;
}

QuantityRelation parse_quantity_relation(const std::string& text) {
    Lexer lx(text);
    QuantityRelation rel;
    rel.lhs = parse_quantity_sum(lx);
    switch (lx.tok) {
        case Tok::le: rel.rel = Relation::le; break;
        case Tok::ge: rel.rel = Relation::ge; break;
        case Tok::eq: rel.rel = Relation::eq; break;
        default: lx.fail("expected '<=', '>=' or '='");
    }
    lx.advance();
    rel.rhs = parse_quantity_sum(lx);
    if (lx.tok != Tok::end) lx.fail("trailing input after relation");
    return rel;
}

const char* relation_text(Relation rel) {
    switch (rel) {
        case Relation::le: return "<=";
        case Relation::ge: return ">=";
        default: return "=";
    }
}

}  // namespace gim

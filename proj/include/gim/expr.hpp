#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gim/rational.hpp"

namespace gim {

/// Parsed set expression. Grammar (loosest binding last):
///
///   primary  := rv(NAME) | ev(NAME) | cross(E, F) | rel(E, F)
///             | multi(E1; E2; ...) | full | empty | ( expr )
///   unary    := ~ unary | primary
///   conj     := unary { & unary }
///   diff     := conj { \ conj }
///   expr     := diff { | diff }
///
/// The names full/empty are reserved and also usable as event arguments of
/// cross/rel/multi, denoting the whole space and the empty event.
struct SetExpr {
    enum class Kind {
        full, empty, rv, ev, cross, rel, multi,
        set_union, set_intersect, set_difference, set_complement,
    };
    Kind kind;
    std::string name;                // rv/ev
    std::vector<std::string> args;   // cross/rel/multi event names
    std::unique_ptr<SetExpr> lhs, rhs;  // operators (complement uses lhs only)
};
using SetExprPtr = std::unique_ptr<SetExpr>;

/// One additive term of a quantity expression: a rational multiple of an
/// entropy/information/measure quantity, or a bare rational constant.
///
/// Any term with a nonempty event context denotes the *measure* of its
/// region, which carries an implicit P(E) scaling: H(X|@E) is
/// P(E) H(X|E), not H(X|E).
struct QuantityTerm {
    enum class Kind { entropy, information, region, constant };
    Kind kind = Kind::constant;
    Rational coef = 1;
    std::vector<std::vector<std::string>> parts;  // entropy: 1 list; information: 2-3 lists
    std::vector<std::string> ctx_rvs;
    std::vector<std::string> ctx_events;
    std::shared_ptr<SetExpr> set;  // region
};

struct QuantityExpr {
    std::vector<QuantityTerm> terms;
};

enum class Relation { le, ge, eq };

struct QuantityRelation {
    QuantityExpr lhs, rhs;
    Relation rel = Relation::eq;
};

SetExprPtr parse_set_expr(const std::string& text);
QuantityExpr parse_quantity_expr(const std::string& text);

/// "LHS <= RHS", "LHS >= RHS" or "LHS = RHS" over quantity expressions.
QuantityRelation parse_quantity_relation(const std::string& text);

const char* relation_text(Relation rel);

}  // namespace gim

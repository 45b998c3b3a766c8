#pragma once

#include "gim/canonical_set.hpp"
#include "gim/expr.hpp"
#include "gim/measure.hpp"
#include "gim/space_io.hpp"

namespace gim {

/// Materializes a parsed set expression on a concrete space.
CanonicalSet build_set(const SetExpr& expr, const SpaceBundle& bundle);

/// Evaluates a quantity expression on a concrete space, in nats.
///
/// H(...) and I(...) terms are computed from the classical closed forms
/// (joint entropies over exact conditional distributions), independently of
/// the set-measure engine; m(...) terms go through the engine. Event-context
/// terms denote measures and carry the implicit P(E) factor; a context event
/// of probability zero makes the term 0.
double eval_quantity(const QuantityExpr& expr, const SpaceBundle& bundle,
                     const MeasureOptions& opts = {});

struct CheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    double residual() const { return lhs - rhs; }
};

/// Evaluates both sides of a relation; "=" passes iff |L-R| <= tol, the
/// inequalities allow tol slack.
CheckResult check_relation(const QuantityRelation& rel, const SpaceBundle& bundle, double tol,
                           const MeasureOptions& opts = {});

}  // namespace gim

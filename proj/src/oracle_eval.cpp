#include "gim/oracle_eval.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "gim/errors.hpp"

namespace gim {

namespace {

Event resolve_event(const std::string& name, const SpaceBundle& bundle) {
    if (name == "full") return Event(bundle.space, bundle.space->full_mask());
    if (name == "empty") return Event(bundle.space, 0);
    return bundle.event(name);
}

// P(ctx) H(joint of names | ctx) with the measure convention: empty name list
// means the constant variable (0 entropy), a zero-probability context makes
// the whole term 0. No events: plain joint entropy.
double scaled_joint_entropy(const std::vector<std::string>& names,
                            const std::vector<std::string>& ctx_events,
                            const SpaceBundle& bundle) {
    Event ctx(bundle.space, bundle.space->full_mask());
    for (const auto& e : ctx_events) ctx = ctx.intersect(resolve_event(e, bundle));
    if (names.empty()) return 0.0;
    std::vector<RandomVariable> rvs;
    for (const auto& n : names) rvs.push_back(bundle.rv(n));
    RandomVariable j = joint(std::span<const RandomVariable>(rvs));
    if (ctx_events.empty()) return entropy(j);
    Rational pe = ctx.prob();
    if (pe == 0) return 0.0;
    return to_double(pe) * cond_entropy_event(j, ctx);
}

std::vector<std::string> concat(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double eval_term(const QuantityTerm& term, const SpaceBundle& bundle,
                 const MeasureOptions& opts) {
    switch (term.kind) {
        case QuantityTerm::Kind::constant:
            return to_double(term.coef);
        case QuantityTerm::Kind::region:
            return to_double(term.coef) * measure(build_set(*term.set, bundle), opts);
        case QuantityTerm::Kind::entropy: {
            double h = scaled_joint_entropy(concat(term.parts[0], term.ctx_rvs),
                                            term.ctx_events, bundle) -
                       scaled_joint_entropy(term.ctx_rvs, term.ctx_events, bundle);
            return to_double(term.coef) * h;
        }
        case QuantityTerm::Kind::information: {
            // Inclusion-exclusion over the parts: -sum_T (-1)^|T| H(T, ctx).
            size_t k = term.parts.size();
            double total = 0.0;
            for (uint32_t t = 0; t < (1u << k); ++t) {
                std::vector<std::string> names = term.ctx_rvs;
                for (size_t i = 0; i < k; ++i)
                    if ((t >> i) & 1u) names = concat(names, term.parts[i]);
                double h = scaled_joint_entropy(names, term.ctx_events, bundle);
                total += (std::popcount(t) % 2 == 0) ? -h : h;
            }
            return to_double(term.coef) * total;
        }
    }
    return 0.0;
}

}  // namespace

CanonicalSet build_set(const SetExpr& expr, const SpaceBundle& bundle) {
    switch (expr.kind) {
        case SetExpr::Kind::full: return CanonicalSet::full_set(bundle.space);
        case SetExpr::Kind::empty: return CanonicalSet::empty_set(bundle.space);
        case SetExpr::Kind::rv: return CanonicalSet::from_rv(bundle.rv(expr.name));
        case SetExpr::Kind::ev: return CanonicalSet::from_event(bundle.event(expr.name));
        case SetExpr::Kind::cross:
            return CanonicalSet::cross(resolve_event(expr.args[0], bundle),
                                       resolve_event(expr.args[1], bundle));
        case SetExpr::Kind::rel:
            return CanonicalSet::relative(resolve_event(expr.args[0], bundle),
                                          resolve_event(expr.args[1], bundle));
        case SetExpr::Kind::multi: {
            std::vector<Event> blocks;
            for (const auto& name : expr.args) blocks.push_back(resolve_event(name, bundle));
            return CanonicalSet::multi(blocks);
        }
        case SetExpr::Kind::set_union:
            return build_set(*expr.lhs, bundle).unite(build_set(*expr.rhs, bundle));
        case SetExpr::Kind::set_intersect:
            return build_set(*expr.lhs, bundle).intersect(build_set(*expr.rhs, bundle));
        case SetExpr::Kind::set_difference:
            return build_set(*expr.lhs, bundle).difference(build_set(*expr.rhs, bundle));
        case SetExpr::Kind::set_complement:
            return build_set(*expr.lhs, bundle).complement();
    }
    throw std::logic_error("unhandled set expression kind");
}

double eval_quantity(const QuantityExpr& expr, const SpaceBundle& bundle,
                     const MeasureOptions& opts) {
    double total = 0.0;
    for (const auto& term : expr.terms) total += eval_term(term, bundle, opts);
    return total;
}

CheckResult check_relation(const QuantityRelation& rel, const SpaceBundle& bundle, double tol,
                           const MeasureOptions& opts) {
    CheckResult r;
    r.lhs = eval_quantity(rel.lhs, bundle, opts);
    r.rhs = eval_quantity(rel.rhs, bundle, opts);
    switch (rel.rel) {
        case Relation::eq: r.pass = std::abs(r.lhs - r.rhs) <= tol; break;
        case Relation::le: r.pass = r.lhs <= r.rhs + tol; break;
        case Relation::ge: r.pass = r.lhs + tol >= r.rhs; break;
    }
    return r;
}

}  // namespace gim

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gim/expr.hpp"
#include "gim/rational.hpp"
#include "gim/space_io.hpp"

namespace gim {

/// A structural or given fact about the declared variables and events.
///
/// The first five kinds eliminate diagram cells outright:
///   subset_event       E1 within E2
///   disjoint_events    E1 and E2 disjoint
///   function_of        target variables determined by the given variables,
///                      inside the (optional) context events
///   refines            within F, equal X-values always share one of the
///                      listed events
///   induces_partition  the listed events are exactly the level sets of the
///                      variable (shorthand for the function_of, disjoint and
///                      refines facts this implies)
/// zero_quantity adds a linear equality (e.g. an independence statement
/// "I(X;Y)") rather than eliminating cells.
struct Fact {
    enum class Kind {
        subset_event, disjoint_events, function_of, refines, induces_partition, zero_quantity,
    };
    Kind kind;
    std::vector<std::string> targets;  // function_of
    std::vector<std::string> given;    // function_of
    std::vector<std::string> context;  // function_of (events, may be empty)
    std::vector<std::string> events;   // subset/disjoint pair, refines/induces lists
    std::string rv;                    // refines / induces_partition
    std::string within;                // refines
    std::string expr_text;             // zero_quantity
    QuantityExpr expr;                 // zero_quantity, parsed

    std::string describe() const;
};

/// Atoms are indexed by rv_mask | event_mask << n: bit i of the low part
/// means the cell lies inside the i-th variable's set, bit j of the high part
/// inside the j-th event's set. Index 0 is the outer cell.
struct IEProblem {
    std::vector<std::string> rv_names;     // n <= 8
    std::vector<std::string> event_names;  // m <= 8
    std::vector<Fact> facts;
    QuantityRelation goal;
    std::string goal_text;

    int n() const { return static_cast<int>(rv_names.size()); }
    int m() const { return static_cast<int>(event_names.size()); }
    size_t atom_count() const { return size_t(1) << (n() + m()); }
    uint32_t rv_part(size_t atom) const { return atom & ((1u << n()) - 1); }
    uint32_t event_part(size_t atom) const { return static_cast<uint32_t>(atom >> n()); }
    int rv_index(const std::string& name) const;
    int event_index(const std::string& name) const;
};

IEProblem parse_problem(const std::string& json_text);
IEProblem load_problem(const std::string& path);

/// Live/eliminated status per atom. Elimination is monotone; eliminated_by
/// records the first fact responsible.
struct AtomTable {
    size_t atoms = 0;
    std::vector<int> eliminated_by;  // -1 = live

    bool live(size_t atom) const { return eliminated_by[atom] < 0; }
    size_t live_count() const;
};

AtomTable apply_structural_rules(const IEProblem& problem);

/// Rational coefficients per atom plus a constant offset.
struct LinearExpr {
    std::vector<Rational> coef;
    Rational constant = 0;
};

/// Quantity expression -> atom coefficients. Terms with an event context
/// denote measures (implicit P(E) scaling). Region terms may only use
/// rv()/ev()/full/empty and the Boolean operators.
LinearExpr expr_to_linear(const QuantityExpr& expr, const IEProblem& problem);

/// One generated constraint, normalized so that `ge` means expr >= 0 and
/// `eq` means expr = 0 over the atom measures.
struct Constraint {
    enum class Kind { eq, ge };
    Kind kind;
    LinearExpr expr;
    std::string label;
};

/// The full constraint family: the zero total measure, nonpositive event
/// intersections, the elemental nonnegative entropy/information family
/// crossed with event contexts, and any zero_quantity givens.
std::vector<Constraint> generate_constraints(const IEProblem& problem, const AtomTable& table);

/// Nonnegative multipliers for `ge` constraints and sign-free multipliers for
/// `eq` constraints whose exact combination reproduces one direction of the
/// goal. Checkable without re-running the LP.
struct ProofCertificate {
    Relation direction;  // ge: combination equals goal_expr; le: equals its negation
    std::vector<Rational> multipliers;
};

struct ProofResult {
    bool proved = false;
    std::vector<ProofCertificate> certificates;  // one per direction needed
    std::vector<Rational> witness;               // per atom; zero on eliminated cells
    std::string explanation;
};

/// Decides whether the goal is implied by the generated constraints, in exact
/// rational arithmetic. A NotProvable result carries a feasible atom
/// assignment violating the goal; it is not claimed to be realizable by an
/// actual distribution.
ProofResult prove(const IEProblem& problem);

bool verify_certificate(const IEProblem& problem, const ProofResult& result);

std::string certificate_json(const IEProblem& problem, const ProofResult& result);

struct NumericCheckReport {
    std::vector<double> atom_values;  // per atom, eliminated included
    double max_eliminated_abs = 0.0;
    double goal_lhs = 0.0;
    double goal_rhs = 0.0;
    bool goal_ok = false;
    bool eliminated_ok = false;
    bool pass() const { return goal_ok && eliminated_ok; }
};

/// Evaluates every atom on a concrete binding and checks that eliminated
/// atoms vanish and the goal holds numerically. Throws std::invalid_argument
/// when the binding does not satisfy the declared facts.
NumericCheckReport numeric_check(const IEProblem& problem, const SpaceBundle& binding,
                                 double tol = 1e-9);

/// Conjunction describing one cell, e.g. "rv(X) & ~rv(Y) & ev(E)".
std::string atom_description(const IEProblem& problem, size_t atom);

// Diagram output: one row per atom.
std::string diagram_tsv(const IEProblem& problem, const AtomTable& table);
std::string diagram_dot(const IEProblem& problem, const AtomTable& table);

}  // namespace gim

#include "gim/prover.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gim/canonical_set.hpp"
#include "gim/errors.hpp"
#include "gim/measure.hpp"
#include "gim/oracle_eval.hpp"
#include "gim/simplex.hpp"

namespace gim {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string Fact::describe() const {
    switch (kind) {
        case Kind::subset_event:
            return "subset_event(" + events[0] + " within " + events[1] + ")";
        case Kind::disjoint_events:
            return "disjoint_events(" + join(events, ", ") + ")";
        case Kind::function_of: {
            std::string s = "function_of(" + join(targets, ",") + " | " +
                            (given.empty() ? std::string("-") : join(given, ","));
            if (!context.empty()) s += " @ " + join(context, ",");
            return s + ")";
        }
        case Kind::refines:
            return "refines(" + rv + ": " + join(events, ",") + " within " + within + ")";
        case Kind::induces_partition:
            return "induces_partition(" + rv + ": " + join(events, ",") + ")";
        case Kind::zero_quantity:
            return "zero_quantity(" + expr_text + ")";
    }
    return "?";
}

int IEProblem::rv_index(const std::string& name) const {
    auto it = std::find(rv_names.begin(), rv_names.end(), name);
    return it == rv_names.end() ? -1 : static_cast<int>(it - rv_names.begin());
}

int IEProblem::event_index(const std::string& name) const {
    auto it = std::find(event_names.begin(), event_names.end(), name);
    return it == event_names.end() ? -1 : static_cast<int>(it - event_names.begin());
}

// ---- problem files -------------------------------------------------------

namespace {

std::vector<std::string> string_list(const json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + " must be a list");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) throw ParseError(what + " must contain strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

void check_rv_names(const IEProblem& p, const std::vector<std::string>& names,
                    const std::string& where) {
    for (const auto& n : names)
        if (p.rv_index(n) < 0)
            throw ParseError(where + " references undeclared random variable '" + n + "'");
}

void check_event_names(const IEProblem& p, const std::vector<std::string>& names,
                       const std::string& where) {
    for (const auto& n : names)
        if (p.event_index(n) < 0)
            throw ParseError(where + " references undeclared event '" + n + "'");
}

Fact parse_fact(const IEProblem& p, const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError("each fact needs a 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    Fact f;
    if (kind == "subset_event") {
        f.kind = Fact::Kind::subset_event;
        f.events = {j.at("subset").get<std::string>(), j.at("superset").get<std::string>()};
        check_event_names(p, f.events, "subset_event");
    } else if (kind == "disjoint_events") {
        f.kind = Fact::Kind::disjoint_events;
        f.events = string_list(j.at("events"), "disjoint_events.events");
        if (f.events.size() != 2) throw ParseError("disjoint_events takes exactly two events");
        check_event_names(p, f.events, "disjoint_events");
    } else if (kind == "function_of") {
        f.kind = Fact::Kind::function_of;
        if (j.contains("targets")) f.targets = string_list(j.at("targets"), "function_of.targets");
        else f.targets = {j.at("target").get<std::string>()};
        if (j.contains("given")) f.given = string_list(j.at("given"), "function_of.given");
        if (j.contains("context")) {
            if (j.at("context").is_string()) f.context = {j.at("context").get<std::string>()};
            else f.context = string_list(j.at("context"), "function_of.context");
        }
        if (f.targets.empty()) throw ParseError("function_of needs at least one target");
        check_rv_names(p, f.targets, "function_of");
        check_rv_names(p, f.given, "function_of");
        check_event_names(p, f.context, "function_of");
    } else if (kind == "refines") {
        f.kind = Fact::Kind::refines;
        f.rv = j.at("rv").get<std::string>();
        f.events = string_list(j.at("events"), "refines.events");
        f.within = j.at("within").get<std::string>();
        check_rv_names(p, {f.rv}, "refines");
        check_event_names(p, f.events, "refines");
        check_event_names(p, {f.within}, "refines");
    } else if (kind == "induces_partition") {
        f.kind = Fact::Kind::induces_partition;
        f.rv = j.at("rv").get<std::string>();
        f.events = string_list(j.at("events"), "induces_partition.events");
        if (f.events.empty()) throw ParseError("induces_partition needs at least one event");
        check_rv_names(p, {f.rv}, "induces_partition");
        check_event_names(p, f.events, "induces_partition");
    } else if (kind == "zero_quantity") {
        f.kind = Fact::Kind::zero_quantity;
        f.expr_text = j.at("expr").get<std::string>();
        f.expr = parse_quantity_expr(f.expr_text);
    } else {
        throw ParseError("unknown fact kind '" + kind + "'");
    }
    return f;
}

}  // namespace

namespace {

IEProblem parse_problem_checked(const json& doc);

}  // namespace

IEProblem parse_problem(const std::string& json_text) {
    try {
        return parse_problem_checked(json::parse(json_text));
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid problem file: ") + e.what());
    }
}

namespace {

IEProblem parse_problem_checked(const json& doc) {
    IEProblem p;
    if (doc.contains("rvs")) p.rv_names = string_list(doc.at("rvs"), "rvs");
    if (doc.contains("events")) p.event_names = string_list(doc.at("events"), "events");
    if (p.n() > 8 || p.m() > 8)
        throw ParseError("at most 8 random variables and 8 events are supported");
    if (p.n() + p.m() == 0) throw ParseError("declare at least one random variable or event");
    {
        std::vector<std::string> all = p.rv_names;
        all.insert(all.end(), p.event_names.begin(), p.event_names.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            throw ParseError("declared names must be unique");
    }
    if (doc.contains("facts"))
        for (const auto& fj : doc.at("facts")) p.facts.push_back(parse_fact(p, fj));
    if (!doc.contains("goal")) throw ParseError("problem needs a 'goal'");
    p.goal_text = doc.at("goal").get<std::string>();
    p.goal = parse_quantity_relation(p.goal_text);
    // Resolve names early so errors carry context.
    expr_to_linear(p.goal.lhs, p);
    expr_to_linear(p.goal.rhs, p);
    for (const Fact& f : p.facts)
        if (f.kind == Fact::Kind::zero_quantity) expr_to_linear(f.expr, p);
    return p;
}

}  // namespace

IEProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

// ---- regions over atoms ----------------------------------------------------

namespace {

using Region = std::vector<bool>;  // per atom

Region region_all(const IEProblem& p, bool value) { return Region(p.atom_count(), value); }

Region region_rv(const IEProblem& p, int i) {
    Region r = region_all(p, false);
    for (size_t a = 0; a < p.atom_count(); ++a)
        if ((p.rv_part(a) >> i) & 1u) r[a] = true;
    return r;
}

Region region_event(const IEProblem& p, int j) {
    Region r = region_all(p, false);
    for (size_t a = 0; a < p.atom_count(); ++a)
        if ((p.event_part(a) >> j) & 1u) r[a] = true;
    return r;
}

Region eval_region(const SetExpr& e, const IEProblem& p) {
    switch (e.kind) {
        case SetExpr::Kind::full: return region_all(p, true);
        case SetExpr::Kind::empty: return region_all(p, false);
        case SetExpr::Kind::rv: {
            int i = p.rv_index(e.name);
            if (i < 0) throw ParseError("undeclared random variable '" + e.name + "'");
            return region_rv(p, i);
        }
        case SetExpr::Kind::ev: {
            int j = p.event_index(e.name);
            if (j < 0) throw ParseError("undeclared event '" + e.name + "'");
            return region_event(p, j);
        }
        case SetExpr::Kind::cross:
        case SetExpr::Kind::rel:
        case SetExpr::Kind::multi:
            throw ParseError("cross/rel/multi sets are not available in the symbolic prover");
        case SetExpr::Kind::set_union: {
            Region a = eval_region(*e.lhs, p), b = eval_region(*e.rhs, p);
            for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
            return a;
        }
        case SetExpr::Kind::set_intersect: {
            Region a = eval_region(*e.lhs, p), b = eval_region(*e.rhs, p);
            for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
            return a;
        }
        case SetExpr::Kind::set_difference: {
            Region a = eval_region(*e.lhs, p), b = eval_region(*e.rhs, p);
            for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] && !b[i];
            return a;
        }
        case SetExpr::Kind::set_complement: {
            Region a = eval_region(*e.lhs, p);
            for (size_t i = 0; i < a.size(); ++i) a[i] = !a[i];
            return a;
        }
    }
    throw std::logic_error("unhandled set expression kind");
}

uint32_t rv_mask_of(const IEProblem& p, const std::vector<std::string>& names,
                    const std::string& where) {
    uint32_t mask = 0;
    for (const auto& n : names) {
        int i = p.rv_index(n);
        if (i < 0) throw ParseError(where + ": undeclared random variable '" + n + "'");
        mask |= 1u << i;
    }
    return mask;
}

uint32_t event_mask_of(const IEProblem& p, const std::vector<std::string>& names,
                       const std::string& where) {
    uint32_t mask = 0;
    for (const auto& n : names) {
        int j = p.event_index(n);
        if (j < 0) throw ParseError(where + ": undeclared event '" + n + "'");
        mask |= 1u << j;
    }
    return mask;
}

// Atoms of ((union of each part) minus ctx) within the event context.
void add_info_region(LinearExpr& out, const IEProblem& p, const Rational& coef,
                     const std::vector<uint32_t>& part_masks, uint32_t ctx_rv_mask,
                     uint32_t ctx_event_mask) {
    for (size_t a = 0; a < p.atom_count(); ++a) {
        uint32_t s = p.rv_part(a);
        if (s & ctx_rv_mask) continue;
        if ((p.event_part(a) & ctx_event_mask) != ctx_event_mask) continue;
        bool inside = true;
        for (uint32_t pm : part_masks)
            if (!(s & pm)) { inside = false; break; }
        if (inside) out.coef[a] += coef;
    }
}

}  // namespace

LinearExpr expr_to_linear(const QuantityExpr& expr, const IEProblem& p) {
    LinearExpr out;
    out.coef.assign(p.atom_count(), Rational(0));
    for (const QuantityTerm& term : expr.terms) {
        switch (term.kind) {
            case QuantityTerm::Kind::constant:
                out.constant += term.coef;
                break;
            case QuantityTerm::Kind::region: {
                Region r = eval_region(*term.set, p);
                for (size_t a = 0; a < p.atom_count(); ++a)
                    if (r[a]) out.coef[a] += term.coef;
                break;
            }
            case QuantityTerm::Kind::entropy:
            case QuantityTerm::Kind::information: {
                std::vector<uint32_t> parts;
                for (const auto& names : term.parts)
                    parts.push_back(rv_mask_of(p, names, "quantity"));
                uint32_t ctx_rv = rv_mask_of(p, term.ctx_rvs, "quantity context");
                uint32_t ctx_ev = event_mask_of(p, term.ctx_events, "quantity context");
                add_info_region(out, p, term.coef, parts, ctx_rv, ctx_ev);
                break;
            }
        }
    }
    return out;
}

// ---- structural rules ------------------------------------------------------

size_t AtomTable::live_count() const {
    size_t c = 0;
    for (int e : eliminated_by)
        if (e < 0) ++c;
    return c;
}

namespace {

void eliminate_if(AtomTable& table, const IEProblem& p, int fact_index, auto&& pred) {
    for (size_t a = 0; a < p.atom_count(); ++a)
        if (table.eliminated_by[a] < 0 && pred(a)) table.eliminated_by[a] = fact_index;
}

void apply_fact(AtomTable& table, const IEProblem& p, int fact_index) {
    const Fact& f = p.facts[fact_index];
    switch (f.kind) {
        case Fact::Kind::subset_event: {
            uint32_t e1 = event_mask_of(p, {f.events[0]}, "subset_event");
            uint32_t e2 = event_mask_of(p, {f.events[1]}, "subset_event");
            eliminate_if(table, p, fact_index, [&](size_t a) {
                uint32_t ev = p.event_part(a);
                return (ev & e1) && !(ev & e2);
            });
            break;
        }
        case Fact::Kind::disjoint_events: {
            uint32_t both = event_mask_of(p, f.events, "disjoint_events");
            eliminate_if(table, p, fact_index, [&](size_t a) {
                return (p.event_part(a) & both) == both;
            });
            break;
        }
        case Fact::Kind::function_of: {
            uint32_t targets = rv_mask_of(p, f.targets, "function_of");
            uint32_t given = rv_mask_of(p, f.given, "function_of");
            uint32_t ctx = event_mask_of(p, f.context, "function_of");
            eliminate_if(table, p, fact_index, [&](size_t a) {
                uint32_t s = p.rv_part(a);
                return (s & targets) && !(s & given) && (p.event_part(a) & ctx) == ctx;
            });
            break;
        }
        case Fact::Kind::refines: {
            uint32_t x = rv_mask_of(p, {f.rv}, "refines");
            uint32_t es = event_mask_of(p, f.events, "refines");
            uint32_t within = event_mask_of(p, {f.within}, "refines");
            eliminate_if(table, p, fact_index, [&](size_t a) {
                uint32_t ev = p.event_part(a);
                return (ev & within) && !(p.rv_part(a) & x) && !(ev & es);
            });
            break;
        }
        case Fact::Kind::induces_partition: {
            uint32_t x = rv_mask_of(p, {f.rv}, "induces_partition");
            uint32_t es = event_mask_of(p, f.events, "induces_partition");
            // The variable's set is disjoint from each level set, the level
            // sets are pairwise disjoint, and together they cover everything.
            eliminate_if(table, p, fact_index, [&](size_t a) {
                uint32_t s = p.rv_part(a);
                uint32_t ev_in = p.event_part(a) & es;
                if ((s & x) && ev_in) return true;
                if (std::popcount(ev_in) >= 2) return true;
                if (!(s & x) && !ev_in) return true;  // outer region is covered
                return false;
            });
            break;
        }
        case Fact::Kind::zero_quantity:
            break;
    }
}

}  // namespace

AtomTable apply_structural_rules(const IEProblem& p) {
    AtomTable table;
    table.atoms = p.atom_count();
    table.eliminated_by.assign(table.atoms, -1);
    for (size_t i = 0; i < p.facts.size(); ++i) apply_fact(table, p, static_cast<int>(i));
    return table;
}

// ---- constraints -----------------------------------------------------------

namespace {

LinearExpr projected_expr(const IEProblem& p, const AtomTable& table, auto&& coef_of) {
    LinearExpr e;
    e.coef.assign(p.atom_count(), Rational(0));
    for (size_t a = 0; a < p.atom_count(); ++a)
        if (table.live(a)) e.coef[a] = coef_of(a);
    return e;
}

std::string context_label(const IEProblem& p, uint32_t ctx) {
    if (!ctx) return "";
    std::vector<std::string> names;
    for (int j = 0; j < p.m(); ++j)
        if ((ctx >> j) & 1u) names.push_back(p.event_names[j]);
    return ", @" + join(names, ", @");
}

}  // namespace

std::vector<Constraint> generate_constraints(const IEProblem& p, const AtomTable& table) {
    std::vector<Constraint> out;

    // B1: the total measure vanishes.
    {
        Constraint c;
        c.kind = Constraint::Kind::eq;
        c.expr = projected_expr(p, table, [](size_t) { return Rational(1); });
        c.label = "B1: sum of all cells = 0";
        out.push_back(std::move(c));
    }

    // B2: every event intersection has nonpositive measure. Stored negated so
    // every inequality constraint reads `expr >= 0`.
    for (uint32_t s0 = 1; s0 < (1u << p.m()); ++s0) {
        Constraint c;
        c.kind = Constraint::Kind::ge;
        c.expr = projected_expr(p, table, [&](size_t a) {
            return (p.event_part(a) & s0) == s0 ? Rational(-1) : Rational(0);
        });
        std::vector<std::string> names;
        for (int j = 0; j < p.m(); ++j)
            if ((s0 >> j) & 1u) names.push_back(p.event_names[j]);
        c.label = "B2: m(" + join(names, " & ") + ") <= 0";
        out.push_back(std::move(c));
    }

    // B3, elemental entropy family crossed with event contexts:
    // H(X_i | all other variables, @ctx) >= 0.
    for (int i = 0; i < p.n(); ++i) {
        for (uint32_t ctx = 0; ctx < (1u << p.m()); ++ctx) {
            Constraint c;
            c.kind = Constraint::Kind::ge;
            c.expr = projected_expr(p, table, [&](size_t a) {
                return (p.rv_part(a) == (1u << i)) && (p.event_part(a) & ctx) == ctx
                           ? Rational(1)
                           : Rational(0);
            });
            c.label = "B3: H(" + p.rv_names[i] + " | rest" + context_label(p, ctx) + ") >= 0";
            out.push_back(std::move(c));
        }
    }

    // B3, elemental pairwise information family: I(X_i; X_j | X_K, @ctx) >= 0
    // for every K among the other variables and every event context.
    for (int i = 0; i < p.n(); ++i) {
        for (int j = i + 1; j < p.n(); ++j) {
            uint32_t pair = (1u << i) | (1u << j);
            uint32_t rest = ((1u << p.n()) - 1) & ~pair;
            uint32_t k = 0;
            while (true) {
                for (uint32_t ctx = 0; ctx < (1u << p.m()); ++ctx) {
                    Constraint c;
                    c.kind = Constraint::Kind::ge;
                    c.expr = projected_expr(p, table, [&](size_t a) {
                        uint32_t s = p.rv_part(a);
                        return (s & pair) == pair && !(s & k) &&
                                       (p.event_part(a) & ctx) == ctx
                                   ? Rational(1)
                                   : Rational(0);
                    });
                    std::vector<std::string> knames;
                    for (int b = 0; b < p.n(); ++b)
                        if ((k >> b) & 1u) knames.push_back(p.rv_names[b]);
                    c.label = "B3: I(" + p.rv_names[i] + "; " + p.rv_names[j] +
                              (knames.empty() ? "" : " | " + join(knames, ", ")) +
                              context_label(p, ctx) + ") >= 0";
                    out.push_back(std::move(c));
                }
                if (k == rest) break;
                k = (k - rest) & rest;  // next submask of rest, ascending
            }
        }
    }

    // Given equalities.
    for (size_t fi = 0; fi < p.facts.size(); ++fi) {
        const Fact& f = p.facts[fi];
        if (f.kind != Fact::Kind::zero_quantity) continue;
        LinearExpr e = expr_to_linear(f.expr, p);
        if (e.constant != 0)
            throw ParseError("zero_quantity fact must not have a constant term: " + f.expr_text);
        Constraint c;
        c.kind = Constraint::Kind::eq;
        c.expr = projected_expr(p, table, [&](size_t a) { return e.coef[a]; });
        c.label = "given: " + f.expr_text + " = 0";
        out.push_back(std::move(c));
    }
    return out;
}

// ---- proving ---------------------------------------------------------------

namespace {

struct LpSetup {
    std::vector<size_t> live;                        // live atom ids
    std::vector<std::vector<Rational>> columns;      // per LP column
    std::vector<std::pair<size_t, int>> column_map;  // constraint index, sign
};

LpSetup build_columns(const IEProblem& p, const AtomTable& table,
                      const std::vector<Constraint>& constraints) {
    LpSetup setup;
    for (size_t a = 0; a < p.atom_count(); ++a)
        if (table.live(a)) setup.live.push_back(a);
    for (size_t ci = 0; ci < constraints.size(); ++ci) {
        std::vector<Rational> col(setup.live.size());
        for (size_t r = 0; r < setup.live.size(); ++r)
            col[r] = constraints[ci].expr.coef[setup.live[r]];
        if (constraints[ci].kind == Constraint::Kind::ge) {
            setup.columns.push_back(col);
            setup.column_map.emplace_back(ci, +1);
        } else {
            setup.columns.push_back(col);
            setup.column_map.emplace_back(ci, +1);
            for (auto& v : col) v = -v;
            setup.columns.push_back(std::move(col));
            setup.column_map.emplace_back(ci, -1);
        }
    }
    return setup;
}

// Tries to certify goal_coef . x >= 0 for every feasible x. On success fills
// the per-constraint multipliers; on failure returns the violating ray.
bool certify_direction(const LpSetup& setup, const std::vector<Constraint>& constraints,
                       const std::vector<Rational>& goal_coef,
                       std::vector<Rational>& multipliers_out,
                       std::vector<Rational>& ray_out) {
    std::vector<Rational> rhs(setup.live.size());
    for (size_t r = 0; r < setup.live.size(); ++r) rhs[r] = goal_coef[r];
    FeasibilityResult res = solve_equality_feasibility(setup.columns, rhs);
    if (res.feasible) {
        multipliers_out.assign(constraints.size(), Rational(0));
        for (size_t j = 0; j < setup.columns.size(); ++j) {
            auto [ci, sign] = setup.column_map[j];
            multipliers_out[ci] += sign * res.solution[j];
        }
        return true;
    }
    ray_out.resize(setup.live.size());
    for (size_t r = 0; r < setup.live.size(); ++r) ray_out[r] = -res.farkas[r];
    return false;
}

void normalize_integer(std::vector<Rational>& v) {
    BigInt lcm = 1, gcd = 0;
    for (const Rational& r : v) {
        if (r == 0) continue;
        lcm = boost::multiprecision::lcm(lcm, denominator(r));
    }
    for (Rational& r : v) r *= lcm;
    for (const Rational& r : v) {
        if (r == 0) continue;
        gcd = boost::multiprecision::gcd(gcd, numerator(r));
    }
    if (gcd > 1)
        for (Rational& r : v) r /= gcd;
}

Rational dot_live(const std::vector<Rational>& coef_by_atom, const std::vector<size_t>& live,
                  const std::vector<Rational>& x_by_row) {
    Rational s = 0;
    for (size_t r = 0; r < live.size(); ++r) s += coef_by_atom[live[r]] * x_by_row[r];
    return s;
}

}  // namespace

ProofResult prove(const IEProblem& p) {
    AtomTable table = apply_structural_rules(p);
    std::vector<Constraint> constraints = generate_constraints(p, table);
    LpSetup setup = build_columns(p, table, constraints);

    LinearExpr lhs = expr_to_linear(p.goal.lhs, p);
    LinearExpr rhs = expr_to_linear(p.goal.rhs, p);
    std::vector<Rational> g(p.atom_count());
    for (size_t a = 0; a < p.atom_count(); ++a)
        g[a] = table.live(a) ? lhs.coef[a] - rhs.coef[a] : Rational(0);
    Rational k = lhs.constant - rhs.constant;  // goal reads: g . x + k  REL  0

    ProofResult result;
    auto fail_constant = [&](const std::string& why) {
        result.proved = false;
        result.witness.assign(p.atom_count(), Rational(0));
        result.explanation = why + " (the all-zero assignment violates the goal)";
        return result;
    };

    // Directions to certify: ge needs g, le needs -g, eq needs both.
    std::vector<Relation> directions;
    if (p.goal.rel == Relation::ge) {
        if (k < 0) return fail_constant("constant term is negative");
        directions = {Relation::ge};
    } else if (p.goal.rel == Relation::le) {
        if (k > 0) return fail_constant("constant term is positive");
        directions = {Relation::le};
    } else {
        if (k != 0) return fail_constant("constant term is nonzero");
        directions = {Relation::ge, Relation::le};
    }

    for (Relation dir : directions) {
        std::vector<Rational> goal_rows(setup.live.size());
        for (size_t r = 0; r < setup.live.size(); ++r) {
            goal_rows[r] = g[setup.live[r]];
            if (dir == Relation::le) goal_rows[r] = -goal_rows[r];
        }
        ProofCertificate cert;
        cert.direction = dir;
        std::vector<Rational> ray;
        if (certify_direction(setup, constraints, goal_rows, cert.multipliers, ray)) {
            result.certificates.push_back(std::move(cert));
            continue;
        }
        // Not implied: turn the ray into a witness. With a zero constant the
        // raw ray already violates the goal; otherwise rescale it so the
        // violation survives the constant offset.
        normalize_integer(ray);
        if (k != 0) {
            Rational slack = dot_live(g, setup.live, ray);  // < 0 for ge, > 0 for le
            Rational target = (dir == Relation::ge) ? Rational(-(k + 1)) : Rational(1 - k);
            for (Rational& r : ray) r *= target / slack;
        }
        result.proved = false;
        result.witness.assign(p.atom_count(), Rational(0));
        for (size_t r = 0; r < setup.live.size(); ++r) result.witness[setup.live[r]] = ray[r];
        // The witness must satisfy every constraint and break the goal; this
        // is cheap enough to check unconditionally.
        for (const Constraint& c : constraints) {
            Rational v = 0;
            for (size_t a = 0; a < p.atom_count(); ++a) v += c.expr.coef[a] * result.witness[a];
            if ((c.kind == Constraint::Kind::eq && v != 0) ||
                (c.kind == Constraint::Kind::ge && v < 0))
                throw std::logic_error("witness fails a constraint: " + c.label);
        }
        {
            Rational v = k;
            for (size_t a = 0; a < p.atom_count(); ++a) v += g[a] * result.witness[a];
            bool violated = (p.goal.rel == Relation::ge && v < 0) ||
                            (p.goal.rel == Relation::le && v > 0) ||
                            (p.goal.rel == Relation::eq && v != 0);
            if (!violated) throw std::logic_error("witness does not violate the goal");
        }
        result.explanation =
            "not implied by the Shannon-type and event constraints (a feasible cell "
            "assignment violates the goal)";
        result.certificates.clear();
        return result;
    }
    result.proved = true;
    return result;
}

bool verify_certificate(const IEProblem& p, const ProofResult& result) {
    if (!result.proved) return false;
    AtomTable table = apply_structural_rules(p);
    std::vector<Constraint> constraints = generate_constraints(p, table);

    LinearExpr lhs = expr_to_linear(p.goal.lhs, p);
    LinearExpr rhs = expr_to_linear(p.goal.rhs, p);
    Rational k = lhs.constant - rhs.constant;

    std::vector<Relation> needed;
    if (p.goal.rel == Relation::ge) {
        if (k < 0) return false;
        needed = {Relation::ge};
    } else if (p.goal.rel == Relation::le) {
        if (k > 0) return false;
        needed = {Relation::le};
    } else {
        if (k != 0) return false;
        needed = {Relation::ge, Relation::le};
    }

    for (Relation dir : needed) {
        const ProofCertificate* cert = nullptr;
        for (const auto& c : result.certificates)
            if (c.direction == dir) cert = &c;
        if (!cert || cert->multipliers.size() != constraints.size()) return false;
        for (size_t ci = 0; ci < constraints.size(); ++ci)
            if (constraints[ci].kind == Constraint::Kind::ge && cert->multipliers[ci] < 0)
                return false;
        // The combination must reproduce the goal direction exactly on every
        // live cell; cell measures are sign-free, so no slack is sound.
        for (size_t a = 0; a < p.atom_count(); ++a) {
            if (!table.live(a)) continue;
            Rational combo = 0;
            for (size_t ci = 0; ci < constraints.size(); ++ci)
                if (cert->multipliers[ci] != 0)
                    combo += cert->multipliers[ci] * constraints[ci].expr.coef[a];
            Rational want = lhs.coef[a] - rhs.coef[a];
            if (dir == Relation::le) want = -want;
            if (combo != want) return false;
        }
    }
    return true;
}

std::string certificate_json(const IEProblem& p, const ProofResult& result) {
    AtomTable table = apply_structural_rules(p);
    std::vector<Constraint> constraints = generate_constraints(p, table);
    json doc;
    doc["goal"] = p.goal_text;
    doc["proved"] = result.proved;
    doc["constraints"] = json::array();
    for (size_t ci = 0; ci < constraints.size(); ++ci) {
        json c;
        c["index"] = ci;
        c["kind"] = constraints[ci].kind == Constraint::Kind::eq ? "=" : ">=";
        c["label"] = constraints[ci].label;
        doc["constraints"].push_back(std::move(c));
    }
    if (result.proved) {
        doc["certificates"] = json::array();
        for (const auto& cert : result.certificates) {
            json cj;
            cj["direction"] = cert.direction == Relation::ge ? ">=" : "<=";
            cj["multipliers"] = json::array();
            for (size_t ci = 0; ci < cert.multipliers.size(); ++ci) {
                if (cert.multipliers[ci] == 0) continue;
                json mj;
                mj["constraint"] = ci;
                mj["value"] = rational_to_string(cert.multipliers[ci]);
                cj["multipliers"].push_back(std::move(mj));
            }
            doc["certificates"].push_back(std::move(cj));
        }
    } else {
        doc["witness"] = json::array();
        for (size_t a = 0; a < result.witness.size(); ++a) {
            if (result.witness[a] == 0) continue;
            json wj;
            wj["atom"] = a;
            wj["cell"] = atom_description(p, a);
            wj["value"] = rational_to_string(result.witness[a]);
            doc["witness"].push_back(std::move(wj));
        }
        doc["note"] = result.explanation;
    }
    return doc.dump(2);
}

// ---- numeric check ---------------------------------------------------------

namespace {

void check_fact_on_binding(const Fact& f, const SpaceBundle& b, double tol) {
    const auto& sp = b.space;
    uint32_t supp = sp->support_mask();
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("binding violates " + f.describe() + ": " + why);
    };
    switch (f.kind) {
        case Fact::Kind::subset_event: {
            const Event& e1 = b.event(f.events[0]);
            const Event& e2 = b.event(f.events[1]);
            if (e1.members & supp & ~e2.members) fail("subset does not hold on the support");
            break;
        }
        case Fact::Kind::disjoint_events: {
            const Event& e1 = b.event(f.events[0]);
            const Event& e2 = b.event(f.events[1]);
            if (e1.members & e2.members & supp) fail("events overlap on the support");
            break;
        }
        case Fact::Kind::function_of: {
            uint32_t ctx = supp;
            for (const auto& name : f.context) ctx &= b.event(name).members;
            for (int u = 0; u < sp->size(); ++u) {
                if (!((ctx >> u) & 1u)) continue;
                for (int v = 0; v < sp->size(); ++v) {
                    if (!((ctx >> v) & 1u)) continue;
                    bool given_equal = true;
                    for (const auto& gname : f.given)
                        if (b.rv(gname).value(u) != b.rv(gname).value(v)) given_equal = false;
                    if (!given_equal) continue;
                    for (const auto& tname : f.targets)
                        if (b.rv(tname).value(u) != b.rv(tname).value(v))
                            fail("targets are not determined by the given variables");
                }
            }
            break;
        }
        case Fact::Kind::refines: {
            const RandomVariable& x = b.rv(f.rv);
            uint32_t within = b.event(f.within).members & supp;
            for (int u = 0; u < sp->size(); ++u) {
                if (!((within >> u) & 1u)) continue;
                for (int v = 0; v < sp->size(); ++v) {
                    if (!((within >> v) & 1u) || x.value(u) != x.value(v)) continue;
                    bool shared = false;
                    for (const auto& ename : f.events) {
                        const Event& e = b.event(ename);
                        if (e.contains(u) && e.contains(v)) { shared = true; break; }
                    }
                    if (!shared) fail("equal values do not share a listed event");
                }
            }
            break;
        }
        case Fact::Kind::induces_partition: {
            const RandomVariable& x = b.rv(f.rv);
            uint32_t seen = 0;
            for (const auto& ename : f.events) {
                uint32_t mask = b.event(ename).members & supp;
                if (seen & mask) fail("listed events overlap on the support");
                seen |= mask;
            }
            if (seen != supp) fail("listed events do not cover the support");
            for (int u = 0; u < sp->size(); ++u) {
                if (!((supp >> u) & 1u)) continue;
                for (int v = 0; v < sp->size(); ++v) {
                    if (!((supp >> v) & 1u)) continue;
                    bool same_block = false;
                    for (const auto& ename : f.events) {
                        const Event& e = b.event(ename);
                        if (e.contains(u) && e.contains(v)) { same_block = true; break; }
                    }
                    if (same_block != (x.value(u) == x.value(v)))
                        fail("listed events are not the level sets of the variable");
                }
            }
            break;
        }
        case Fact::Kind::zero_quantity: {
            double v = eval_quantity(f.expr, b);
            if (std::abs(v) > tol) fail("quantity is " + std::to_string(v) + ", not 0");
            break;
        }
    }
}

}  // namespace

NumericCheckReport numeric_check(const IEProblem& p, const SpaceBundle& binding, double tol) {
    for (const auto& name : p.rv_names) binding.rv(name);
    for (const auto& name : p.event_names) binding.event(name);
    for (const Fact& f : p.facts) check_fact_on_binding(f, binding, tol);

    std::vector<CanonicalSet> rv_sets, ev_sets;
    for (const auto& name : p.rv_names)
        rv_sets.push_back(CanonicalSet::from_rv(binding.rv(name)));
    for (const auto& name : p.event_names)
        ev_sets.push_back(CanonicalSet::from_event(binding.event(name)));

    AtomTable table = apply_structural_rules(p);
    NumericCheckReport report;
    report.atom_values.resize(p.atom_count());
    report.eliminated_ok = true;
    for (size_t a = 0; a < p.atom_count(); ++a) {
        CanonicalSet cell = CanonicalSet::full_set(binding.space);
        for (int i = 0; i < p.n(); ++i)
            cell = ((p.rv_part(a) >> i) & 1u) ? cell.intersect(rv_sets[i])
                                              : cell.difference(rv_sets[i]);
        for (int j = 0; j < p.m(); ++j)
            cell = ((p.event_part(a) >> j) & 1u) ? cell.intersect(ev_sets[j])
                                                 : cell.difference(ev_sets[j]);
        report.atom_values[a] = measure(cell);
        if (!table.live(a)) {
            report.max_eliminated_abs =
                std::max(report.max_eliminated_abs, std::abs(report.atom_values[a]));
            if (std::abs(report.atom_values[a]) > tol) report.eliminated_ok = false;
        }
    }

    LinearExpr lhs = expr_to_linear(p.goal.lhs, p);
    LinearExpr rhs = expr_to_linear(p.goal.rhs, p);
    report.goal_lhs = to_double(lhs.constant);
    report.goal_rhs = to_double(rhs.constant);
    for (size_t a = 0; a < p.atom_count(); ++a) {
        report.goal_lhs += to_double(lhs.coef[a]) * report.atom_values[a];
        report.goal_rhs += to_double(rhs.coef[a]) * report.atom_values[a];
    }
    switch (p.goal.rel) {
        case Relation::le: report.goal_ok = report.goal_lhs <= report.goal_rhs + tol; break;
        case Relation::ge: report.goal_ok = report.goal_lhs + tol >= report.goal_rhs; break;
        case Relation::eq:
            report.goal_ok = std::abs(report.goal_lhs - report.goal_rhs) <= tol;
            break;
    }
    return report;
}

// ---- diagrams --------------------------------------------------------------

std::string atom_description(const IEProblem& p, size_t a) {
    std::string label;
    for (int i = 0; i < p.n(); ++i) {
        if (!label.empty()) label += " & ";
        if (!((p.rv_part(a) >> i) & 1u)) label += "~";
        label += "rv(" + p.rv_names[i] + ")";
    }
    for (int j = 0; j < p.m(); ++j) {
        if (!label.empty()) label += " & ";
        if (!((p.event_part(a) >> j) & 1u)) label += "~";
        label += "ev(" + p.event_names[j] + ")";
    }
    return label;
}

namespace {

std::string name_set(const std::vector<std::string>& names, uint32_t mask) {
    std::vector<std::string> chosen;
    for (size_t i = 0; i < names.size(); ++i)
        if ((mask >> i) & 1u) chosen.push_back(names[i]);
    return chosen.empty() ? "-" : join(chosen, ",");
}

}  // namespace

std::string diagram_tsv(const IEProblem& p, const AtomTable& table) {
    std::ostringstream out;
    out << "atom\trvs\tevents\tstatus\tlabel\n";
    for (size_t a = 0; a < p.atom_count(); ++a) {
        out << a << '\t' << name_set(p.rv_names, p.rv_part(a)) << '\t'
            << name_set(p.event_names, p.event_part(a)) << '\t';
        if (table.live(a)) out << "live";
        else out << "eliminated[" << p.facts[table.eliminated_by[a]].describe() << "]";
        out << '\t' << atom_description(p, a) << '\n';
    }
    return out.str();
}

std::string diagram_dot(const IEProblem& p, const AtomTable& table) {
    // Event-structure facts (partitions, subsets, disjointness) define the
    // row layout and their eliminated regions are not drawn; function_of
    // eliminations remain visible as cells pinned to zero, matching how the
    // diagrams are usually presented.
    auto drawn = [&](size_t a) {
        if (table.live(a)) return true;
        return p.facts[table.eliminated_by[a]].kind == Fact::Kind::function_of;
    };
    std::ostringstream out;
    out << "graph information_event_diagram {\n";
    out << "  node [shape=box, fontname=\"monospace\"];\n";
    // One cluster per event cell, mirroring the row layout of the diagrams.
    for (uint32_t ev = 0; ev < (1u << p.m()); ++ev) {
        bool any = false;
        for (size_t a = 0; a < p.atom_count(); ++a)
            if (p.event_part(a) == ev && drawn(a)) any = true;
        if (!any) continue;
        out << "  subgraph cluster_ev" << ev << " {\n";
        out << "    label=\"events: " << name_set(p.event_names, ev) << "\";\n";
        for (size_t a = 0; a < p.atom_count(); ++a) {
            if (p.event_part(a) != ev || !drawn(a)) continue;
            out << "    atom" << a << " [label=\"" << name_set(p.rv_names, p.rv_part(a));
            if (!table.live(a)) out << " = 0";
            out << "\"";
            if (!table.live(a)) out << ", style=dashed";
            out << "];\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace gim

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gim/errors.hpp"
#include "gim/measure.hpp"
#include "gim/oracle_eval.hpp"
#include "gim/prover.hpp"
#include "gim/sim.hpp"
#include "gim/space_io.hpp"

namespace {

// Exit codes are a stable contract: 0 ok/proved, 1 not provable or check
// failed, 2 usage/parse error, 3 guard violation, 4 divergent measure.
constexpr int kExitOk = 0;
constexpr int kExitNotProved = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitDivergent = 4;

struct Options {
    std::string base = "e";
    uint64_t seed = 1;
    long trials = 100000;
    double tol = 1e-9;
    int max_omega = 12;

    double display(double nats) const {
        gim::MeasureValue v{nats};
        return base == "2" ? v.bits() : v.nats;
    }
    const char* unit() const { return base == "2" ? "bits" : "nats"; }
    gim::MeasureOptions measure_opts() const { return gim::MeasureOptions{max_omega}; }
};

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

int cmd_measure(const Options& opt, const std::string& space_file, const std::string& expr_text,
                bool mc, const std::string& mode_name) {
    gim::SpaceBundle bundle = gim::load_space_bundle(space_file);
    gim::SetExprPtr expr = gim::parse_set_expr(expr_text);
    gim::CanonicalSet set = gim::build_set(*expr, bundle);
    double exact = gim::measure(set, opt.measure_opts());
    std::cout << "measure = " << fmt9(opt.display(exact)) << " " << opt.unit() << "\n";
    if (mc) {
        gim::EstimateMode mode = mode_name == "harmonic" ? gim::EstimateMode::harmonic
                                                         : gim::EstimateMode::poisson;
        gim::Estimate est = gim::estimate(set, mode, opt.trials, opt.seed);
        double sigmas = est.std_error > 0 ? std::abs(exact - est.mean) / est.std_error : 0.0;
        std::cout << "mc: mean = " << fmt9(opt.display(est.mean))
                  << " stderr = " << fmt9(opt.display(est.std_error)) << " trials = " << est.n_trials
                  << " seed = " << est.seed << " mode = " << mode_name
                  << " sigmas = " << fmt9(sigmas) << "\n";
    }
    return kExitOk;
}

int cmd_check(const Options& opt, const std::string& space_file, const std::string& relation_text) {
    gim::SpaceBundle bundle = gim::load_space_bundle(space_file);
    gim::QuantityRelation rel = gim::parse_quantity_relation(relation_text);
    gim::CheckResult r = gim::check_relation(rel, bundle, opt.tol, opt.measure_opts());
    std::cout << "lhs = " << fmt9(opt.display(r.lhs)) << " " << opt.unit() << "\n";
    std::cout << "rhs = " << fmt9(opt.display(r.rhs)) << " " << opt.unit() << "\n";
    std::cout << "residual = " << fmt9(opt.display(r.residual())) << " " << opt.unit() << "\n";
    if (r.pass) {
        std::cout << "PASS\n";
        return kExitOk;
    }
    std::cout << "FAIL\n";
    return kExitNotProved;
}

int cmd_prove(const Options&, const std::string& problem_file, const std::string& cert_path) {
    gim::IEProblem problem = gim::load_problem(problem_file);
    if (problem.m() > 0)
        std::cout << "note: quantities with an event context denote measures and carry the"
                     " implicit P(E) factor\n";
    gim::ProofResult result = gim::prove(problem);
    gim::AtomTable table = gim::apply_structural_rules(problem);
    if (!cert_path.empty()) {
        std::ofstream out(cert_path);
        if (!out) throw gim::ParseError("cannot write certificate file '" + cert_path + "'");
        out << gim::certificate_json(problem, result) << "\n";
    }
    if (result.proved) {
        if (!gim::verify_certificate(problem, result))
            throw std::logic_error("internal error: produced certificate fails verification");
        std::cout << "Proved: " << problem.goal_text << "\n";
        auto constraints = gim::generate_constraints(problem, table);
        for (const auto& cert : result.certificates) {
            std::cout << "certificate (" << (cert.direction == gim::Relation::ge ? ">=" : "<=")
                      << " direction):\n";
            for (size_t ci = 0; ci < cert.multipliers.size(); ++ci)
                if (cert.multipliers[ci] != 0)
                    std::cout << "  " << gim::rational_to_string(cert.multipliers[ci]) << " * ["
                              << constraints[ci].label << "]\n";
        }
        return kExitOk;
    }
    std::cout << "NotProvable: " << problem.goal_text << "\n";
    std::cout << result.explanation << "\n";
    std::cout << "witness (nonzero cells):\n";
    for (size_t a = 0; a < result.witness.size(); ++a)
        if (result.witness[a] != 0)
            std::cout << "  " << gim::atom_description(problem, a) << " = "
                      << gim::rational_to_string(result.witness[a]) << "\n";
    return kExitNotProved;
}

int cmd_estimate(const Options& opt, const std::string& space_file, const std::string& expr_text,
                 const std::string& mode_name) {
    gim::SpaceBundle bundle = gim::load_space_bundle(space_file);
    gim::SetExprPtr expr = gim::parse_set_expr(expr_text);
    gim::CanonicalSet set = gim::build_set(*expr, bundle);
    gim::EstimateMode mode =
        mode_name == "harmonic" ? gim::EstimateMode::harmonic : gim::EstimateMode::poisson;
    gim::Estimate est = gim::estimate(set, mode, opt.trials, opt.seed);
    std::cout << "estimate: mean = " << fmt9(opt.display(est.mean))
              << " stderr = " << fmt9(opt.display(est.std_error)) << " trials = " << est.n_trials
              << " seed = " << est.seed << " mode = " << mode_name << " unit = " << opt.unit()
              << "\n";
    return kExitOk;
}

int cmd_diagram(const std::string& problem_file, const std::string& format) {
    gim::IEProblem problem = gim::load_problem(problem_file);
    gim::AtomTable table = gim::apply_structural_rules(problem);
    if (format == "dot") std::cout << gim::diagram_dot(problem, table);
    else std::cout << gim::diagram_tsv(problem, table);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized information measures: exact evaluation, Monte-Carlo estimation,"
                 " and an information-event inequality prover"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--base", opt.base, "output base: e (nats) or 2 (bits)")
        ->check(CLI::IsMember({"e", "2"}));
    app.add_option("--seed", opt.seed, "random seed");
    app.add_option("--trials", opt.trials, "Monte-Carlo trial count")->check(CLI::Range(2l, 100000000l));
    app.add_option("--tol", opt.tol, "numeric tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-omega", opt.max_omega, "outcome-count guard for exact evaluation");

    std::string space_file, expr_text, problem_file;
    std::string mode_name = "poisson";
    std::string cert_path, format = "tsv", relation_text;
    bool mc = false;

    CLI::App* measure = app.add_subcommand("measure", "exact measure of a set expression");
    measure->fallthrough();
    measure->add_option("space", space_file, "space definition file")->required();
    measure->add_option("expr", expr_text, "set expression")->required();
    measure->add_flag("--mc", mc, "also run a Monte-Carlo estimate");
    measure->add_option("--mode", mode_name, "poisson or harmonic")
        ->check(CLI::IsMember({"poisson", "harmonic"}));

    CLI::App* check = app.add_subcommand("check", "numerically verify an identity");
    check->fallthrough();
    check->add_option("space", space_file, "space definition file")->required();
    check->add_option("relation", relation_text, "relation between quantity expressions")->required();

    CLI::App* prove = app.add_subcommand("prove", "prove a goal inequality symbolically");
    prove->fallthrough();
    prove->add_option("problem", problem_file, "problem file")->required();
    prove->add_option("--emit-certificate", cert_path, "write the certificate as JSON");

    CLI::App* estimate = app.add_subcommand("estimate", "Monte-Carlo estimate of a set expression");
    estimate->fallthrough();
    estimate->add_option("space", space_file, "space definition file")->required();
    estimate->add_option("expr", expr_text, "set expression")->required();
    estimate->add_option("--mode", mode_name, "poisson or harmonic")
        ->check(CLI::IsMember({"poisson", "harmonic"}));

    CLI::App* diagram = app.add_subcommand("diagram", "emit the atom table of a problem");
    diagram->fallthrough();
    diagram->add_option("problem", problem_file, "problem file")->required();
    diagram->add_option("--format", format, "tsv or dot")->check(CLI::IsMember({"tsv", "dot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(measure)) return cmd_measure(opt, space_file, expr_text, mc, mode_name);
        if (app.got_subcommand(check)) return cmd_check(opt, space_file, relation_text);
        if (app.got_subcommand(prove)) return cmd_prove(opt, problem_file, cert_path);
        if (app.got_subcommand(estimate)) return cmd_estimate(opt, space_file, expr_text, mode_name);
        if (app.got_subcommand(diagram)) return cmd_diagram(problem_file, format);
    } catch (const gim::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const gim::OmegaGuardExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const gim::DivergentMeasure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergent;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

#include "xphase/report.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "xphase/brackets.hpp"
#include "xphase/dirac.hpp"
#include "xphase/errors.hpp"
#include "xphase/lift.hpp"
#include "xphase/parser.hpp"
#include "xphase/version.hpp"
#include "xphase/wigner.hpp"

namespace xphase {

namespace {

using nlohmann::json;

mpq_class parse_rational_text(const std::string& text) {
    if (auto slash = text.find('/'); slash != std::string::npos) {
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        if (den == 0) throw DomainError("zero denominator in rational literal");
        mpq_class value(num, den);
        value.canonicalize();
        return value;
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        mpz_class num(digits);
        mpz_class den(1);
        for (std::size_t k = 0; k < text.size() - dot - 1; ++k) den *= 10;
        mpq_class value(num, den);
        value.canonicalize();
        return value;
    }
    return mpq_class(mpz_class(text));
}

std::optional<mpq_class> numeric_hbar(const RunConfig& config) {
    if (config.hbar == "symbolic") return std::nullopt;
    mpq_class value = parse_rational_text(config.hbar);
    if (value <= 0) throw DomainError("numeric hbar must be positive");
    return value;
}

std::string poly_str(const Poly& p, const std::optional<mpq_class>& hbar) {
    return hbar ? p.substitute_hbar(*hbar).str() : p.str();
}

std::string rf_str(const RationalFunction& r, const std::optional<mpq_class>& hbar) {
    if (!r.has_context()) return r.str();
    return hbar ? r.substitute_hbar(*hbar).str() : r.str();
}

struct ReportBuilder {
    json doc;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ReportBuilder(const std::string& command, const json& config_echo) {
        doc["schema"] = 1;
        doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
        doc["command"] = command;
        doc["config"] = config_echo;
    }

    Report finish(int exit_code, const std::string& text, const std::string& csv) {
        Report report;
        report.exit_code = exit_code;
        doc["verdicts"]["exit_code"] = exit_code;
        json comparable = doc;
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        doc["timing"] = {{"seconds", seconds}};
        report.json = doc.dump(2) + "\n";
        report.comparable = comparable.dump(2) + "\n";
        report.text = text;
        report.csv = csv;
        return report;
    }
};

json config_echo_common(const RunConfig& config) {
    json j;
    j["n"] = config.n;
    j["hbar"] = config.hbar;
    j["ghosts"] = config.ghosts;
    if (!config.hamiltonian.empty()) j["hamiltonian"] = config.hamiltonian;
    if (config.order) j["order"] = *config.order;
    if (!config.observables.empty()) j["observables"] = config.observables;
    if (config.alternative_start) j["alternative_start"] = true;
    return j;
}

std::string flat_csv(const json& results) {
    std::ostringstream os;
    os << "section,key,value\n";
    for (const auto& [section, body] : results.items()) {
        if (body.is_object()) {
            for (const auto& [key, value] : body.items()) {
                os << section << "," << key << ","
                   << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
            }
        } else {
            os << section << ",," << (body.is_string() ? body.get<std::string>() : body.dump())
               << "\n";
        }
    }
    return os.str();
}

std::string render_text(const std::string& command, const json& results, const json& verdicts) {
    std::ostringstream os;
    os << kToolName << " " << command << "\n";
    std::function<void(const json&, int)> walk = [&](const json& node, int depth) {
        std::string pad(2 * depth, ' ');
        if (node.is_object()) {
            for (const auto& [key, value] : node.items()) {
                if (value.is_object() || value.is_array()) {
                    os << pad << key << ":\n";
                    walk(value, depth + 1);
                } else {
                    os << pad << key << ": "
                       << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
                }
            }
        } else if (node.is_array()) {
            for (const auto& value : node) {
                if (value.is_object() || value.is_array()) {
                    os << pad << "-\n";
                    walk(value, depth + 1);
                } else {
                    os << pad << "- "
                       << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
                }
            }
        }
    };
    walk(results, 1);
    os << "verdicts:\n";
    walk(verdicts, 1);
    return os.str();
}

IterationOptions iteration_options(const RunConfig& config) {
    IterationOptions options;
    options.include_ghosts = config.ghosts;
    options.multipliers_in_hamiltonian = config.alternative_start;
    return options;
}

json analysis_to_json(const ConstraintAnalysis& analysis, const std::optional<mpq_class>& hbar) {
    json j;
    const auto& ctx = analysis.ctx;
    j["h_tilde"] = poly_str(analysis.h_tilde, hbar);
    json constraints = json::array();
    static const char* class_names[] = {"second_class", "first_class", "undetermined"};
    for (std::size_t i = 0; i < analysis.psi.constraints.size(); ++i) {
        const auto& c = analysis.psi.constraints[i];
        json jc;
        jc["stage"] = c.stage;
        jc["index"] = c.index;
        jc["expr"] = poly_str(c.expr, hbar);
        if (i < analysis.psi.classification.size()) {
            jc["class"] = class_names[static_cast<int>(analysis.psi.classification[i])];
        }
        constraints.push_back(std::move(jc));
    }
    j["constraints"] = std::move(constraints);

    json trace = json::array();
    for (const auto& step : analysis.trace) {
        json js;
        js["source_stage"] = step.source_stage;
        js["source_index"] = step.source_index;
        js["candidate"] = poly_str(step.candidate, hbar);
        switch (step.disposition) {
            case IterationStep::Disposition::new_constraint:
                js["disposition"] = "new_constraint";
                break;
            case IterationStep::Disposition::weakly_zero:
                js["disposition"] = "weakly_zero";
                break;
            case IterationStep::Disposition::multiplier_equation:
                js["disposition"] = "multiplier_equation";
                break;
        }
        if (!step.u_coefficients.empty()) {
            json ju;
            for (const auto& [a, coeff] : step.u_coefficients) {
                ju["u_" + std::to_string(a)] = poly_str(coeff, hbar);
            }
            js["u_coefficients"] = std::move(ju);
        }
        if (step.reduction) js["reduction"] = rf_str(*step.reduction, hbar);
        trace.push_back(std::move(js));
    }
    j["iteration_trace"] = std::move(trace);
    j["reached_max_stages"] = analysis.reached_max_stages;

    json cm = json::array();
    for (const auto& row : analysis.c_matrix) {
        json jr = json::array();
        for (const auto& e : row) jr.push_back(poly_str(e, hbar));
        cm.push_back(std::move(jr));
    }
    j["c_matrix"] = std::move(cm);
    if (analysis.c_inverse) {
        json ci = json::array();
        for (const auto& row : *analysis.c_inverse) {
            json jr = json::array();
            for (const auto& e : row) jr.push_back(rf_str(e, hbar));
            ci.push_back(std::move(jr));
        }
        j["c_inverse"] = std::move(ci);
    } else {
        j["c_inverse"] = nullptr;
    }
    j["first_class_present"] = analysis.first_class_present;

    json mult;
    json values;
    for (const auto& [a, value] : analysis.multipliers.values) {
        values["u_" + std::to_string(a)] = rf_str(value, hbar);
    }
    mult["values"] = std::move(values);
    mult["undetermined"] = analysis.multipliers.undetermined;
    mult["consistent"] = analysis.multipliers.consistent;
    j["multipliers"] = std::move(mult);

    json surface;
    for (const auto& [slot, value] : analysis.surface) {
        Variable v = ctx->variable_at_slot(slot);
        surface[ctx->name(v)] = rf_str(value, hbar);
    }
    j["surface_solution"] = std::move(surface);
    if (!analysis.unresolved_relations.empty()) {
        json un = json::array();
        for (const auto& rel : analysis.unresolved_relations) un.push_back(poly_str(rel, hbar));
        j["unresolved_relations"] = std::move(un);
    }
    return j;
}

json evolution_to_json(const EvolutionResult& ev, const std::optional<mpq_class>& hbar) {
    json j;
    j["raw"] = rf_str(ev.raw, hbar);
    j["reduced"] = rf_str(ev.reduced, hbar);
    j["observable"] = rf_str(ev.observable, hbar);
    j["residual"] = rf_str(ev.residual, hbar);
    j["h_tilde_total_equivalent"] = ev.total_matches_h_tilde;
    return j;
}

}  // namespace

void RunConfig::validate() const {
    if (n < 1) throw DomainError("n must be >= 1");
    if (format != "json" && format != "text" && format != "csv") {
        throw DomainError("format must be json, text, or csv");
    }
    if (hbar != "symbolic") {
        mpq_class v = parse_rational_text(hbar);
        if (v <= 0) throw DomainError("numeric hbar must be positive");
    }
    if (order && *order < 0) throw DomainError("order must be >= 0");
    if (level < 0) throw DomainError("level must be >= 0");
    if (grid_hbar <= 0) throw DomainError("grid hbar must be positive");
    if (nq < 8 || np < 8) throw DomainError("grid sizes must be at least 8");
}

Report cmd_bracket(const std::string& kind, const std::string& f, const std::string& g,
                   const RunConfig& config) {
    config.validate();
    auto ctx = SymplecticContext::standard(config.n);
    json echo = config_echo_common(config);
    echo["kind"] = kind;
    echo["f"] = f;
    echo["g"] = g;
    ReportBuilder builder("bracket", echo);

    Poly pf = parse(f, ctx);
    Poly pg = parse(g, ctx);
    Poly result;
    if (kind == "pb") {
        result = pb(pf, pg);
    } else if (kind == "epb") {
        result = epb(pf, pg);
    } else if (kind == "moyal") {
        result = moyal(pf, pg, config.order);
    } else {
        throw DomainError("bracket kind must be pb, epb, or moyal");
    }
    auto hbar = numeric_hbar(config);
    json results;
    results["bracket"] = poly_str(result, hbar);
    builder.doc["results"] = results;
    builder.doc["verdicts"] = json::object();
    return builder.finish(kExitOk, render_text("bracket", results, builder.doc["verdicts"]),
                          flat_csv(results));
}

Report cmd_lift(const RunConfig& config) {
    config.validate();
    auto ctx = SymplecticContext::standard(config.n);
    ReportBuilder builder("lift", config_echo_common(config));
    Poly h = parse(config.hamiltonian, ctx);
    auto hbar = numeric_hbar(config);

    json results;
    results["hamiltonian"] = poly_str(h, hbar);
    json hvf = json::array();
    for (const auto& comp : hamiltonian_vector_field(h)) hvf.push_back(poly_str(comp, hbar));
    results["hamiltonian_vector_field"] = std::move(hvf);
    results["h_tilde"] = poly_str(lift_classical(h, config.ghosts), hbar);
    if (config.order) {
        LiftSeries series = lift_moyal(h, *config.order);
        json corrections = json::array();
        for (const auto& corr : series.corrections) {
            json jc;
            jc["j"] = corr.j;
            jc["coefficient"] = corr.coefficient.str();
            jc["term"] = poly_str(corr.term, hbar);
            corrections.push_back(std::move(jc));
        }
        results["series_corrections"] = std::move(corrections);
        results["series_polynomial"] = poly_str(series.to_polynomial(), hbar);
    }
    builder.doc["results"] = results;
    builder.doc["verdicts"] = json::object();
    return builder.finish(kExitOk, render_text("lift", results, builder.doc["verdicts"]),
                          flat_csv(results));
}

Report cmd_dirac(const RunConfig& config) {
    config.validate();
    auto ctx = SymplecticContext::standard(config.n);
    ReportBuilder builder("dirac", config_echo_common(config));
    Poly h = parse(config.hamiltonian, ctx);
    auto hbar = numeric_hbar(config);

    ConstraintAnalysis analysis = consistency_iteration(h, iteration_options(config));
    json results = analysis_to_json(analysis, hbar);

    std::vector<std::string> observables = config.observables;
    if (observables.empty()) observables = {"q", "p"};
    json evolutions;
    bool totals_equal = true;
    for (const auto& text : observables) {
        EvolutionResult ev = constrained_evolution(parse(text, ctx), analysis);
        totals_equal = totals_equal && ev.total_matches_h_tilde;
        evolutions[text] = evolution_to_json(ev, hbar);
    }
    results["evolutions"] = std::move(evolutions);
    builder.doc["results"] = results;

    json verdicts;
    verdicts["first_class_present"] = analysis.first_class_present;
    verdicts["multipliers_consistent"] = analysis.multipliers.consistent;
    verdicts["h_tilde_total_equivalent"] = totals_equal;
    if (config.alternative_start) {
        // starting from H + xi_a Phi^a leads to the same consistency
        // conditions; equality of the edb evolutions is the recorded check
        verdicts["alternative_start_evolution_unchanged"] = totals_equal;
    }
    verdicts["terminated"] = !analysis.reached_max_stages;
    builder.doc["verdicts"] = verdicts;

    int exit_code = analysis.reached_max_stages ? kExitError : kExitOk;
    return builder.finish(exit_code, render_text("dirac", results, verdicts), flat_csv(results));
}

Report cmd_compare(const RunConfig& config) {
    config.validate();
    auto ctx = SymplecticContext::standard(config.n);
    ReportBuilder builder("compare", config_echo_common(config));
    Poly h = parse(config.hamiltonian, ctx);
    auto hbar = numeric_hbar(config);

    ConstraintAnalysis analysis = consistency_iteration(h, iteration_options(config));
    std::vector<std::string> observables = config.observables;
    if (observables.empty()) observables = {"q", "p"};

    json results;
    results["constraints"] = analysis_to_json(analysis, hbar)["constraints"];
    json comparisons;
    bool all_equal = true;
    for (const auto& text : observables) {
        Poly f = parse(text, ctx);
        EvolutionResult ev = constrained_evolution(f, analysis);
        Poly flow = moyal(f, h, config.order);
        RationalFunction difference = ev.observable - RationalFunction(flow);
        bool equal = difference.is_zero();
        all_equal = all_equal && equal;
        json jc;
        jc["constrained"] = evolution_to_json(ev, hbar);
        jc["moyal"] = poly_str(flow, hbar);
        jc["difference"] = rf_str(difference, hbar);
        jc["verdict"] = equal ? "equal" : "different";
        comparisons[text] = std::move(jc);
    }
    results["comparisons"] = std::move(comparisons);
    builder.doc["results"] = results;

    json verdicts;
    verdicts["all_equal"] = all_equal;
    builder.doc["verdicts"] = verdicts;
    int exit_code = all_equal ? kExitOk : kExitDivergence;
    return builder.finish(exit_code, render_text("compare", results, verdicts), flat_csv(results));
}

Report cmd_coeffs(const RunConfig& config) {
    config.validate();
    auto ctx = SymplecticContext::standard(config.n);
    ReportBuilder builder("coeffs", config_echo_common(config));
    Poly h = parse(config.hamiltonian, ctx);
    int order = config.order.value_or(2);
    int basis_degree = std::max(order + 3, 5);

    std::vector<Poly> basis;
    {
        // all phi-monomials of total degree <= basis_degree
        std::vector<int> exps(ctx->dim(), 0);
        std::function<void(int, int)> build = [&](int slot, int remaining) {
            if (slot == ctx->dim()) {
                Poly m = Poly::constant(ctx, Scalar(1));
                for (int a = 0; a < ctx->dim(); ++a) {
                    for (int k = 0; k < exps[a]; ++k) {
                        m = m * Poly::variable(ctx, {VarKind::Phi, a});
                    }
                }
                basis.push_back(std::move(m));
                return;
            }
            for (int e = 0; e <= remaining; ++e) {
                exps[slot] = e;
                build(slot + 1, remaining - e);
            }
            exps[slot] = 0;
        };
        build(0, basis_degree);
    }

    MatchReport match = match_coefficients(h, order, basis);
    json results;
    results["basis_degree"] = basis_degree;
    results["anchor_liouville"] = match.anchor_holds;
    json orders = json::array();
    for (const auto& m : match.orders) {
        json jm;
        jm["j"] = m.j;
        jm["printed_coefficient"] = m.printed_value.str();
        switch (m.status) {
            case CoefficientMatch::Status::unique:
                jm["status"] = "unique";
                jm["kappa"] = m.kappa->str();
                jm["ratio_to_printed"] = m.ratio_to_printed->str();
                break;
            case CoefficientMatch::Status::vacuous:
                jm["status"] = "vacuously_consistent";
                break;
            case CoefficientMatch::Status::inconsistent:
                jm["status"] = "inconsistent";
                break;
            case CoefficientMatch::Status::underdetermined:
                jm["status"] = "underdetermined";
                break;
        }
        orders.push_back(std::move(jm));
    }
    results["orders"] = std::move(orders);
    results["summary"] = match.summary();
    builder.doc["results"] = results;

    json verdicts;
    verdicts["anchor_liouville"] = match.anchor_holds;
    verdicts["consistent"] = match.consistent;
    builder.doc["verdicts"] = verdicts;
    int exit_code = !match.anchor_holds ? kExitError
                    : (match.consistent ? kExitOk : kExitDivergence);
    return builder.finish(exit_code, render_text("coeffs", results, verdicts), flat_csv(results));
}

Report cmd_wigner(const RunConfig& config) {
    config.validate();
    json echo;
    echo["level"] = config.level;
    echo["hbar"] = config.grid_hbar;
    echo["nq"] = config.nq;
    echo["np"] = config.np;
    if (config.half_width) echo["half_width"] = *config.half_width;
    ReportBuilder builder("wigner", echo);

    HermiteState state{config.level, config.grid_hbar};
    GridWavefunction wf =
        config.half_width ? state.sample(config.nq, *config.half_width) : state.sample(config.nq);
    WignerGrid grid = wigner_transform(wf, config.np, wf.q_min, wf.q_max);
    NormalizationReport norm = check_normalization(grid);
    double marginal = marginal_max_error(grid, wf);
    QuantisationRuleReport rule = quantisation_rule_check(wf, config.np, wf.q_min, wf.q_max);

    const double origin = grid.nearest(0.0, 0.0);
    const double origin_oracle =
        (config.level % 2 ? -1.0 : 1.0) / (std::numbers::pi * config.grid_hbar);

    json results;
    results["l2_norm"] = wf.l2_norm();
    results["boundary_abs"] = wf.boundary_abs();
    results["integral_rho"] = norm.integral;
    results["integral_rho_sq"] = norm.integral_sq;
    results["expected_rho_sq"] = norm.expected_sq;
    results["max_imag_residue"] = grid.max_imag_residue;
    results["marginal_max_error"] = marginal;
    results["origin_value"] = origin;
    results["origin_oracle"] = origin_oracle;
    results["quantisation"] = {{"lhs_identity_error", rule.lhs_identity_error},
                               {"rhs_identity_error", rule.rhs_identity_error},
                               {"mismatch_norm", rule.mismatch_norm},
                               {"a_norm", rule.a_norm},
                               {"mismatch_ratio", rule.mismatch_ratio}};

    json verdicts;
    verdicts["normalized"] = std::abs(norm.integral - 1.0) < 1e-6;
    verdicts["purity"] = std::abs(norm.integral_sq - norm.expected_sq) < 1e-4;
    verdicts["real"] = grid.max_imag_residue < 1e-10;
    verdicts["marginal"] = marginal < 1e-6;
    verdicts["origin_matches_oracle"] = std::abs(origin - origin_oracle) < 1e-3;
    if (config.level % 2) verdicts["origin_negative"] = origin < 0.0;
    verdicts["lhs_identity"] = rule.lhs_identity_error < 1e-6;
    verdicts["rhs_identity"] = rule.rhs_identity_error < 1e-6;
    verdicts["sides_differ"] = rule.mismatch_ratio > 0.1;
    bool pass = true;
    for (const auto& [key, value] : verdicts.items()) {
        if (value.is_boolean()) pass = pass && value.get<bool>();
    }
    builder.doc["results"] = results;
    builder.doc["verdicts"] = verdicts;

    std::ostringstream csv;
    csv << "q,p,rho\n";
    for (int i = 0; i < grid.nq; ++i) {
        for (int j = 0; j < grid.np; ++j) {
            csv << grid.q_at(i) << "," << grid.p_at(j) << "," << grid.at(i, j) << "\n";
        }
    }
    return builder.finish(pass ? kExitOk : kExitError,
                          render_text("wigner", results, verdicts), csv.str());
}

RunConfig config_from_json(const std::string& text) {
    json j = json::parse(text);
    RunConfig config;
    if (j.contains("n")) config.n = j["n"].get<int>();
    if (j.contains("hamiltonian")) config.hamiltonian = j["hamiltonian"].get<std::string>();
    if (j.contains("hbar")) {
        if (j["hbar"].is_string()) {
            config.hbar = j["hbar"].get<std::string>();
        } else {
            config.hbar = j["hbar"].dump();
        }
    }
    if (j.contains("order")) config.order = j["order"].get<int>();
    if (j.contains("ghosts")) config.ghosts = j["ghosts"].get<bool>();
    if (j.contains("observables")) {
        config.observables = j["observables"].get<std::vector<std::string>>();
    }
    if (j.contains("alternative_start")) {
        config.alternative_start = j["alternative_start"].get<bool>();
    }
    if (j.contains("level")) config.level = j["level"].get<int>();
    if (j.contains("grid_hbar")) config.grid_hbar = j["grid_hbar"].get<double>();
    if (j.contains("nq")) config.nq = j["nq"].get<int>();
    if (j.contains("np")) config.np = j["np"].get<int>();
    if (j.contains("half_width")) config.half_width = j["half_width"].get<double>();
    if (j.contains("format")) config.format = j["format"].get<std::string>();
    if (j.contains("out")) config.out = j["out"].get<std::string>();
    config.validate();
    return config;
}

}  // namespace xphase

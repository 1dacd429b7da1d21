#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "xphase/brackets.hpp"
#include "xphase/dirac.hpp"
#include "xphase/errors.hpp"
#include "xphase/lift.hpp"

using namespace xphase;
using xphase::testing::make_rng;
using xphase::testing::phi_monomials;
using xphase::testing::random_poly;

namespace {

ContextPtr ctx1() {
    static ContextPtr ctx = SymplecticContext::standard(1);
    return ctx;
}
Poly P(const char* text) { return parse(text, ctx1()); }

// Independent oracle: the printed stage-1 formula
// theta(a-n) (omega^{ab} dH/dphi^b - hbar omega^{ab} lambda_e omega^{ef} d2H/dphi^b dphi^f)
Poly secondary_formula(const Poly& h, int a) {
    const ContextPtr& ctx = h.context();
    const int d = ctx->dim();
    Poly out(ctx);
    if (a < ctx->n()) return out;
    Poly hbar = Poly::hbar(ctx);
    for (int b = 0; b < d; ++b) {
        const Scalar& w = ctx->omega(a, b);
        if (w.is_zero()) continue;
        out += h.derivative({VarKind::Phi, b}).scaled(w);
        for (int e = 0; e < d; ++e) {
            for (int f = 0; f < d; ++f) {
                const Scalar& w2 = ctx->omega(e, f);
                if (w2.is_zero()) continue;
                Poly second = h.derivative({VarKind::Phi, b}).derivative({VarKind::Phi, f});
                if (second.is_zero()) continue;
                out -= (hbar * Poly::variable(ctx, {VarKind::Lambda, e}) * second)
                           .scaled(w * w2);
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("primary_constraints_examples") {
    ConstraintSet primary = primary_constraints(ctx1());
    REQUIRE(primary.constraints.size() == 1);
    CHECK(primary.constraints[0].expr == P("p - hbar*l_q"));
    CHECK(primary.constraints[0].stage == 0);
    CHECK(primary.constraints[0].index == 1);
    // classical limit hbar -> 0: the constraint surface p = 0
    CHECK(primary.constraints[0].expr.substitute_hbar(mpq_class(0)) == P("p"));

    auto ctx2 = SymplecticContext::standard(2);
    ConstraintSet two = primary_constraints(ctx2);
    REQUIRE(two.constraints.size() == 2);
    CHECK(two.constraints[0].expr == parse("p0 - hbar*l_q0", ctx2));
    CHECK(two.constraints[1].expr == parse("p1 - hbar*l_q1", ctx2));
}

TEST_CASE("consistency_iteration_harmonic_oscillator") {
    ConstraintAnalysis analysis = consistency_iteration(P("1/2*(p^2+q^2)"));
    REQUIRE(analysis.psi.constraints.size() == 2);
    CHECK(analysis.psi.constraints[1].stage == 1);
    CHECK(analysis.psi.constraints[1].expr == P("-q - hbar*l_p"));
    CHECK(!analysis.reached_max_stages);
    // the step after the secondary determines the multiplier
    REQUIRE(analysis.trace.size() == 2);
    CHECK(analysis.trace[1].disposition == IterationStep::Disposition::multiplier_equation);
    REQUIRE(analysis.multipliers.values.count(0) == 1);
    CHECK(analysis.multipliers.values.at(0) ==
          RationalFunction(P("p - hbar*l_q"), P("2*hbar")));
    CHECK(analysis.multipliers.undetermined.empty());
    CHECK(analysis.multipliers.consistent);
}

TEST_CASE("consistency_iteration_quartic_bosonic") {
    ConstraintAnalysis analysis = consistency_iteration(P("1/2*p^2+1/4*q^4"));
    REQUIRE(analysis.psi.constraints.size() == 2);
    CHECK(analysis.psi.constraints[1].expr == P("-q^3 - 3*hbar*q^2*l_p"));
    CHECK(analysis.psi.classification[0] == ConstraintClass::second_class);
    CHECK(analysis.psi.classification[1] == ConstraintClass::second_class);
}

TEST_CASE("consistency_iteration_quartic_surfaces_ghost_bilinears") {
    IterationOptions options;
    options.include_ghosts = true;
    ConstraintAnalysis analysis = consistency_iteration(P("1/2*p^2+1/4*q^4"), options);
    REQUIRE(analysis.psi.constraints.size() == 2);
    Poly secondary = analysis.psi.constraints[1].expr;
    CHECK(secondary.body_part() == P("-q^3 - 3*hbar*q^2*l_p"));
    CHECK(secondary.ghost_part() == P("6*i*q*hbar*c0*cb1"));
    // the bosonic mode omits exactly this term
    ConstraintAnalysis bosonic = consistency_iteration(P("1/2*p^2+1/4*q^4"));
    CHECK(secondary - bosonic.psi.constraints[1].expr == P("6*i*q*hbar*c0*cb1"));
}

TEST_CASE("stage_one_candidates_match_the_printed_formula") {
    auto rng = make_rng(51);
    testing::PolyOptions opt;
    opt.max_degree = 5;
    opt.allow_imaginary = false;
    for (int trial = 0; trial < 20; ++trial) {
        Poly h = random_poly(ctx1(), rng, opt);
        ConstraintAnalysis analysis = consistency_iteration(h);
        REQUIRE(!analysis.trace.empty());
        const auto& step = analysis.trace[0];
        CHECK(step.source_stage == 0);
        CHECK(step.candidate == secondary_formula(h, 1));
    }
    // two degrees of freedom
    auto ctx2 = SymplecticContext::standard(2);
    testing::PolyOptions opt2;
    opt2.max_degree = 4;
    opt2.max_exponent = 2;
    opt2.allow_imaginary = false;
    for (int trial = 0; trial < 5; ++trial) {
        Poly h = random_poly(ctx2, rng, opt2);
        ConstraintAnalysis analysis = consistency_iteration(h);
        for (const auto& step : analysis.trace) {
            if (step.source_stage != 0) continue;
            CHECK(step.candidate == secondary_formula(h, step.source_index));
        }
    }
}

TEST_CASE("constraint_matrix_examples") {
    ConstraintAnalysis ho = consistency_iteration(P("1/2*(p^2+q^2)"));
    CHECK(ho.c_matrix[0][0].is_zero());
    CHECK(ho.c_matrix[0][1] == P("-2*hbar"));
    CHECK(ho.c_matrix[1][0] == P("2*hbar"));
    ConstraintAnalysis quartic = consistency_iteration(P("1/2*p^2+1/4*q^4"));
    CHECK(quartic.c_matrix[0][1] == P("-6*hbar*q^2 - 6*hbar^2*q*l_p"));
    // antisymmetry on random analyses
    auto rng = make_rng(52);
    testing::PolyOptions opt;
    opt.max_degree = 4;
    for (int trial = 0; trial < 10; ++trial) {
        ConstraintAnalysis analysis = consistency_iteration(random_poly(ctx1(), rng, opt));
        const auto& c = analysis.c_matrix;
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = 0; j < c.size(); ++j) {
                CHECK(c[i][j] == -c[j][i]);
            }
        }
    }
}

TEST_CASE("invert_constraint_matrix_examples") {
    ConstraintAnalysis ho = consistency_iteration(P("1/2*(p^2+q^2)"));
    REQUIRE(ho.c_inverse.has_value());
    const auto& inv = *ho.c_inverse;
    CHECK(inv[0][1] == RationalFunction(P("1"), P("2*hbar")));
    CHECK(inv[1][0] == RationalFunction(P("-1"), P("2*hbar")));
    // C * C^{-1} = identity under cross-multiplication
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            RationalFunction acc = RationalFunction::zero(ctx1());
            for (int k = 0; k < 2; ++k) acc += RationalFunction(ho.c_matrix[i][k]) * inv[k][j];
            CHECK(acc == RationalFunction(P(i == j ? "1" : "0")));
        }
    }
    ConstraintAnalysis quartic = consistency_iteration(P("1/2*p^2+1/4*q^4"));
    REQUIRE(quartic.c_inverse.has_value());
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            RationalFunction acc = RationalFunction::zero(ctx1());
            for (int k = 0; k < 2; ++k) {
                acc += RationalFunction(quartic.c_matrix[i][k]) * (*quartic.c_inverse)[k][j];
            }
            CHECK(acc == RationalFunction(P(i == j ? "1" : "0")));
        }
    }
    // singular: first-class diagnostic
    std::vector<std::vector<Poly>> zero(2, std::vector<Poly>(2, Poly::zero(ctx1())));
    CHECK(!invert_constraint_matrix(zero).has_value());
}

TEST_CASE("dirac_bracket_annihilates_constraints") {
    auto rng = make_rng(53);
    for (const char* text : {"1/2*(p^2+q^2)", "1/2*p^2+1/4*q^4"}) {
        ConstraintAnalysis analysis = consistency_iteration(P(text));
        testing::PolyOptions opt;
        opt.lambda = true;
        opt.hbar = true;
        for (int trial = 0; trial < 25; ++trial) {
            Poly f = random_poly(ctx1(), rng, opt);
            for (const auto& cons : analysis.psi.constraints) {
                CHECK(dirac_bracket(cons.expr, f, analysis).is_zero());
                CHECK(dirac_bracket(f, cons.expr, analysis).is_zero());
            }
        }
    }
}

TEST_CASE("dirac_bracket_antisymmetry_and_bilinearity") {
    auto rng = make_rng(54);
    ConstraintAnalysis analysis = consistency_iteration(P("1/2*p^2+1/4*q^4"));
    testing::PolyOptions opt;
    opt.lambda = true;
    for (int trial = 0; trial < 25; ++trial) {
        Poly f = random_poly(ctx1(), rng, opt);
        Poly g = random_poly(ctx1(), rng, opt);
        Poly h = random_poly(ctx1(), rng, opt);
        CHECK(dirac_bracket(f, g, analysis) == -dirac_bracket(g, f, analysis));
        Scalar a = Scalar::rational(3, 2), b = Scalar(-2);
        RationalFunction lhs = dirac_bracket(f.scaled(a) + g.scaled(b), h, analysis);
        RationalFunction rhs = dirac_bracket(f, h, analysis) * RationalFunction(Poly::constant(ctx1(), a)) +
                               dirac_bracket(g, h, analysis) * RationalFunction(Poly::constant(ctx1(), b));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("constraint_preservation_with_solved_multipliers") {
    for (const char* text : {"1/2*(p^2+q^2)", "1/2*p^2+1/4*q^4"}) {
        ConstraintAnalysis analysis = consistency_iteration(P(text));
        const Poly& phi0 = analysis.psi.constraints[0].expr;
        // epb(Phi_0, Htilde_T) = epb(Phi_0, Htilde) + u * epb(Phi_0, Phi_0)
        RationalFunction dot = RationalFunction(epb(phi0, analysis.h_tilde));
        for (const auto& [a, u] : analysis.multipliers.values) {
            dot += u * RationalFunction(epb(phi0, analysis.psi.constraints[a].expr));
        }
        CHECK(substitute(dot, analysis.surface).is_zero());
    }
}

TEST_CASE("constrained_evolution_reproduces_the_flows") {
    ConstraintAnalysis ho = consistency_iteration(P("1/2*(p^2+q^2)"));
    auto ev = [&](const ConstraintAnalysis& analysis, const char* text) {
        return constrained_evolution(P(text), analysis);
    };
    CHECK(ev(ho, "q").observable == RationalFunction(P("p")));
    CHECK(ev(ho, "p").observable == RationalFunction(P("-q")));
    CHECK(ev(ho, "q^2+p^2").observable.is_zero());  // energy conserved
    CHECK(ev(ho, "q*p").observable == RationalFunction(P("p^2 - q^2")));
    CHECK(ev(ho, "q").residual.is_zero());
    CHECK(ev(ho, "q").total_matches_h_tilde);

    ConstraintAnalysis quartic = consistency_iteration(P("1/2*p^2+1/4*q^4"));
    CHECK(ev(quartic, "q").observable == RationalFunction(P("3/2*p")));
    CHECK(ev(quartic, "p").observable == RationalFunction(P("-q^3")));
    CHECK_THROWS_AS(constrained_evolution(P("l_q"), ho), DomainError);
}

TEST_CASE("total_hamiltonian_equals_h_tilde_under_edb") {
    auto rng = make_rng(55);
    for (const char* text : {"1/2*(p^2+q^2)", "1/2*p^2+1/4*q^4"}) {
        ConstraintAnalysis analysis = consistency_iteration(P(text));
        for (int trial = 0; trial < 25; ++trial) {
            Poly f = random_poly(ctx1(), rng);
            // edb(F, Htilde_T) - edb(F, Htilde) = sum_a u_a edb(F, Phi^a) with
            // symbolic u; each edb(F, Phi^a) vanishes identically
            for (const auto& cons : analysis.psi.constraints) {
                if (cons.stage != 0) continue;
                CHECK(dirac_bracket(f, cons.expr, analysis).is_zero());
            }
        }
    }
}

TEST_CASE("compare_evolutions_verdicts") {
    for (const Poly& f : phi_monomials(ctx1(), 4)) {
        ComparisonReport report = compare_evolutions(P("1/2*(p^2+q^2)"), f);
        CHECK(report.equal);
        CHECK(report.difference.is_zero());
    }
    ComparisonReport q_report = compare_evolutions(P("1/2*p^2+1/4*q^4"), P("q"));
    CHECK(!q_report.equal);
    CHECK(q_report.difference == RationalFunction(P("1/2*p")));
    ComparisonReport p_report = compare_evolutions(P("1/2*p^2+1/4*q^4"), P("p"));
    CHECK(p_report.equal);
    CHECK(p_report.difference.is_zero());
}

TEST_CASE("free_particle_is_first_class_but_still_evolves") {
    ConstraintAnalysis analysis = consistency_iteration(P("1/2*p^2"));
    REQUIRE(analysis.psi.constraints.size() == 1);
    CHECK(analysis.first_class_present);
    CHECK(analysis.psi.classification[0] == ConstraintClass::first_class);
    CHECK(!analysis.c_inverse.has_value());
    CHECK(analysis.multipliers.values.empty());
    REQUIRE(analysis.multipliers.undetermined.size() == 1);
    EvolutionResult ev = constrained_evolution(P("q"), analysis);
    CHECK(ev.observable == RationalFunction(P("p")));
    // quadratic Hamiltonian: agreement with the Moyal flow
    ComparisonReport report = compare_evolutions(P("1/2*p^2"), P("q"));
    CHECK(report.equal);
}

TEST_CASE("user_supplied_constraint_hook") {
    IterationOptions options;
    options.extra_primary = {P("q")};
    ConstraintAnalysis analysis = consistency_iteration(P("1/2*(p^2+q^2)"), options);
    REQUIRE(analysis.psi.constraints.size() == 2);
    CHECK(analysis.psi.classification[0] == ConstraintClass::second_class);
    CHECK(analysis.psi.classification[1] == ConstraintClass::second_class);
    // both consistency conditions determine multipliers, so no secondaries
    for (const auto& step : analysis.trace) {
        CHECK(step.disposition == IterationStep::Disposition::multiplier_equation);
    }
    // fully constrained system: observables freeze
    EvolutionResult ev = constrained_evolution(P("q"), analysis);
    CHECK(ev.observable.is_zero());
    CHECK_THROWS_AS(consistency_iteration(P("q"), IterationOptions{.extra_primary = {P("c0")}}),
                    DomainError);
}

TEST_CASE("max_stages_cap_is_reported") {
    IterationOptions options;
    options.max_stages = 0;
    ConstraintAnalysis analysis = consistency_iteration(P("1/2*(p^2+q^2)"), options);
    CHECK(analysis.reached_max_stages);
}

TEST_CASE("alternative_start_leaves_the_evolution_unchanged") {
    IterationOptions standard;
    IterationOptions alternative;
    alternative.multipliers_in_hamiltonian = true;
    ConstraintAnalysis a = consistency_iteration(P("1/2*p^2+1/4*q^4"), standard);
    ConstraintAnalysis b = consistency_iteration(P("1/2*p^2+1/4*q^4"), alternative);
    for (const char* text : {"q", "p", "q*p", "q^2"}) {
        CHECK(constrained_evolution(P(text), a).observable ==
              constrained_evolution(P(text), b).observable);
    }
}

TEST_CASE("weakly_zero_uses_surface_substitution") {
    ConstraintAnalysis analysis = consistency_iteration(P("1/2*(p^2+q^2)"));
    CHECK(is_weakly_zero(P("p - hbar*l_q"), analysis));
    CHECK(is_weakly_zero(P("(q + hbar*l_p)*p"), analysis));
    CHECK(!is_weakly_zero(P("p"), analysis));
    CHECK(reduce_on_surface(P("1/2*p + 1/2*hbar*l_q"), analysis) == RationalFunction(P("p")));
}

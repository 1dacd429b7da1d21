#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xphase/errors.hpp"
#include "xphase/wigner.hpp"

using namespace xphase;

namespace {

double gaussian_rho(double q, double p, double hbar) {
    // closed-form Wigner function of the ground state
    return std::exp(-(q * q + p * p) / hbar) / (std::numbers::pi * hbar);
}

}  // namespace

TEST_CASE("hermite_states_are_normalized_on_the_grid") {
    for (int level : {0, 1, 2}) {
        for (double hbar : {1.0, 0.1}) {
            HermiteState state{level, hbar};
            GridWavefunction wf = state.sample(257);
            CHECK(std::abs(wf.l2_norm() - 1.0) < 1e-8);
            CHECK(wf.boundary_abs() < 1e-10);
        }
    }
}

TEST_CASE("transform_matches_the_gaussian_closed_form") {
    HermiteState state{0, 1.0};
    GridWavefunction wf = state.sample(257);
    WignerGrid grid = wigner_transform(wf);
    double worst = 0.0;
    for (int i = 0; i < grid.nq; i += 8) {
        for (int j = 0; j < grid.np; j += 8) {
            worst = std::max(worst, std::abs(grid.at(i, j) -
                                             gaussian_rho(grid.q_at(i), grid.p_at(j), 1.0)));
        }
    }
    CHECK(worst < 1e-10);
    // positive with the maximum at the origin
    double origin = grid.nearest(0.0, 0.0);
    CHECK(origin > 0.0);
    CHECK(std::abs(origin - 1.0 / std::numbers::pi) < 1e-10);
    CHECK(grid.max_imag_residue < 1e-12);
}

TEST_CASE("first_excited_state_is_negative_at_the_origin") {
    HermiteState state{1, 1.0};
    WignerGrid grid = wigner_transform(state.sample(257));
    double origin = grid.nearest(0.0, 0.0);
    CHECK(origin < 0.0);
    CHECK(std::abs(origin + 1.0 / std::numbers::pi) < 1e-6);
}

TEST_CASE("zero_wavefunction_transforms_to_zero") {
    HermiteState state{0, 1.0};
    GridWavefunction wf = state.sample(129);
    for (auto& v : wf.psi) v = 0.0;
    for (auto& v : wf.dpsi) v = 0.0;
    WignerGrid grid = wigner_transform(wf);
    for (double v : grid.rho) CHECK(v == 0.0);
}

TEST_CASE("boundary_decay_violation_is_an_error") {
    HermiteState state{0, 1.0};
    GridWavefunction wf = state.sample(129, 2.0);  // far too narrow
    CHECK_THROWS_AS(wigner_transform(wf), DomainError);
}

TEST_CASE("normalization_and_purity") {
    for (int level : {0, 1}) {
        for (double hbar : {1.0, 0.1}) {
            HermiteState state{level, hbar};
            WignerGrid grid = wigner_transform(state.sample(257));
            NormalizationReport report = check_normalization(grid);
            CHECK(std::abs(report.integral - 1.0) < 1e-6);
            CHECK(std::abs(report.integral_sq - report.expected_sq) < 1e-4);
            CHECK(report.expected_sq ==
                  doctest::Approx(1.0 / (2 * std::numbers::pi * hbar)).epsilon(1e-12));
        }
    }
}

TEST_CASE("marginal_property_is_an_independent_transform_oracle") {
    for (int level : {0, 1}) {
        HermiteState state{level, 1.0};
        GridWavefunction wf = state.sample(257);
        WignerGrid grid = wigner_transform(wf);
        CHECK(marginal_max_error(grid, wf) < 1e-6);
    }
}

TEST_CASE("grid_convergence_of_reported_integrals") {
    HermiteState state{1, 1.0};
    auto coarse = check_normalization(wigner_transform(state.sample(129)));
    auto fine = check_normalization(wigner_transform(state.sample(257)));
    CHECK(std::abs(coarse.integral - fine.integral) < 1e-5);
    CHECK(std::abs(coarse.integral_sq - fine.integral_sq) < 1e-3);
}

TEST_CASE("quantisation_rule_boundary_integral_identities") {
    HermiteState state{0, 1.0};
    QuantisationRuleReport report = quantisation_rule_check(state.sample(513));
    CHECK(report.lhs_identity_error < 1e-6);
    CHECK(report.rhs_identity_error < 1e-6);
    // the two sides of the rule genuinely differ on Wigner functions
    CHECK(report.mismatch_ratio > 0.1);
    // A is real and B is imaginary, so the mismatch is pythagorean
    CHECK(report.mismatch_norm > report.a_norm);
}

TEST_CASE("quantisation_rule_level_one_still_converges") {
    HermiteState state{1, 1.0};
    QuantisationRuleReport report = quantisation_rule_check(state.sample(513));
    CHECK(report.lhs_identity_error < 1e-6);
    CHECK(report.rhs_identity_error < 1e-5);
    CHECK(report.mismatch_ratio > 0.1);
}

TEST_CASE("multiplication_side_vanishes_on_the_zero_momentum_slice") {
    // for real psi, A = p rho is zero at p = 0 while B = -i hbar d_q rho is not
    HermiteState state{0, 1.0};
    GridWavefunction wf = state.sample(257);
    WignerGrid grid = wigner_transform(wf);
    int jzero = (grid.np - 1) / 2;
    CHECK(std::abs(grid.p_at(jzero)) < 1e-12);
    double b_max = 0.0;
    for (int i = 2; i < grid.nq - 2; ++i) {
        double a = grid.p_at(jzero) * grid.at(i, jzero);
        CHECK(a == 0.0);
        double d = (-grid.at(i + 2, jzero) + 8 * grid.at(i + 1, jzero) -
                    8 * grid.at(i - 1, jzero) + grid.at(i - 2, jzero)) /
                   (12 * grid.dq());
        b_max = std::max(b_max, std::abs(d));
    }
    CHECK(b_max > 0.1);
}

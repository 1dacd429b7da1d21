#pragma once

#include <span>
#include <string>
#include <vector>

#include "xphase/polynomial.hpp"

namespace xphase {

/// Components h^a = omega^{ab} dH/dphi^b of the Hamiltonian vector field.
std::vector<Poly> hamiltonian_vector_field(const Poly& h);

/// Lift to the extended space: lambda_a h^a + i cbar_a (d_b h^a) c^b.
/// The ghost term is omitted when include_ghosts is false.
Poly lift_classical(const Poly& h, bool include_ghosts = true);

/// hbar-corrected lift: base + sum_j coefficient_j hbar^{2j} M_j, where
/// M_j contracts j+2 factors of [lambda_a omega^{ab}] into the (j+2)-th
/// derivatives of H. Default coefficients are 1/(2j+1)!; callers may
/// supply their own (see match_coefficients).
struct LiftSeries {
    struct Correction {
        int j = 0;
        Scalar coefficient;
        Poly term;  // M_j, homogeneous of degree j+2 in lambda, ghost-free
    };
    Poly base;
    std::vector<Correction> corrections;
    int truncation_order = 0;

    Poly to_polynomial() const;
};

LiftSeries lift_moyal(const Poly& h, int order,
                      std::span<const Scalar> coefficients = {});

/// The contraction M_j itself.
Poly moyal_correction_term(const Poly& h, int j);

/// Reads each lambda_a as -i d/dphi^a acting on rho; phi/hbar factors
/// multiply from the left and ghost terms are dropped (bosonic sector).
Poly substitute_operator(const Poly& lifted, const Poly& rho);
Poly substitute_operator(const LiftSeries& series, const Poly& rho);

/// Order-by-order solve for the coefficients kappa_j that make the
/// operator form of base + sum kappa_j hbar^{2j} M_j reproduce the Moyal
/// evolution -i*moyal(rho, H) on every rho of the test basis. The hbar^0
/// layer is anchored to the Liouville operator and checked, not solved.
struct CoefficientMatch {
    enum class Status { unique, vacuous, inconsistent, underdetermined };
    int j = 0;
    Status status = Status::vacuous;
    std::optional<Scalar> kappa;
    Scalar printed_value;  // 1/(2j+1)!
    std::optional<Scalar> ratio_to_printed;
};

struct MatchReport {
    std::vector<CoefficientMatch> orders;
    bool anchor_holds = false;   // hbar^0 layer equals the classical flow
    bool consistent = false;     // no order came back inconsistent
    std::string summary() const;
};

MatchReport match_coefficients(const Poly& h, int order, std::span<const Poly> test_basis);

}  // namespace xphase

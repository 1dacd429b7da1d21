#pragma once

#include <optional>

#include "xphase/polynomial.hpp"

namespace xphase {

/// Which bracket a CLI request refers to. For `moyal`, `order` is the hbar
/// truncation order; only even powers of hbar occur, so the effective
/// truncation is 2*floor(order/2). An absent order means untruncated (the
/// series terminates on polynomials).
struct BracketKind {
    enum class Tag { pb, epb, moyal };
    Tag tag = Tag::pb;
    std::optional<int> order;
};

/// Classical Poisson bracket dF/dphi^a omega^{ab} dG/dphi^b. Inputs must
/// contain only phi (and hbar) unless `treat_extra_as_parameters` is set,
/// in which case lambda/ghost factors ride along as inert coefficients.
Poly pb(const Poly& f, const Poly& g, bool treat_extra_as_parameters = false);

/// Extended Poisson bracket on the full graded space, generated by
/// {phi^a, lambda_b} = delta^a_b and {c^a, cbar_b} = -i delta^a_b and
/// extended by the graded Leibniz rule:
///
///   {F,G} = dF/dphi^a dG/dlambda_a - dF/dlambda_a dG/dphi^a
///           - i [ (F d_r/dc^a)(d_l/dcbar_a G) + (F d_r/dcbar_a)(d_l/dc^a G) ]
///
/// with right derivatives acting on F and left derivatives on G.
Poly epb(const Poly& f, const Poly& g);

/// k-fold Poisson bidifferential
/// P^k(F,G) = d_{a1..ak}F omega^{a1b1}..omega^{akbk} d_{b1..bk}G.
Poly bidifferential_power(const Poly& f, const Poly& g, int k,
                          bool treat_extra_as_parameters = false);

/// Moyal bracket as the terminating sine series
///   sum_j (-1)^j (hbar^2/4)^j / (2j+1)! P^{2j+1}(F,G),
/// truncated at 2*floor(order/2) in hbar when an order is given.
Poly moyal(const Poly& f, const Poly& g, std::optional<int> order = std::nullopt,
           bool treat_extra_as_parameters = false);

}  // namespace xphase

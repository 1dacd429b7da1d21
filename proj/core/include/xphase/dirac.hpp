#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "xphase/rational_function.hpp"

namespace xphase {

/// One constraint with its generation stage (0 = primary) and the phi
/// index a it descends from.
struct Constraint {
    Poly expr;
    int stage = 0;
    int index = 0;
};

enum class ConstraintClass { second_class, first_class, undetermined };

struct ConstraintSet {
    std::vector<Constraint> constraints;
    std::vector<ConstraintClass> classification;  // parallel; filled by the analysis
};

/// Primary constraints Phi^a_(0) = phi^a + hbar omega^{ab} lambda_b for
/// a in [n, 2n); the first n indices produce nothing.
ConstraintSet primary_constraints(const ContextPtr& ctx);

/// Trace entry for one consistency condition.
struct IterationStep {
    enum class Disposition { new_constraint, weakly_zero, multiplier_equation };
    int source_stage = 0;
    int source_index = 0;
    Poly candidate;                       // epb(Phi, Htilde)
    std::map<int, Poly> u_coefficients;   // nonzero epb(Phi, Phi^a_(0)) by primary position
    Disposition disposition = Disposition::weakly_zero;
    std::optional<RationalFunction> reduction;  // on-surface residue behind the decision
};

struct MultiplierEquation {
    std::map<int, Poly> coefficients;  // by primary position
    Poly constant;
};

struct MultiplierSolution {
    std::map<int, RationalFunction> values;  // by primary position
    std::vector<int> undetermined;
    bool consistent = true;
};

struct IterationOptions {
    bool include_ghosts = false;
    int max_stages = 8;
    /// Extension hook: extra user-supplied primary constraints (even
    /// parity) appended to the canonical ones.
    std::vector<Poly> extra_primary;
    /// Alternative starting point: treat the multiplier terms as part of
    /// the input Hamiltonian from the outset. The consistency conditions
    /// coincide, so the analysis records the flag and downstream reports
    /// confirm the evolution is unchanged.
    bool multipliers_in_hamiltonian = false;
};

struct ConstraintAnalysis {
    ContextPtr ctx;
    Poly hamiltonian;
    Poly h_tilde;
    IterationOptions options;

    ConstraintSet psi;
    std::vector<IterationStep> trace;
    bool reached_max_stages = false;

    std::vector<std::vector<Poly>> c_matrix;
    /// Full inverse when C is regular.
    std::optional<std::vector<std::vector<RationalFunction>>> c_inverse;
    bool first_class_present = false;
    /// Indices of constraints entering the Dirac bracket (all of them when
    /// C is regular; the non-central subset otherwise).
    std::vector<int> active;
    std::vector<std::vector<RationalFunction>> active_inverse;

    std::vector<MultiplierEquation> multiplier_equations;
    MultiplierSolution multipliers;

    /// On-surface substitution: lambda slot index -> value over (phi, hbar).
    std::map<int, RationalFunction> surface;
    std::vector<Poly> unresolved_relations;
};

ConstraintAnalysis consistency_iteration(const Poly& hamiltonian,
                                         const IterationOptions& options = {});

/// C_{alpha beta} = epb(Psi_alpha, Psi_beta), exact and antisymmetric.
std::vector<std::vector<Poly>> constraint_matrix(const ConstraintSet& psi, const ContextPtr& ctx);

/// Adjugate/determinant inverse over the commuting subring (nilpotent
/// ghost parts handled by a terminating series). nullopt when det has no
/// invertible body: first-class constraints present.
std::optional<std::vector<std::vector<RationalFunction>>> invert_constraint_matrix(
    const std::vector<std::vector<Poly>>& c);

Poly poly_determinant(const std::vector<std::vector<Poly>>& m);

/// {F,G}_edb = {F,G}_epb - {F,Psi_a} C^{ab} {Psi_b,G}; collapses to a
/// polynomial whenever the result is one.
RationalFunction dirac_bracket(const Poly& f, const Poly& g, const ConstraintAnalysis& analysis);

/// Substitutes the constraint solutions for the lambdas (the spec'd
/// explicit-substitution reading of reduction modulo the constraint ideal).
RationalFunction reduce_on_surface(const Poly& x, const ConstraintAnalysis& analysis);
RationalFunction reduce_on_surface(const RationalFunction& x, const ConstraintAnalysis& analysis);
bool is_weakly_zero(const Poly& x, const ConstraintAnalysis& analysis);

struct EvolutionResult {
    RationalFunction raw;        // edb(F, Htilde), unreduced
    RationalFunction reduced;    // on-surface form
    RationalFunction observable; // phi/hbar content of `reduced`
    RationalFunction residual;   // lambda/ghost content of `reduced` (reported, never dropped)
    bool total_matches_h_tilde = false;  // edb against Htilde_T and Htilde agree
};

/// edb(F, Htilde_T) with the multiplier terms kept symbolic; they
/// annihilate under the Dirac bracket, which the result verifies and
/// records.
EvolutionResult constrained_evolution(const Poly& f, const ConstraintAnalysis& analysis);

struct ComparisonReport {
    EvolutionResult constrained;
    Poly moyal_flow;
    RationalFunction difference;  // observable part minus the Moyal flow
    bool equal = false;
};

ComparisonReport compare_evolutions(const Poly& hamiltonian, const Poly& f,
                                    std::optional<int> order = std::nullopt,
                                    const IterationOptions& options = {});

}  // namespace xphase

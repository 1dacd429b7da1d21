#include "xphase/dirac.hpp"

#include <algorithm>

#include "xphase/brackets.hpp"
#include "xphase/errors.hpp"
#include "xphase/lift.hpp"

namespace xphase {

namespace {

using PolyMatrix = std::vector<std::vector<Poly>>;
using RFMatrix = std::vector<std::vector<RationalFunction>>;

struct SurfaceSolve {
    std::map<int, RationalFunction> by_slot;  // lambda slot -> value
    std::vector<Poly> unresolved;
};

int lambda_linear_degree(const Poly& p) {
    // max total lambda degree over terms
    const auto& ctx = p.context();
    if (!ctx) return 0;
    int best = 0;
    const int d = ctx->dim();
    for (const auto& [m, c] : p.terms()) {
        int deg = 0;
        for (int a = 0; a < d; ++a) deg += static_cast<int>(m.exponents[d + a]);
        best = std::max(best, deg);
    }
    return best;
}

// Solve the constraints for the lambdas by forward substitution; the
// consistency candidates are always linear in lambda, so no Groebner
// machinery is needed. Unsolvable residues are kept, not dropped.
SurfaceSolve solve_surface(std::span<const Constraint> constraints, const ContextPtr& ctx) {
    SurfaceSolve out;
    if (!ctx) return out;
    const int d = ctx->dim();
    std::vector<Constraint> ordered(constraints.begin(), constraints.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Constraint& a, const Constraint& b) {
                         if (a.stage != b.stage) return a.stage < b.stage;
                         return a.index < b.index;
                     });
    for (const auto& cons : ordered) {
        RationalFunction value = substitute(cons.expr, out.by_slot);
        if (value.is_zero()) continue;  // redundant on the surface built so far
        const Poly& num = value.num();
        if (lambda_linear_degree(num) > 1) {
            out.unresolved.push_back(num);
            continue;
        }
        // num = sum_a A_a * lambda_a + B ; pick the first invertible pivot
        int pivot = -1;
        Poly pivot_coeff;
        for (int a = 0; a < d; ++a) {
            Poly coeff = num.derivative({VarKind::Lambda, a});
            if (coeff.is_zero()) continue;
            if (!coeff.body_part().is_zero()) {
                pivot = a;
                pivot_coeff = std::move(coeff);
                break;
            }
        }
        if (pivot < 0) {
            out.unresolved.push_back(num);
            continue;
        }
        Poly rest = num - pivot_coeff * Poly::variable(ctx, {VarKind::Lambda, pivot});
        RationalFunction solution = -(RationalFunction(rest) / RationalFunction(pivot_coeff));
        out.by_slot[d + pivot] = std::move(solution);
    }
    // fixpoint: solved values must not reference solved lambdas
    for (int pass = 0; pass < d + 2; ++pass) {
        bool changed = false;
        for (auto& [slot, value] : out.by_slot) {
            std::map<int, RationalFunction> others;
            for (const auto& [s2, v2] : out.by_slot) {
                if (s2 != slot) others.emplace(s2, v2);
            }
            RationalFunction next = substitute(value, others);
            if (!(next == value)) {
                value = std::move(next);
                changed = true;
            }
        }
        if (!changed) break;
    }
    return out;
}

RationalFunction apply_surface(const RationalFunction& x,
                               const std::map<int, RationalFunction>& surface) {
    return substitute(x, surface);
}


Poly poly_det_impl(const PolyMatrix& m, const std::vector<int>& rows,
                   const std::vector<int>& cols) {
    const std::size_t n = rows.size();
    if (n == 0) {
        throw DomainError("determinant of an empty matrix");
    }
    if (n == 1) return m[rows[0]][cols[0]];
    Poly out(m[rows[0]][cols[0]].context());
    for (std::size_t k = 0; k < n; ++k) {
        const Poly& entry = m[rows[0]][cols[k]];
        if (entry.is_zero()) continue;
        std::vector<int> sub_rows(rows.begin() + 1, rows.end());
        std::vector<int> sub_cols;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != k) sub_cols.push_back(cols[j]);
        }
        Poly cofactor = entry * poly_det_impl(m, sub_rows, sub_cols);
        if (k % 2) {
            out -= cofactor;
        } else {
            out += cofactor;
        }
    }
    return out;
}

ContextPtr matrix_context(const PolyMatrix& m) {
    for (const auto& row : m) {
        for (const auto& e : row) {
            if (e.context()) return e.context();
        }
    }
    return nullptr;
}

}  // namespace

Poly poly_determinant(const PolyMatrix& m) {
    std::vector<int> idx(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) idx[i] = static_cast<int>(i);
    return poly_det_impl(m, idx, idx);
}

ConstraintSet primary_constraints(const ContextPtr& ctx) {
    ConstraintSet out;
    const int n = ctx->n();
    const int d = ctx->dim();
    Poly hbar = Poly::hbar(ctx);
    for (int a = n; a < d; ++a) {
        Poly expr = Poly::variable(ctx, {VarKind::Phi, a});
        for (int b = 0; b < d; ++b) {
            const Scalar& w = ctx->omega(a, b);
            if (w.is_zero()) continue;
            expr += (hbar * Poly::variable(ctx, {VarKind::Lambda, b})).scaled(w);
        }
        out.constraints.push_back({std::move(expr), 0, a});
    }
    return out;
}

PolyMatrix constraint_matrix(const ConstraintSet& psi, const ContextPtr& ctx) {
    const std::size_t n = psi.constraints.size();
    PolyMatrix c(n, std::vector<Poly>(n, Poly(ctx)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Poly entry = epb(psi.constraints[i].expr, psi.constraints[j].expr);
            c[j][i] = -entry;
            c[i][j] = std::move(entry);
        }
    }
    return c;
}

std::optional<RFMatrix> invert_constraint_matrix(const PolyMatrix& c) {
    const std::size_t n = c.size();
    if (n == 0) return RFMatrix{};
    ContextPtr ctx = matrix_context(c);
    if (!ctx) return std::nullopt;
    Poly det = poly_determinant(c);
    auto inv_det = invert_even(det);
    if (!inv_det) return std::nullopt;
    RFMatrix inv(n, std::vector<RationalFunction>(n, RationalFunction::zero(ctx)));
    std::vector<int> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (n == 1) {
                inv[0][0] = *inv_det;
                break;
            }
            std::vector<int> rows, cols;
            for (std::size_t r = 0; r < n; ++r) {
                if (r != j) rows.push_back(static_cast<int>(r));
            }
            for (std::size_t s = 0; s < n; ++s) {
                if (s != i) cols.push_back(static_cast<int>(s));
            }
            Poly minor = poly_det_impl(c, rows, cols);
            if ((i + j) % 2) minor = -minor;
            inv[i][j] = RationalFunction(minor) * *inv_det;
        }
    }
    return inv;
}

ConstraintAnalysis consistency_iteration(const Poly& hamiltonian, const IterationOptions& options) {
    if (!hamiltonian.phi_only()) {
        throw DomainError("consistency_iteration requires a phi-only Hamiltonian");
    }
    const ContextPtr& ctx = hamiltonian.context();
    ConstraintAnalysis analysis;
    analysis.ctx = ctx;
    analysis.hamiltonian = hamiltonian;
    analysis.options = options;
    analysis.h_tilde = lift_classical(hamiltonian, options.include_ghosts);

    ConstraintSet primaries = primary_constraints(ctx);
    for (std::size_t i = 0; i < options.extra_primary.size(); ++i) {
        const Poly& extra = options.extra_primary[i];
        if (extra.parity() != std::optional<int>(0)) {
            throw DomainError("user-supplied constraints must be even");
        }
        primaries.constraints.push_back({extra, 0, ctx->dim() + static_cast<int>(i)});
    }
    analysis.psi = primaries;

    std::vector<std::size_t> frontier(primaries.constraints.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) frontier[i] = i;

    int stage = 0;
    while (!frontier.empty() && stage < options.max_stages) {
        std::vector<std::size_t> next;
        for (std::size_t pos : frontier) {
            const Constraint source = analysis.psi.constraints[pos];
            IterationStep step;
            step.source_stage = source.stage;
            step.source_index = source.index;
            step.candidate = epb(source.expr, analysis.h_tilde);
            for (std::size_t a = 0; a < primaries.constraints.size(); ++a) {
                Poly coeff = epb(source.expr, primaries.constraints[a].expr);
                if (!coeff.is_zero()) step.u_coefficients.emplace(static_cast<int>(a), coeff);
            }
            if (!step.u_coefficients.empty()) {
                step.disposition = IterationStep::Disposition::multiplier_equation;
                analysis.multiplier_equations.push_back({step.u_coefficients, step.candidate});
            } else {
                SurfaceSolve surface = solve_surface(analysis.psi.constraints, ctx);
                RationalFunction reduced =
                    apply_surface(RationalFunction(step.candidate), surface.by_slot);
                step.reduction = reduced;
                if (reduced.is_zero()) {
                    step.disposition = IterationStep::Disposition::weakly_zero;
                } else {
                    step.disposition = IterationStep::Disposition::new_constraint;
                    analysis.psi.constraints.push_back(
                        {step.candidate, source.stage + 1, source.index});
                    next.push_back(analysis.psi.constraints.size() - 1);
                }
            }
            analysis.trace.push_back(std::move(step));
        }
        frontier = std::move(next);
        ++stage;
    }
    analysis.reached_max_stages = !frontier.empty();

    // constraint matrix, inverse, classification
    analysis.c_matrix = constraint_matrix(analysis.psi, ctx);
    analysis.c_inverse = invert_constraint_matrix(analysis.c_matrix);
    const std::size_t total = analysis.psi.constraints.size();
    analysis.psi.classification.assign(total, ConstraintClass::undetermined);
    for (std::size_t i = 0; i < total; ++i) {
        bool row_zero = true;
        for (std::size_t j = 0; j < total; ++j) {
            if (!analysis.c_matrix[i][j].is_zero()) {
                row_zero = false;
                break;
            }
        }
        if (row_zero) {
            analysis.psi.classification[i] = ConstraintClass::first_class;
        } else if (analysis.c_inverse) {
            analysis.psi.classification[i] = ConstraintClass::second_class;
        }
    }
    if (analysis.c_inverse) {
        analysis.active.resize(total);
        for (std::size_t i = 0; i < total; ++i) analysis.active[i] = static_cast<int>(i);
        analysis.active_inverse = *analysis.c_inverse;
        analysis.first_class_present = false;
    } else {
        analysis.first_class_present = true;
        std::vector<int> candidates;
        for (std::size_t i = 0; i < total; ++i) {
            if (analysis.psi.classification[i] != ConstraintClass::first_class) {
                candidates.push_back(static_cast<int>(i));
            }
        }
        if (!candidates.empty()) {
            PolyMatrix sub(candidates.size(), std::vector<Poly>(candidates.size(), Poly(ctx)));
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                for (std::size_t j = 0; j < candidates.size(); ++j) {
                    sub[i][j] = analysis.c_matrix[candidates[i]][candidates[j]];
                }
            }
            if (auto inv = invert_constraint_matrix(sub)) {
                analysis.active = candidates;
                analysis.active_inverse = *inv;
                for (int idx : candidates) {
                    analysis.psi.classification[idx] = ConstraintClass::second_class;
                }
            }
        }
    }

    // multipliers: exact linear solve over rational functions
    {
        std::vector<MultiplierEquation> eqs = analysis.multiplier_equations;
        const std::size_t unknowns = primaries.constraints.size();
        std::vector<std::optional<RationalFunction>> value(unknowns);
        // forward elimination with deterministic pivoting
        std::vector<std::vector<RationalFunction>> rows;
        for (const auto& eq : eqs) {
            std::vector<RationalFunction> row(unknowns + 1, RationalFunction::zero(ctx));
            for (const auto& [a, coeff] : eq.coefficients) row[a] = RationalFunction(coeff);
            row[unknowns] = RationalFunction(eq.constant);
            rows.push_back(std::move(row));
        }
        std::vector<int> pivot_of_col(unknowns, -1);
        std::size_t rank = 0;
        for (std::size_t col = 0; col < unknowns && rank < rows.size(); ++col) {
            std::size_t sel = rows.size();
            for (std::size_t r = rank; r < rows.size(); ++r) {
                if (!rows[r][col].is_zero() && !rows[r][col].num().body_part().is_zero()) {
                    sel = r;
                    break;
                }
            }
            if (sel == rows.size()) continue;
            std::swap(rows[rank], rows[sel]);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (r == rank || rows[r][col].is_zero()) continue;
                RationalFunction factor = rows[r][col] / rows[rank][col];
                for (std::size_t k = col; k <= unknowns; ++k) {
                    rows[r][k] = rows[r][k] - factor * rows[rank][k];
                }
            }
            pivot_of_col[col] = static_cast<int>(rank);
            ++rank;
        }
        analysis.multipliers.consistent = true;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            bool coeffs_zero = true;
            for (std::size_t k = 0; k < unknowns; ++k) {
                if (!rows[r][k].is_zero()) coeffs_zero = false;
            }
            if (coeffs_zero && !rows[r][unknowns].is_zero()) {
                analysis.multipliers.consistent = false;
            }
        }
        for (std::size_t col = 0; col < unknowns; ++col) {
            if (pivot_of_col[col] < 0) {
                analysis.multipliers.undetermined.push_back(static_cast<int>(col));
                continue;
            }
            const auto& row = rows[pivot_of_col[col]];
            // after Gauss-Jordan the remaining nonzero columns of a pivot
            // row are free unknowns; a multiplier tied to them stays open
            bool depends_on_free = false;
            for (std::size_t k = 0; k < unknowns; ++k) {
                if (k != col && !row[k].is_zero()) depends_on_free = true;
            }
            if (depends_on_free) {
                analysis.multipliers.undetermined.push_back(static_cast<int>(col));
                continue;
            }
            analysis.multipliers.values.emplace(
                static_cast<int>(col), -(row[unknowns] / row[col]));
        }
    }

    // final surface substitution
    SurfaceSolve surface = solve_surface(analysis.psi.constraints, ctx);
    analysis.surface = std::move(surface.by_slot);
    analysis.unresolved_relations = std::move(surface.unresolved);
    return analysis;
}

RationalFunction dirac_bracket(const Poly& f, const Poly& g, const ConstraintAnalysis& analysis) {
    RationalFunction out{epb(f, g)};
    if (analysis.active.empty()) {
        for (auto cls : analysis.psi.classification) {
            if (cls == ConstraintClass::undetermined) throw FirstClassError();
        }
        // purely first-class set: the Dirac bracket degenerates to epb
        return out;
    }
    const auto& inv = analysis.active_inverse;
    std::vector<Poly> left, right;
    left.reserve(analysis.active.size());
    right.reserve(analysis.active.size());
    for (int idx : analysis.active) {
        left.push_back(epb(f, analysis.psi.constraints[idx].expr));
        right.push_back(epb(analysis.psi.constraints[idx].expr, g));
    }
    for (std::size_t a = 0; a < analysis.active.size(); ++a) {
        if (left[a].is_zero()) continue;
        for (std::size_t b = 0; b < analysis.active.size(); ++b) {
            if (inv[a][b].is_zero() || right[b].is_zero()) continue;
            out -= RationalFunction(left[a]) * inv[a][b] * RationalFunction(right[b]);
        }
    }
    return out;
}

RationalFunction reduce_on_surface(const Poly& x, const ConstraintAnalysis& analysis) {
    return substitute(x, analysis.surface);
}

RationalFunction reduce_on_surface(const RationalFunction& x, const ConstraintAnalysis& analysis) {
    return substitute(x, analysis.surface);
}

bool is_weakly_zero(const Poly& x, const ConstraintAnalysis& analysis) {
    return reduce_on_surface(x, analysis).is_zero();
}

EvolutionResult constrained_evolution(const Poly& f, const ConstraintAnalysis& analysis) {
    if (!f.phi_only()) throw DomainError("constrained_evolution takes phi-only observables");
    EvolutionResult out;
    out.raw = dirac_bracket(f, analysis.h_tilde, analysis);
    // Htilde_T = Htilde + sum u_a Phi^a_(0): the u-terms annihilate under
    // the Dirac bracket; verify rather than assume.
    out.total_matches_h_tilde = true;
    for (const auto& cons : analysis.psi.constraints) {
        if (cons.stage != 0) continue;
        if (!dirac_bracket(f, cons.expr, analysis).is_zero()) {
            out.total_matches_h_tilde = false;
            break;
        }
    }
    out.reduced = reduce_on_surface(out.raw, analysis);
    Poly num = out.reduced.num();
    Poly clean = num.phi_only_part();
    Poly rest = num - clean;
    out.observable = RationalFunction(clean, out.reduced.den());
    out.residual = RationalFunction(rest, out.reduced.den());
    return out;
}

ComparisonReport compare_evolutions(const Poly& hamiltonian, const Poly& f,
                                    std::optional<int> order, const IterationOptions& options) {
    ComparisonReport report;
    ConstraintAnalysis analysis = consistency_iteration(hamiltonian, options);
    report.constrained = constrained_evolution(f, analysis);
    report.moyal_flow = moyal(f, hamiltonian, order);
    report.difference = report.constrained.observable - RationalFunction(report.moyal_flow);
    report.equal = report.difference.is_zero();
    return report;
}

}  // namespace xphase

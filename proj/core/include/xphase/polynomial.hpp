#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xphase/context.hpp"
#include "xphase/scalar.hpp"

namespace xphase {

/// Monomial key: exponent vector over the commuting variables
/// (phi[0..2n), lambda[0..2n), hbar) plus an ordered bit-set over the
/// ghosts (bit a = c^a, bit 2n+a = cbar_a). Ghost factors are stored in
/// the single global canonical order c^0 < c^1 < ... < cbar_0 < ...;
/// coefficient signs absorb any reordering.
struct Monomial {
    std::vector<std::uint32_t> exponents;
    std::uint64_t ghosts = 0;

    int ghost_count() const;
    int parity() const { return ghost_count() & 1; }

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Total order on monomial keys; higher exponents on earlier slots come
/// first, so iteration (and therefore printing) is deterministic.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Exact multivariate polynomial over phi, lambda, hbar (commuting) and the
/// ghosts c, cbar (anticommuting), with Gaussian-rational coefficients.
/// Immutable in practice: every operation returns a fresh value.
class GradedPolynomial {
public:
    using TermMap = std::map<Monomial, Scalar, MonomialOrder>;

    GradedPolynomial() = default;  // zero with no context; usable as +-identity
    explicit GradedPolynomial(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static GradedPolynomial zero(ContextPtr ctx) { return GradedPolynomial(std::move(ctx)); }
    static GradedPolynomial constant(ContextPtr ctx, Scalar value);
    static GradedPolynomial variable(ContextPtr ctx, Variable v);
    static GradedPolynomial hbar(ContextPtr ctx) {
        return variable(std::move(ctx), Variable{VarKind::Hbar, 0});
    }

    const ContextPtr& context() const { return ctx_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    Scalar coefficient(const Monomial& m) const;

    /// Total degree in all commuting variables plus ghost count.
    int degree() const;
    int degree_in(const Variable& v) const;
    int phi_degree() const;
    int hbar_degree() const;

    bool ghost_free() const;
    bool lambda_free() const;
    /// Only phi and hbar occur.
    bool phi_only() const;
    /// 0/1 when all terms share a Grassmann parity, nullopt otherwise.
    std::optional<int> parity() const;

    GradedPolynomial operator-() const;
    GradedPolynomial& operator+=(const GradedPolynomial& o);
    GradedPolynomial& operator-=(const GradedPolynomial& o);
    friend GradedPolynomial operator+(GradedPolynomial a, const GradedPolynomial& b) {
        return a += b;
    }
    friend GradedPolynomial operator-(GradedPolynomial a, const GradedPolynomial& b) {
        return a -= b;
    }
    friend GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b);
    GradedPolynomial& operator*=(const GradedPolynomial& o) { return *this = *this * o; }

    GradedPolynomial scaled(const Scalar& s) const;

    friend bool operator==(const GradedPolynomial& a, const GradedPolynomial& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const GradedPolynomial& a, const GradedPolynomial& b) {
        return !(a == b);
    }

    /// Partial derivative. Commuting variables: ordinary derivative.
    /// Ghosts: left derivative (move v leftmost collecting signs, delete).
    GradedPolynomial derivative(const Variable& v) const;
    /// Right ghost derivative (move v rightmost); equal to derivative() for
    /// commuting variables.
    GradedPolynomial derivative_right(const Variable& v) const;

    /// Drop every term whose hbar exponent exceeds `order`.
    GradedPolynomial truncate_hbar(int order) const;

    /// Replace hbar by an exact rational value.
    GradedPolynomial substitute_hbar(const mpq_class& value) const;

    /// Substitute commuting variables by polynomials (even values only).
    GradedPolynomial substitute(const std::map<int, GradedPolynomial>& by_slot) const;

    /// Keep only terms whose ghost set is empty / nonempty.
    GradedPolynomial ghost_part() const;
    GradedPolynomial body_part() const;
    /// Keep only terms containing at least one lambda or ghost factor.
    GradedPolynomial lambda_or_ghost_part() const;
    GradedPolynomial phi_only_part() const;

    /// Canonical deterministic text form; parse(str()) reproduces the value
    /// bit-exactly.
    std::string str() const;

    /// Adds c * m into the term map, folding signs/nilpotency of ghosts is
    /// the caller's job; zero results are dropped.
    void add_term(const Monomial& m, const Scalar& c);

private:
    ContextPtr ctx_;
    TermMap terms_;
};

using Poly = GradedPolynomial;

/// Graded product of two monomials: nullopt when a repeated ghost
/// annihilates the term, otherwise the canonical key and the sign picked
/// up by reordering ghost factors.
std::optional<std::pair<Monomial, int>> monomial_product(const Monomial& a, const Monomial& b);

}  // namespace xphase

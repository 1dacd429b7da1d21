#pragma once

#include <map>
#include <optional>

#include "xphase/polynomial.hpp"

namespace xphase {

/// Quotient num/den of graded polynomials. The denominator is never zero
/// and contains no ghost variables (it lives in the commuting subring), so
/// it is central and division is unambiguous. Equality is decided by
/// cross-multiplication: a/b = c/d iff a*d - c*b = 0.
///
/// Normal form kept cheap on purpose: common monomial content is stripped,
/// exact polynomial quotients collapse to a polynomial (den = 1), a
/// denominator that is a polynomial multiple of a ghost-free numerator
/// collapses to 1/w, and the denominator is made monic. No general gcd.
class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(Poly num) : num_(std::move(num)) { make_den_one(); }
    RationalFunction(Poly num, Poly den);

    static RationalFunction zero(const ContextPtr& ctx) {
        return RationalFunction(Poly::zero(ctx));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const ContextPtr& context() const { return num_.context(); }

    bool is_zero() const { return num_.is_zero(); }
    /// Default-constructed instances are the zero function with no context.
    bool has_context() const { return static_cast<bool>(num_.context()); }
    bool is_polynomial() const;
    /// The polynomial value when den == 1.
    const Poly& as_polynomial() const;

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

    friend RationalFunction operator*(const RationalFunction& a, const Poly& b) {
        return a * RationalFunction(b);
    }
    friend RationalFunction operator*(const Poly& a, const RationalFunction& b) {
        return RationalFunction(a) * b;
    }

    /// Cross-multiplication equality.
    friend bool operator==(const RationalFunction& a, const RationalFunction& b);
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
        return !(a == b);
    }

    RationalFunction substitute_hbar(const mpq_class& value) const;

    std::string str() const;

private:
    void make_den_one();
    void normalize();

    Poly num_;
    Poly den_;  // ghost-free, nonzero (1 for default/zero)
};

using RF = RationalFunction;

/// Exact polynomial quotient num/den (den ghost-free); nullopt when den
/// does not divide num.
std::optional<Poly> divide_exact(const Poly& num, const Poly& den);

/// Inverse of an even polynomial B + N (B ghost-free, N nilpotent ghost
/// part): expands the terminating Neumann series over 1/B. Returns nullopt
/// when the ghost-free body B is zero or the ghost part has odd terms.
std::optional<RationalFunction> invert_even(const Poly& p);

/// Substitutes commuting variables by rational functions (termwise; the
/// unsubstituted factors multiply through). Values must be even.
RationalFunction substitute(const Poly& f, const std::map<int, RationalFunction>& by_slot);
RationalFunction substitute(const RationalFunction& f,
                            const std::map<int, RationalFunction>& by_slot);

}  // namespace xphase

#include "xphase/rational_function.hpp"

#include "xphase/errors.hpp"

namespace xphase {

namespace {

// Componentwise-min commuting exponents over all terms.
std::vector<std::uint32_t> monomial_content(const Poly& p) {
    std::vector<std::uint32_t> content;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (first) {
            content = m.exponents;
            first = false;
            continue;
        }
        for (std::size_t i = 0; i < content.size(); ++i) {
            content[i] = std::min(content[i], m.exponents[i]);
        }
    }
    return content;
}

Poly strip_content(const Poly& p, const std::vector<std::uint32_t>& content) {
    Poly out(p.context());
    for (const auto& [m, c] : p.terms()) {
        Monomial d = m;
        for (std::size_t i = 0; i < content.size(); ++i) d.exponents[i] -= content[i];
        out.add_term(d, c);
    }
    return out;
}

bool divides(const Monomial& den, const Monomial& num) {
    for (std::size_t i = 0; i < den.exponents.size(); ++i) {
        if (den.exponents[i] > num.exponents[i]) return false;
    }
    return true;
}

}  // namespace

std::optional<Poly> divide_exact(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw DomainError("division by zero polynomial");
    if (!den.ghost_free()) throw DomainError("polynomial divisor must be ghost-free");
    Poly quotient(num.context() ? num.context() : den.context());
    if (num.is_zero()) return quotient;
    require_same_context(num.context(), den.context());

    const auto& lead_den = *den.terms().begin();
    Poly remainder = num;
    while (!remainder.is_zero()) {
        const auto& lead_rem = *remainder.terms().begin();
        if (!divides(lead_den.first, lead_rem.first)) return std::nullopt;
        Monomial t = lead_rem.first;
        for (std::size_t i = 0; i < t.exponents.size(); ++i) {
            t.exponents[i] -= lead_den.first.exponents[i];
        }
        Scalar coeff = lead_rem.second / lead_den.second;
        Poly step(num.context());
        step.add_term(t, coeff);
        quotient += step;
        remainder -= step * den;
    }
    return quotient;
}

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("rational function denominator is zero");
    if (!den_.ghost_free()) throw DomainError("rational function denominator must be ghost-free");
    if (num_.context() && den_.context()) require_same_context(num_.context(), den_.context());
    if (!num_.context()) num_ = Poly::zero(den_.context());
    normalize();
}

void RationalFunction::make_den_one() {
    den_ = Poly::constant(num_.context(), Scalar(1));
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        make_den_one();
        return;
    }
    // strip common monomial content
    auto cn = monomial_content(num_);
    auto cd = monomial_content(den_);
    std::vector<std::uint32_t> common(cn.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < cn.size(); ++i) {
        common[i] = std::min(cn[i], cd[i]);
        any = any || common[i] > 0;
    }
    if (any) {
        num_ = strip_content(num_, common);
        den_ = strip_content(den_, common);
    }
    // exact collapse: den | num -> polynomial
    if (auto q = divide_exact(num_, den_)) {
        num_ = std::move(*q);
        make_den_one();
        return;
    }
    // reciprocal collapse: num ghost-free and num | den -> 1/w (scaled)
    if (num_.ghost_free() && num_.term_count() > 1) {
        if (auto w = divide_exact(den_, num_)) {
            num_ = Poly::constant(num_.context(), Scalar(1));
            den_ = std::move(*w);
        }
    }
    // monic denominator
    const Scalar& lead = den_.terms().begin()->second;
    if (!lead.is_one()) {
        Scalar inv = Scalar(1) / lead;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

bool RationalFunction::is_polynomial() const {
    if (den_.term_count() != 1) return false;
    const auto& [m, c] = *den_.terms().begin();
    if (!c.is_one() || m.ghosts != 0) return false;
    for (auto e : m.exponents) {
        if (e) return false;
    }
    return true;
}

const Poly& RationalFunction::as_polynomial() const {
    if (!is_polynomial()) throw DomainError("rational function is not a polynomial");
    return num_;
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return a + (-b);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    // cross-cancellation keeps intermediates small
    Poly an = a.num_, bd = b.den_;
    if (auto q = divide_exact(an, bd)) {
        an = std::move(*q);
        bd = Poly::constant(bd.context(), Scalar(1));
    }
    Poly bn = b.num_, ad = a.den_;
    if (auto q = divide_exact(bn, ad)) {
        bn = std::move(*q);
        ad = Poly::constant(ad.context(), Scalar(1));
    }
    return RationalFunction(an * bn, ad * bd);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DomainError("division by zero rational function");
    if (b.num_.ghost_free()) {
        return a * RationalFunction(b.den_, b.num_);
    }
    auto inv = invert_even(b.num_);
    if (!inv) throw DomainError("divisor is not invertible (nilpotent ghost body)");
    return a * RationalFunction(b.den_) * *inv;
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.num_ * b.den_ == b.num_ * a.den_;
}

RationalFunction RationalFunction::substitute_hbar(const mpq_class& value) const {
    Poly den = den_.substitute_hbar(value);
    if (den.is_zero()) throw DomainError("hbar substitution makes the denominator vanish");
    return RationalFunction(num_.substitute_hbar(value), std::move(den));
}

std::string RationalFunction::str() const {
    if (is_zero()) return "0";
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

std::optional<RationalFunction> invert_even(const Poly& p) {
    Poly body = p.body_part();
    Poly nil = p.ghost_part();
    if (body.is_zero()) return std::nullopt;
    if (!nil.is_zero()) {
        auto par = nil.parity();
        if (!par || *par != 0) return std::nullopt;
    }
    // 1/(B + N) = sum_k (-N)^k / B^{k+1}; N is nilpotent, so the sum stops.
    RationalFunction inv_body(Poly::constant(p.context(), Scalar(1)), body);
    RationalFunction total = inv_body;
    RationalFunction bpow = inv_body;
    Poly nk = nil;
    int k = 1;
    while (!nk.is_zero()) {
        bpow = bpow * inv_body;  // 1/B^{k+1}
        RationalFunction term = RationalFunction(nk) * bpow;
        total = (k % 2) ? total - term : total + term;
        nk = nk * nil;
        ++k;
    }
    return total;
}

RationalFunction substitute(const Poly& f, const std::map<int, RationalFunction>& by_slot) {
    if (!f.context() || by_slot.empty()) return RationalFunction(f);
    const auto& ctx = f.context();
    RationalFunction out = RationalFunction::zero(ctx);
    for (const auto& [m, c] : f.terms()) {
        Monomial rest = m;
        for (const auto& [slot, value] : by_slot) rest.exponents[slot] = 0;
        Poly base(ctx);
        base.add_term(rest, c);
        RationalFunction term{base};
        for (const auto& [slot, value] : by_slot) {
            for (std::uint32_t k = 0; k < m.exponents[slot]; ++k) term *= value;
        }
        out += term;
    }
    return out;
}

RationalFunction substitute(const RationalFunction& f,
                            const std::map<int, RationalFunction>& by_slot) {
    RationalFunction num = substitute(f.num(), by_slot);
    RationalFunction den = substitute(f.den(), by_slot);
    return num / den;
}

}  // namespace xphase

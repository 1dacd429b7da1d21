#include "xphase/polynomial.hpp"

#include <bit>
#include <sstream>

#include "xphase/errors.hpp"

namespace xphase {

int Monomial::ghost_count() const { return std::popcount(ghosts); }

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
    // Descending lexicographic on the exponent vector, then descending on
    // the ghost bit-set. Zero-padded comparison keeps keys from contexts of
    // equal shape consistent.
    const std::size_t na = a.exponents.size(), nb = b.exponents.size();
    const std::size_t n = na > nb ? na : nb;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t ea = i < na ? a.exponents[i] : 0;
        std::uint32_t eb = i < nb ? b.exponents[i] : 0;
        if (ea != eb) return ea > eb;
    }
    return a.ghosts > b.ghosts;
}

std::optional<std::pair<Monomial, int>> monomial_product(const Monomial& a, const Monomial& b) {
    if (a.ghosts & b.ghosts) return std::nullopt;  // ghost nilpotency
    Monomial out;
    const std::size_t n = a.exponents.size() > b.exponents.size() ? a.exponents.size()
                                                                  : b.exponents.size();
    out.exponents.resize(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t ea = i < a.exponents.size() ? a.exponents[i] : 0;
        std::uint32_t eb = i < b.exponents.size() ? b.exponents[i] : 0;
        out.exponents[i] = ea + eb;
    }
    out.ghosts = a.ghosts | b.ghosts;
    // Interleaving b's ghosts into a's: each bit g of b hops over the bits
    // of a that are greater than g.
    int swaps = 0;
    std::uint64_t gb = b.ghosts;
    while (gb) {
        int g = std::countr_zero(gb);
        gb &= gb - 1;
        swaps += std::popcount(a.ghosts >> (g + 1));
    }
    return std::make_pair(std::move(out), (swaps & 1) ? -1 : 1);
}

GradedPolynomial GradedPolynomial::constant(ContextPtr ctx, Scalar value) {
    GradedPolynomial out(std::move(ctx));
    if (!value.is_zero()) {
        Monomial m;
        m.exponents.assign(out.ctx_->commuting_slots(), 0);
        out.terms_.emplace(std::move(m), std::move(value));
    }
    return out;
}

GradedPolynomial GradedPolynomial::variable(ContextPtr ctx, Variable v) {
    GradedPolynomial out(std::move(ctx));
    Monomial m;
    m.exponents.assign(out.ctx_->commuting_slots(), 0);
    if (v.odd()) {
        m.ghosts = std::uint64_t{1} << out.ctx_->ghost_bit(v);
    } else {
        m.exponents[out.ctx_->slot(v)] = 1;
    }
    out.terms_.emplace(std::move(m), Scalar(1));
    return out;
}

Scalar GradedPolynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
}

int GradedPolynomial::degree() const {
    int best = 0;
    for (const auto& [m, c] : terms_) {
        int d = m.ghost_count();
        for (auto e : m.exponents) d += static_cast<int>(e);
        if (d > best) best = d;
    }
    return best;
}

int GradedPolynomial::degree_in(const Variable& v) const {
    int best = 0;
    if (v.odd()) {
        std::uint64_t bit = std::uint64_t{1} << ctx_->ghost_bit(v);
        for (const auto& [m, c] : terms_)
            if (m.ghosts & bit) return 1;
        return 0;
    }
    int s = ctx_->slot(v);
    for (const auto& [m, c] : terms_) best = std::max(best, static_cast<int>(m.exponents[s]));
    return best;
}

int GradedPolynomial::phi_degree() const {
    if (!ctx_) return 0;
    int best = 0;
    for (const auto& [m, c] : terms_) {
        int d = 0;
        for (int a = 0; a < ctx_->dim(); ++a) d += static_cast<int>(m.exponents[a]);
        if (d > best) best = d;
    }
    return best;
}

int GradedPolynomial::hbar_degree() const {
    if (!ctx_) return 0;
    int s = 2 * ctx_->dim();
    int best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, static_cast<int>(m.exponents[s]));
    return best;
}

bool GradedPolynomial::ghost_free() const {
    for (const auto& [m, c] : terms_)
        if (m.ghosts) return false;
    return true;
}

bool GradedPolynomial::lambda_free() const {
    if (!ctx_) return true;
    for (const auto& [m, c] : terms_)
        for (int a = 0; a < ctx_->dim(); ++a)
            if (m.exponents[ctx_->dim() + a]) return false;
    return true;
}

bool GradedPolynomial::phi_only() const { return ghost_free() && lambda_free(); }

std::optional<int> GradedPolynomial::parity() const {
    std::optional<int> p;
    for (const auto& [m, c] : terms_) {
        int mp = m.parity();
        if (!p) {
            p = mp;
        } else if (*p != mp) {
            return std::nullopt;
        }
    }
    return p.value_or(0);
}

GradedPolynomial GradedPolynomial::operator-() const {
    GradedPolynomial out(ctx_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

void GradedPolynomial::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& o) {
    if (o.is_zero()) return *this;
    if (is_zero() && !ctx_) ctx_ = o.ctx_;
    require_same_context(ctx_, o.ctx_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& o) {
    if (o.is_zero()) return *this;
    if (is_zero() && !ctx_) ctx_ = o.ctx_;
    require_same_context(ctx_, o.ctx_);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    require_same_context(a.ctx_, b.ctx_);
    GradedPolynomial out(a.ctx_ ? a.ctx_ : b.ctx_);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            auto prod = monomial_product(ma, mb);
            if (!prod) continue;
            Scalar c = ca * cb;
            if (prod->second < 0) c = -c;
            out.add_term(prod->first, c);
        }
    }
    return out;
}

GradedPolynomial GradedPolynomial::scaled(const Scalar& s) const {
    GradedPolynomial out(ctx_);
    if (s.is_zero()) return out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
    return out;
}

GradedPolynomial GradedPolynomial::derivative(const Variable& v) const {
    GradedPolynomial out(ctx_);
    if (!ctx_) return out;
    if (v.odd()) {
        std::uint64_t bit = std::uint64_t{1} << ctx_->ghost_bit(v);
        for (const auto& [m, c] : terms_) {
            if (!(m.ghosts & bit)) continue;
            Monomial d = m;
            d.ghosts &= ~bit;
            // left derivative: v hops over the ghosts before it
            int before = std::popcount(m.ghosts & (bit - 1));
            out.add_term(d, (before & 1) ? -c : c);
        }
        return out;
    }
    int s = ctx_->slot(v);
    for (const auto& [m, c] : terms_) {
        if (m.exponents[s] == 0) continue;
        Monomial d = m;
        d.exponents[s] -= 1;
        out.add_term(d, c * Scalar(static_cast<long>(m.exponents[s])));
    }
    return out;
}

GradedPolynomial GradedPolynomial::derivative_right(const Variable& v) const {
    if (!v.odd()) return derivative(v);
    GradedPolynomial out(ctx_);
    if (!ctx_) return out;
    std::uint64_t bit = std::uint64_t{1} << ctx_->ghost_bit(v);
    for (const auto& [m, c] : terms_) {
        if (!(m.ghosts & bit)) continue;
        Monomial d = m;
        d.ghosts &= ~bit;
        int after = std::popcount(m.ghosts >> (ctx_->ghost_bit(v) + 1));
        out.add_term(d, (after & 1) ? -c : c);
    }
    return out;
}

GradedPolynomial GradedPolynomial::truncate_hbar(int order) const {
    if (order < 0) throw DomainError("truncation order must be >= 0");
    GradedPolynomial out(ctx_);
    if (!ctx_) return out;
    int s = 2 * ctx_->dim();
    for (const auto& [m, c] : terms_) {
        if (static_cast<int>(m.exponents[s]) <= order) out.terms_.emplace(m, c);
    }
    return out;
}

GradedPolynomial GradedPolynomial::substitute_hbar(const mpq_class& value) const {
    GradedPolynomial out(ctx_);
    if (!ctx_) return out;
    int s = 2 * ctx_->dim();
    for (const auto& [m, c] : terms_) {
        mpq_class factor(1);
        for (std::uint32_t k = 0; k < m.exponents[s]; ++k) factor *= value;
        Monomial d = m;
        d.exponents[s] = 0;
        out.add_term(d, c * Scalar(factor));
    }
    return out;
}

GradedPolynomial GradedPolynomial::substitute(const std::map<int, GradedPolynomial>& by_slot) const {
    if (!ctx_ || by_slot.empty()) return *this;
    for (const auto& [slot, value] : by_slot) {
        auto p = value.parity();
        if (!p || *p != 0) throw DomainError("substitution values must be even");
        (void)slot;
    }
    GradedPolynomial out(ctx_);
    for (const auto& [m, c] : terms_) {
        GradedPolynomial term(ctx_);
        Monomial rest = m;
        for (const auto& [slot, value] : by_slot) rest.exponents[slot] = 0;
        term.add_term(rest, c);
        for (const auto& [slot, value] : by_slot) {
            for (std::uint32_t k = 0; k < m.exponents[slot]; ++k) term = term * value;
        }
        out += term;
    }
    return out;
}

GradedPolynomial GradedPolynomial::ghost_part() const {
    GradedPolynomial out(ctx_);
    for (const auto& [m, c] : terms_)
        if (m.ghosts) out.terms_.emplace(m, c);
    return out;
}

GradedPolynomial GradedPolynomial::body_part() const {
    GradedPolynomial out(ctx_);
    for (const auto& [m, c] : terms_)
        if (!m.ghosts) out.terms_.emplace(m, c);
    return out;
}

GradedPolynomial GradedPolynomial::lambda_or_ghost_part() const {
    GradedPolynomial out(ctx_);
    if (!ctx_) return out;
    for (const auto& [m, c] : terms_) {
        bool has_lambda = false;
        for (int a = 0; a < ctx_->dim(); ++a) {
            if (m.exponents[ctx_->dim() + a]) {
                has_lambda = true;
                break;
            }
        }
        if (has_lambda || m.ghosts) out.terms_.emplace(m, c);
    }
    return out;
}

GradedPolynomial GradedPolynomial::phi_only_part() const {
    GradedPolynomial out = *this;
    return out -= lambda_or_ghost_part();
}

std::string GradedPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Scalar coeff = c;
        if (first) {
            if (coeff.display_negative()) {
                os << "-";
                coeff = -coeff;
            }
            first = false;
        } else if (coeff.display_negative()) {
            os << " - ";
            coeff = -coeff;
        } else {
            os << " + ";
        }

        std::vector<std::string> factors;
        for (std::size_t s = 0; s < m.exponents.size(); ++s) {
            if (!m.exponents[s]) continue;
            std::string f = ctx_->name(ctx_->variable_at_slot(static_cast<int>(s)));
            if (m.exponents[s] > 1) f += "^" + std::to_string(m.exponents[s]);
            factors.push_back(std::move(f));
        }
        std::uint64_t g = m.ghosts;
        while (g) {
            int bit = std::countr_zero(g);
            g &= g - 1;
            factors.push_back(ctx_->name(ctx_->variable_at_ghost_bit(bit)));
        }

        if (factors.empty()) {
            // bare scalar; "1+i" style needs no parentheses in sum position
            os << coeff.str();
            continue;
        }
        bool skip_coeff = coeff.is_one();
        if (!skip_coeff) {
            if (coeff.is_real() || coeff.re() == 0) {
                if (coeff == Scalar::imaginary_unit()) {
                    os << "i*";
                } else {
                    os << coeff.str() << "*";
                }
            } else {
                os << "(" << coeff.str() << ")*";
            }
        }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
    }
    return os.str();
}

}  // namespace xphase

#pragma once

#include <functional>
#include <random>
#include <vector>

#include "xphase/parser.hpp"
#include "xphase/polynomial.hpp"

namespace xphase::testing {

/// Deterministic RNG so failures reproduce.
inline std::mt19937_64 make_rng(std::uint64_t seed = 0x5eed) { return std::mt19937_64(seed); }

inline Scalar random_scalar(std::mt19937_64& rng, bool allow_imaginary = true) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    std::uniform_int_distribution<int> pick(0, 3);
    mpq_class re(num(rng), den(rng));
    re.canonicalize();
    if (allow_imaginary && pick(rng) == 0) {
        mpq_class im(num(rng), den(rng));
        im.canonicalize();
        return Scalar(re, im);
    }
    return Scalar(re);
}

struct PolyOptions {
    int max_terms = 4;
    int max_exponent = 3;
    int max_degree = 6;
    bool phi = true;
    bool lambda = false;
    bool ghosts = false;
    bool hbar = false;
    bool allow_imaginary = true;
};

inline Poly random_poly(const ContextPtr& ctx, std::mt19937_64& rng, const PolyOptions& opt = {}) {
    std::uniform_int_distribution<int> terms(1, opt.max_terms);
    std::uniform_int_distribution<int> exponent(0, opt.max_exponent);
    std::uniform_int_distribution<int> coin(0, 1);
    Poly out(ctx);
    const int d = ctx->dim();
    int count = terms(rng);
    for (int t = 0; t < count; ++t) {
        Monomial m;
        m.exponents.assign(ctx->commuting_slots(), 0);
        int degree = 0;
        auto put = [&](int slot) {
            int e = exponent(rng);
            e = std::min(e, opt.max_degree - degree);
            if (e < 0) e = 0;
            m.exponents[slot] = static_cast<std::uint32_t>(e);
            degree += e;
        };
        if (opt.phi) {
            for (int a = 0; a < d; ++a) put(a);
        }
        if (opt.lambda) {
            for (int a = 0; a < d; ++a) put(d + a);
        }
        if (opt.hbar) put(2 * d);
        if (opt.ghosts) {
            for (int bit = 0; bit < 2 * d; ++bit) {
                if (degree < opt.max_degree && coin(rng)) {
                    m.ghosts |= std::uint64_t{1} << bit;
                    ++degree;
                }
            }
        }
        out.add_term(m, random_scalar(rng, opt.allow_imaginary));
    }
    return out;
}

/// Even/odd projection (graded tests want homogeneous-parity inputs).
inline Poly parity_part(const Poly& p, int parity) {
    Poly out(p.context());
    for (const auto& [m, c] : p.terms()) {
        if (m.parity() == parity) out.add_term(m, c);
    }
    return out;
}

inline Poly random_homogeneous(const ContextPtr& ctx, std::mt19937_64& rng, int parity,
                               PolyOptions opt = {}) {
    opt.ghosts = true;
    for (int attempt = 0; attempt < 64; ++attempt) {
        Poly p = parity_part(random_poly(ctx, rng, opt), parity);
        if (!p.is_zero()) return p;
    }
    return parity == 0 ? Poly::constant(ctx, Scalar(1))
                       : Poly::variable(ctx, {VarKind::GhostC, 0});
}

/// All phi-monomials q^a p^b ... with total degree <= max_degree.
inline std::vector<Poly> phi_monomials(const ContextPtr& ctx, int max_degree) {
    std::vector<Poly> out;
    const int d = ctx->dim();
    std::vector<int> exps(d, 0);
    auto emit = [&]() {
        Poly m = Poly::constant(ctx, Scalar(1));
        for (int a = 0; a < d; ++a) {
            for (int k = 0; k < exps[a]; ++k) m = m * Poly::variable(ctx, {VarKind::Phi, a});
        }
        out.push_back(std::move(m));
    };
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == d) {
            emit();
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            exps[slot] = e;
            rec(slot + 1, remaining - e);
        }
        exps[slot] = 0;
    };
    rec(0, max_degree);
    return out;
}

}  // namespace xphase::testing

#include "xphase/brackets.hpp"

#include "xphase/errors.hpp"

namespace xphase {

namespace {

void require_phi_only(const Poly& f, const char* what) {
    if (!f.phi_only()) {
        throw DomainError(std::string(what) +
                          " requires phi-only arguments (pass treat_extra_as_parameters to "
                          "read lambda/ghost factors as inert coefficients)");
    }
}

ContextPtr joint_context(const Poly& f, const Poly& g) {
    require_same_context(f.context(), g.context());
    return f.context() ? f.context() : g.context();
}

}  // namespace

Poly pb(const Poly& f, const Poly& g, bool treat_extra_as_parameters) {
    ContextPtr ctx = joint_context(f, g);
    if (!ctx) return f;  // both zero with no context
    if (!treat_extra_as_parameters) {
        require_phi_only(f, "pb");
        require_phi_only(g, "pb");
    }
    Poly out(ctx);
    const int d = ctx->dim();
    for (int a = 0; a < d; ++a) {
        Poly fa = f.derivative({VarKind::Phi, a});
        if (fa.is_zero()) continue;
        for (int b = 0; b < d; ++b) {
            const Scalar& w = ctx->omega(a, b);
            if (w.is_zero()) continue;
            Poly gb = g.derivative({VarKind::Phi, b});
            if (gb.is_zero()) continue;
            out += (fa * gb).scaled(w);
        }
    }
    return out;
}

Poly epb(const Poly& f, const Poly& g) {
    ContextPtr ctx = joint_context(f, g);
    if (!ctx) return f;
    Poly out(ctx);
    const int d = ctx->dim();
    for (int a = 0; a < d; ++a) {
        out += f.derivative({VarKind::Phi, a}) * g.derivative({VarKind::Lambda, a});
        out -= f.derivative({VarKind::Lambda, a}) * g.derivative({VarKind::Phi, a});
    }
    Poly ghost(ctx);
    for (int a = 0; a < d; ++a) {
        ghost += f.derivative_right({VarKind::GhostC, a}) * g.derivative({VarKind::GhostCbar, a});
        ghost += f.derivative_right({VarKind::GhostCbar, a}) * g.derivative({VarKind::GhostC, a});
    }
    out -= ghost.scaled(Scalar::imaginary_unit());
    return out;
}

Poly bidifferential_power(const Poly& f, const Poly& g, int k, bool treat_extra_as_parameters) {
    if (k < 1) throw DomainError("bidifferential power requires k >= 1");
    ContextPtr ctx = joint_context(f, g);
    if (!ctx) return f;
    if (!treat_extra_as_parameters) {
        require_phi_only(f, "bidifferential_power");
        require_phi_only(g, "bidifferential_power");
    }
    if (k == 1) return pb(f, g, true);
    Poly out(ctx);
    const int d = ctx->dim();
    for (int a = 0; a < d; ++a) {
        Poly fa = f.derivative({VarKind::Phi, a});
        if (fa.is_zero()) continue;
        for (int b = 0; b < d; ++b) {
            const Scalar& w = ctx->omega(a, b);
            if (w.is_zero()) continue;
            Poly gb = g.derivative({VarKind::Phi, b});
            if (gb.is_zero()) continue;
            out += bidifferential_power(fa, gb, k - 1, true).scaled(w);
        }
    }
    return out;
}

Poly moyal(const Poly& f, const Poly& g, std::optional<int> order,
           bool treat_extra_as_parameters) {
    ContextPtr ctx = joint_context(f, g);
    if (!ctx) return f;
    if (!treat_extra_as_parameters) {
        require_phi_only(f, "moyal");
        require_phi_only(g, "moyal");
    }
    std::optional<int> even_order;
    if (order) {
        if (*order < 0) throw DomainError("moyal order must be >= 0");
        even_order = 2 * (*order / 2);
    }
    const int max_k = std::min(f.phi_degree(), g.phi_degree());
    Poly hbar_sq = Poly::hbar(ctx) * Poly::hbar(ctx);
    Poly out(ctx);
    Poly hbar_power = Poly::constant(ctx, Scalar(1));
    mpq_class coeff(1);  // 1 / (4^j (2j+1)!)
    for (int j = 0; 2 * j + 1 <= max_k; ++j) {
        if (j > 0) {
            coeff /= mpq_class(4 * (2 * j) * (2 * j + 1));
            hbar_power = hbar_power * hbar_sq;
            if (even_order && 2 * j > *even_order) break;
        }
        Poly pk = bidifferential_power(f, g, 2 * j + 1, true);
        if (pk.is_zero()) continue;
        Scalar s = Scalar((j % 2) ? -coeff : coeff);
        out += (pk * hbar_power).scaled(s);
    }
    return out;
}

}  // namespace xphase

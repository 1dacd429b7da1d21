#include "xphase/context.hpp"

#include <charconv>

#include "xphase/errors.hpp"

namespace xphase {

namespace {

// Exact determinant by Gaussian elimination over the Gaussian rationals.
bool is_invertible(std::vector<Scalar> m, int dim) {
    for (int col = 0; col < dim; ++col) {
        int pivot = -1;
        for (int row = col; row < dim; ++row) {
            if (!m[row * dim + col].is_zero()) {
                pivot = row;
                break;
            }
        }
        if (pivot < 0) return false;
        if (pivot != col) {
            for (int k = 0; k < dim; ++k) std::swap(m[pivot * dim + k], m[col * dim + k]);
        }
        for (int row = col + 1; row < dim; ++row) {
            if (m[row * dim + col].is_zero()) continue;
            Scalar f = m[row * dim + col] / m[col * dim + col];
            for (int k = col; k < dim; ++k) {
                m[row * dim + k] -= f * m[col * dim + k];
            }
        }
    }
    return true;
}

std::optional<int> parse_index(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) return std::nullopt;
    return value;
}

}  // namespace

SymplecticContext::SymplecticContext(int n, std::vector<Scalar> omega)
    : n_(n), omega_(std::move(omega)) {}

ContextPtr SymplecticContext::standard(int n) {
    if (n < 1) throw DomainError("context dimension n must be positive");
    int d = 2 * n;
    std::vector<Scalar> omega(d * d, Scalar(0));
    for (int i = 0; i < n; ++i) {
        omega[i * d + (n + i)] = Scalar(1);
        omega[(n + i) * d + i] = Scalar(-1);
    }
    return ContextPtr(new SymplecticContext(n, std::move(omega)));
}

ContextPtr SymplecticContext::with_omega(int n, std::vector<Scalar> omega) {
    if (n < 1) throw DomainError("context dimension n must be positive");
    int d = 2 * n;
    if (static_cast<int>(omega.size()) != d * d) {
        throw DomainError("omega must be a 2n x 2n matrix");
    }
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (omega[a * d + b] != -omega[b * d + a]) {
                throw DomainError("omega must be antisymmetric");
            }
        }
    }
    if (!is_invertible(omega, d)) throw DomainError("omega must be invertible");
    return ContextPtr(new SymplecticContext(n, std::move(omega)));
}

int SymplecticContext::slot(const Variable& v) const {
    switch (v.kind) {
        case VarKind::Phi:
            return v.index;
        case VarKind::Lambda:
            return dim() + v.index;
        case VarKind::Hbar:
            return 2 * dim();
        default:
            throw DomainError("ghost variables have no commuting exponent slot");
    }
}

Variable SymplecticContext::variable_at_slot(int slot) const {
    if (slot < dim()) return {VarKind::Phi, slot};
    if (slot < 2 * dim()) return {VarKind::Lambda, slot - dim()};
    return {VarKind::Hbar, 0};
}

int SymplecticContext::ghost_bit(const Variable& v) const {
    switch (v.kind) {
        case VarKind::GhostC:
            return v.index;
        case VarKind::GhostCbar:
            return dim() + v.index;
        default:
            throw DomainError("not a ghost variable");
    }
}

Variable SymplecticContext::variable_at_ghost_bit(int bit) const {
    if (bit < dim()) return {VarKind::GhostC, bit};
    return {VarKind::GhostCbar, bit - dim()};
}

std::string SymplecticContext::name(const Variable& v) const {
    auto qp = [&](int index) {
        // phi^a: a < n are the q_i, a >= n the p_i
        bool is_q = index < n_;
        int i = is_q ? index : index - n_;
        std::string base = is_q ? "q" : "p";
        if (n_ == 1) return base;
        return base + std::to_string(i);
    };
    switch (v.kind) {
        case VarKind::Phi:
            return qp(v.index);
        case VarKind::Lambda:
            return "l_" + qp(v.index);
        case VarKind::GhostC:
            return "c" + std::to_string(v.index);
        case VarKind::GhostCbar:
            return "cb" + std::to_string(v.index);
        case VarKind::Hbar:
            return "hbar";
    }
    return "?";
}

std::optional<Variable> SymplecticContext::lookup(std::string_view s) const {
    if (s == "hbar") return Variable{VarKind::Hbar, 0};

    bool lambda = false;
    if (s.size() > 2 && s.substr(0, 2) == "l_") {
        lambda = true;
        s.remove_prefix(2);
    }
    auto phi_like = [&](std::string_view body) -> std::optional<int> {
        if (body.empty()) return std::nullopt;
        char head = body.front();
        if (head != 'q' && head != 'p') return std::nullopt;
        std::string_view digits = body.substr(1);
        int i = 0;
        if (!digits.empty()) {
            auto parsed = parse_index(digits);
            if (!parsed) return std::nullopt;
            i = *parsed;
        } else if (n_ != 1) {
            return std::nullopt;  // bare q/p only when n == 1
        }
        if (i >= n_) return std::nullopt;
        return head == 'q' ? i : n_ + i;
    };
    if (auto index = phi_like(s)) {
        return Variable{lambda ? VarKind::Lambda : VarKind::Phi, *index};
    }
    if (lambda) return std::nullopt;

    if (s.size() >= 2 && s.substr(0, 2) == "cb") {
        auto i = parse_index(s.substr(2));
        if (i && *i < dim()) return Variable{VarKind::GhostCbar, *i};
        return std::nullopt;
    }
    if (s.size() >= 1 && s.front() == 'c') {
        auto i = parse_index(s.substr(1));
        if (i && *i < dim()) return Variable{VarKind::GhostC, *i};
    }
    return std::nullopt;
}

bool SymplecticContext::equivalent(const SymplecticContext& other) const {
    return n_ == other.n_ && omega_ == other.omega_;
}

void require_same_context(const ContextPtr& a, const ContextPtr& b) {
    if (a == b) return;
    if (a && b && a->equivalent(*b)) return;
    throw ContextMismatchError();
}

}  // namespace xphase

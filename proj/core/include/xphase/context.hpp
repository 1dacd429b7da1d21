#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xphase/scalar.hpp"

namespace xphase {

/// Variable kinds on the extended phase space: the 2n phase-space
/// coordinates phi^a = (q_i, p_i), their conjugate multipliers lambda_a,
/// the anticommuting ghost pairs (c^a, cbar_a), and the formal hbar.
enum class VarKind : unsigned char { Phi, Lambda, GhostC, GhostCbar, Hbar };

struct Variable {
    VarKind kind = VarKind::Hbar;
    int index = 0;  // in [0, 2n); ignored for Hbar

    bool odd() const { return kind == VarKind::GhostC || kind == VarKind::GhostCbar; }

    friend bool operator==(const Variable&, const Variable&) = default;
};

class SymplecticContext;
using ContextPtr = std::shared_ptr<const SymplecticContext>;

/// Dimension bookkeeping and the symplectic matrix omega^{ab}. Owns the
/// variable naming conventions and the layout of monomial exponent slots.
/// Immutable after construction; shared by every value built over it.
class SymplecticContext : public std::enable_shared_from_this<SymplecticContext> {
public:
    /// Standard block form: omega^{q_i p_i} = +1, omega^{p_i q_i} = -1.
    static ContextPtr standard(int n);

    /// Custom antisymmetric invertible omega (row-major 2n x 2n).
    static ContextPtr with_omega(int n, std::vector<Scalar> omega);

    int n() const { return n_; }
    int dim() const { return 2 * n_; }

    const Scalar& omega(int a, int b) const { return omega_[a * dim() + b]; }

    /// Number of commuting exponent slots: phi (2n), lambda (2n), hbar (1).
    int commuting_slots() const { return 4 * n_ + 1; }

    /// Exponent slot of a commuting variable.
    int slot(const Variable& v) const;
    Variable variable_at_slot(int slot) const;

    /// Ghost bit: c^a -> a, cbar_a -> 2n + a. The global canonical order is
    /// c^0 < c^1 < ... < cbar_0 < cbar_1 < ...
    int ghost_bit(const Variable& v) const;
    Variable variable_at_ghost_bit(int bit) const;

    std::string name(const Variable& v) const;
    std::optional<Variable> lookup(std::string_view name) const;

    bool equivalent(const SymplecticContext& other) const;

private:
    SymplecticContext(int n, std::vector<Scalar> omega);

    int n_;
    std::vector<Scalar> omega_;
};

/// Throws ContextMismatchError unless both contexts describe the same space.
void require_same_context(const ContextPtr& a, const ContextPtr& b);

}  // namespace xphase

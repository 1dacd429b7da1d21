#pragma once

#include <complex>
#include <vector>

namespace xphase {

/// Complex wavefunction sampled on a uniform q-grid, with its analytic
/// derivative samples (needed by the boundary-integral checks).
struct GridWavefunction {
    double q_min = 0.0;
    double q_max = 0.0;
    int nq = 0;
    double hbar = 1.0;
    std::vector<std::complex<double>> psi;
    std::vector<std::complex<double>> dpsi;

    double dq() const { return (q_max - q_min) / (nq - 1); }
    double q_at(int i) const { return q_min + i * dq(); }
    double boundary_abs() const;
    /// Trapezoid L2 norm of the samples.
    double l2_norm() const;
};

/// Harmonic-oscillator eigenstate (m = omega = 1) used as the standard
/// test state family.
struct HermiteState {
    int level = 0;
    double hbar = 1.0;

    double psi(double q) const;
    double dpsi(double q) const;

    /// Sample on a symmetric grid wide enough for the boundary-decay
    /// invariant; pass nq odd to put q = 0 on the grid.
    GridWavefunction sample(int nq) const;
    GridWavefunction sample(int nq, double half_width) const;
};

/// Real phase-space distribution on a uniform q x p grid.
struct WignerGrid {
    double q_min = 0.0, q_max = 0.0;
    double p_min = 0.0, p_max = 0.0;
    int nq = 0, np = 0;
    double hbar = 1.0;
    std::vector<double> rho;  // row-major, [iq * np + ip]
    double max_imag_residue = 0.0;

    double dq() const { return (q_max - q_min) / (nq - 1); }
    double dp() const { return (p_max - p_min) / (np - 1); }
    double q_at(int i) const { return q_min + i * dq(); }
    double p_at(int j) const { return p_min + j * dp(); }
    double at(int iq, int ip) const { return rho[static_cast<std::size_t>(iq) * np + ip]; }
    /// Value at the grid point nearest to (q, p).
    double nearest(double q, double p) const;
};

/// rho(q,p) = (1/2pi) Int psi*(q - hbar s/2) e^{-ips} psi(q + hbar s/2) ds
/// by trapezoid quadrature over s with the range set by the q-domain.
/// Throws when the boundary-decay invariant |psi| < 1e-10 fails.
WignerGrid wigner_transform(const GridWavefunction& wf, int np, double p_min, double p_max);
WignerGrid wigner_transform(const GridWavefunction& wf);

struct NormalizationReport {
    double integral = 0.0;     // expect 1 for a unit-norm pure state
    double integral_sq = 0.0;  // expect 1/(2 pi hbar)
    double expected_sq = 0.0;
    double hbar = 0.0;
};
NormalizationReport check_normalization(const WignerGrid& grid);

/// sup_q | Int rho dp - |psi(q)|^2 |: the standard marginal property,
/// used as an independent correctness oracle for the transform.
double marginal_max_error(const WignerGrid& grid, const GridWavefunction& wf);

/// Compares the two sides of the quantisation rule acting on the Wigner
/// function: A = p*rho (multiplication side) and B = -i hbar d_q rho
/// (derivative side, 4th-order finite differences), against the boundary
/// integrals J-/J+ they equal by integration by parts:
///   A = (-i hbar/2) J-,   B = (-i hbar) J+,
///   J-/+ = (1/2pi) Int [ -/+ dpsi*(q-u) psi(q+u) + psi*(q-u) dpsi(q+u) ] e^{-ips} ds.
/// Norms are sup-norms over the interior (two rows/columns clipped).
struct QuantisationRuleReport {
    double lhs_identity_error = 0.0;  // || A - c_minus J_minus ||
    double rhs_identity_error = 0.0;  // || B - c_plus J_plus ||
    double mismatch_norm = 0.0;       // || A - B ||
    double a_norm = 0.0;              // || A ||
    double mismatch_ratio = 0.0;      // mismatch_norm / a_norm
};
QuantisationRuleReport quantisation_rule_check(const GridWavefunction& wf, int np, double p_min,
                                               double p_max);
QuantisationRuleReport quantisation_rule_check(const GridWavefunction& wf);

}  // namespace xphase

#include "xphase/wigner.hpp"

#include <cmath>
#include <numbers>

#include "xphase/errors.hpp"

namespace xphase {

namespace {

constexpr double kBoundaryDecay = 1e-10;

using cplx = std::complex<double>;

double trapezoid_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

// Generic s-quadrature: for every (q_i, p_j) sums over the symmetric shift
// index k the pair product supplied by `pair_at(iq, k)` times e^{-i p s_k},
// s_k = 2 k dq / hbar. The shift range is clipped to the q-domain; the
// integrand vanishes there by the boundary-decay invariant.
template <typename PairFn>
std::vector<cplx> s_quadrature(const GridWavefunction& wf, int np, double p_min, double p_max,
                               PairFn&& pair_at) {
    const int nq = wf.nq;
    const double ds = 2.0 * wf.dq() / wf.hbar;
    const double dp = np > 1 ? (p_max - p_min) / (np - 1) : 0.0;
    std::vector<cplx> out(static_cast<std::size_t>(nq) * np, cplx(0.0, 0.0));

    // phase table: e^{-i p_j s_k} for k >= 0
    std::vector<cplx> phase(static_cast<std::size_t>(np) * nq);
    for (int j = 0; j < np; ++j) {
        const double p = p_min + j * dp;
        for (int k = 0; k < nq; ++k) {
            const double arg = -p * k * ds;
            phase[static_cast<std::size_t>(j) * nq + k] = cplx(std::cos(arg), std::sin(arg));
        }
    }

    std::vector<cplx> pair(nq);
    const double prefactor = ds / (2.0 * std::numbers::pi);
    for (int i = 0; i < nq; ++i) {
        const int m = std::min(i, nq - 1 - i);
        for (int k = -m; k <= m; ++k) pair[k + m] = pair_at(i, k);
        for (int j = 0; j < np; ++j) {
            const cplx* ph = &phase[static_cast<std::size_t>(j) * nq];
            cplx acc(0.0, 0.0);
            for (int k = -m; k <= m; ++k) {
                const cplx e = k >= 0 ? ph[k] : std::conj(ph[-k]);
                double w = (m > 0 && (k == -m || k == m)) ? 0.5 : 1.0;
                acc += w * pair[k + m] * e;
            }
            out[static_cast<std::size_t>(i) * np + j] = prefactor * acc;
        }
    }
    return out;
}

void require_boundary_decay(const GridWavefunction& wf) {
    if (wf.nq < 2) throw DomainError("wavefunction grid needs at least 2 points");
    if (wf.boundary_abs() >= kBoundaryDecay) {
        throw DomainError("boundary decay violated: |psi| at the domain edge is not < 1e-10");
    }
}

}  // namespace

double GridWavefunction::boundary_abs() const {
    if (psi.empty()) return 0.0;
    return std::max(std::abs(psi.front()), std::abs(psi.back()));
}

double GridWavefunction::l2_norm() const {
    double acc = 0.0;
    for (int i = 0; i < nq; ++i) acc += trapezoid_weight(i, nq) * std::norm(psi[i]);
    return std::sqrt(acc * dq());
}

double HermiteState::psi(double q) const {
    const double x = q / std::sqrt(hbar);
    // normalized Hermite functions phi_k(x), stable upward recurrence
    double phi_prev = 0.0;
    double phi = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    for (int k = 1; k <= level; ++k) {
        double next = std::sqrt(2.0 / k) * x * phi - std::sqrt((k - 1.0) / k) * phi_prev;
        phi_prev = phi;
        phi = next;
    }
    return phi * std::pow(hbar, -0.25);
}

double HermiteState::dpsi(double q) const {
    const double x = q / std::sqrt(hbar);
    // phi_n'(x) = sqrt(2n) phi_{n-1}(x) - x phi_n(x)
    double phi_prev = 0.0;
    double phi = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    for (int k = 1; k <= level; ++k) {
        double next = std::sqrt(2.0 / k) * x * phi - std::sqrt((k - 1.0) / k) * phi_prev;
        phi_prev = phi;
        phi = next;
    }
    const double dphi = (level > 0 ? std::sqrt(2.0 * level) * phi_prev : 0.0) - x * phi;
    return dphi * std::pow(hbar, -0.75);
}

GridWavefunction HermiteState::sample(int nq) const {
    const double half_width = (7.5 + 1.5 * level) * std::sqrt(hbar);
    return sample(nq, half_width);
}

GridWavefunction HermiteState::sample(int nq, double half_width) const {
    if (level < 0) throw DomainError("Hermite level must be >= 0");
    if (hbar <= 0) throw DomainError("hbar must be positive");
    GridWavefunction wf;
    wf.q_min = -half_width;
    wf.q_max = half_width;
    wf.nq = nq;
    wf.hbar = hbar;
    wf.psi.resize(nq);
    wf.dpsi.resize(nq);
    for (int i = 0; i < nq; ++i) {
        const double q = wf.q_at(i);
        wf.psi[i] = psi(q);
        wf.dpsi[i] = dpsi(q);
    }
    return wf;
}

double WignerGrid::nearest(double q, double p) const {
    int iq = static_cast<int>(std::lround((q - q_min) / dq()));
    int ip = static_cast<int>(std::lround((p - p_min) / dp()));
    iq = std::clamp(iq, 0, nq - 1);
    ip = std::clamp(ip, 0, np - 1);
    return at(iq, ip);
}

WignerGrid wigner_transform(const GridWavefunction& wf) {
    return wigner_transform(wf, wf.nq, wf.q_min, wf.q_max);
}

WignerGrid wigner_transform(const GridWavefunction& wf, int np, double p_min, double p_max) {
    require_boundary_decay(wf);
    WignerGrid grid;
    grid.q_min = wf.q_min;
    grid.q_max = wf.q_max;
    grid.p_min = p_min;
    grid.p_max = p_max;
    grid.nq = wf.nq;
    grid.np = np;
    grid.hbar = wf.hbar;
    auto values = s_quadrature(wf, np, p_min, p_max, [&](int i, int k) {
        return std::conj(wf.psi[i - k]) * wf.psi[i + k];
    });
    grid.rho.resize(values.size());
    double imag = 0.0;
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        grid.rho[idx] = values[idx].real();
        imag = std::max(imag, std::abs(values[idx].imag()));
    }
    grid.max_imag_residue = imag;
    return grid;
}

NormalizationReport check_normalization(const WignerGrid& grid) {
    NormalizationReport report;
    report.hbar = grid.hbar;
    report.expected_sq = 1.0 / (2.0 * std::numbers::pi * grid.hbar);
    double acc = 0.0, acc_sq = 0.0;
    for (int i = 0; i < grid.nq; ++i) {
        const double wi = trapezoid_weight(i, grid.nq);
        for (int j = 0; j < grid.np; ++j) {
            const double w = wi * trapezoid_weight(j, grid.np);
            const double r = grid.at(i, j);
            acc += w * r;
            acc_sq += w * r * r;
        }
    }
    const double cell = grid.dq() * grid.dp();
    report.integral = acc * cell;
    report.integral_sq = acc_sq * cell;
    return report;
}

double marginal_max_error(const WignerGrid& grid, const GridWavefunction& wf) {
    double worst = 0.0;
    for (int i = 0; i < grid.nq; ++i) {
        double acc = 0.0;
        for (int j = 0; j < grid.np; ++j) acc += trapezoid_weight(j, grid.np) * grid.at(i, j);
        acc *= grid.dp();
        worst = std::max(worst, std::abs(acc - std::norm(wf.psi[i])));
    }
    return worst;
}

QuantisationRuleReport quantisation_rule_check(const GridWavefunction& wf) {
    return quantisation_rule_check(wf, wf.nq, wf.q_min, wf.q_max);
}

QuantisationRuleReport quantisation_rule_check(const GridWavefunction& wf, int np, double p_min,
                                               double p_max) {
    WignerGrid grid = wigner_transform(wf, np, p_min, p_max);
    const int nq = grid.nq;
    const double h = grid.dq();
    const double hbar = grid.hbar;

    // A = p * rho; B = -i hbar d_q rho (4th-order FD, one-sided closures)
    std::vector<double> a(grid.rho.size()), drho(grid.rho.size());
    for (int j = 0; j < np; ++j) {
        const double p = grid.p_at(j);
        for (int i = 0; i < nq; ++i) a[static_cast<std::size_t>(i) * np + j] = p * grid.at(i, j);
    }
    auto r = [&](int i, int j) { return grid.at(i, j); };
    for (int j = 0; j < np; ++j) {
        for (int i = 0; i < nq; ++i) {
            double d;
            if (i >= 2 && i <= nq - 3) {
                d = (-r(i + 2, j) + 8 * r(i + 1, j) - 8 * r(i - 1, j) + r(i - 2, j)) / (12 * h);
            } else if (i < 2) {
                d = (-25 * r(i, j) + 48 * r(i + 1, j) - 36 * r(i + 2, j) + 16 * r(i + 3, j) -
                     3 * r(i + 4, j)) /
                    (12 * h);
            } else {
                d = (25 * r(i, j) - 48 * r(i - 1, j) + 36 * r(i - 2, j) - 16 * r(i - 3, j) +
                     3 * r(i - 4, j)) /
                    (12 * h);
            }
            drho[static_cast<std::size_t>(i) * np + j] = d;
        }
    }

    // boundary integrals J-/J+
    auto j_minus = s_quadrature(wf, np, p_min, p_max, [&](int i, int k) {
        return -std::conj(wf.dpsi[i - k]) * wf.psi[i + k] + std::conj(wf.psi[i - k]) * wf.dpsi[i + k];
    });
    auto j_plus = s_quadrature(wf, np, p_min, p_max, [&](int i, int k) {
        return std::conj(wf.dpsi[i - k]) * wf.psi[i + k] + std::conj(wf.psi[i - k]) * wf.dpsi[i + k];
    });
    const cplx c_minus(0.0, -0.5 * hbar);
    const cplx c_plus(0.0, -hbar);

    QuantisationRuleReport report;
    const int clip = 2;  // FD closures excluded from the norms
    for (int i = clip; i < nq - clip; ++i) {
        for (int j = clip; j < np - clip; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * np + j;
            const cplx A(a[idx], 0.0);
            const cplx B(0.0, -hbar * drho[idx]);
            report.lhs_identity_error =
                std::max(report.lhs_identity_error, std::abs(A - c_minus * j_minus[idx]));
            report.rhs_identity_error =
                std::max(report.rhs_identity_error, std::abs(B - c_plus * j_plus[idx]));
            report.mismatch_norm = std::max(report.mismatch_norm, std::abs(A - B));
            report.a_norm = std::max(report.a_norm, std::abs(A));
        }
    }
    report.mismatch_ratio = report.a_norm > 0 ? report.mismatch_norm / report.a_norm : 0.0;
    return report;
}

}  // namespace xphase

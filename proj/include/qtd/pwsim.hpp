#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qtd/dilation.hpp"
#include "qtd/errors.hpp"

// Conditional-probability simulation of two relativistic clock particles.
//
// Each particle carries an external momentum degree of freedom (discretized
// on a grid) and an internal d-level clock with H_C = diag(0, eps, ...,
// (d-1) eps) in mc^2 units.  The total Hamiltonian is diagonal in the
// (momentum grid) x (clock level) product basis with eigenvalues
// sqrt(p^2 + (1 + n eps)^2), so evolution is pure phase multiplication.
//
// The distribution of clock-A readings conditioned on clock B reading tau_b
// is the ratio of two group averages over coordinate time t,
//
//   P(tau_k | tau_b) = Int dt f_A(tau_k, t) f_B(tau_b, t) / Int dt f_B(tau_b, t),
//
// where f_X(tau, t) is the Born weight of the covariant clock state |tau> in
// particle X at time t.  Orthogonality of the coordinate-time kets collapses
// the double group average to this single integral; the integrand is a
// trigonometric polynomial in t, evaluated by trapezoid quadrature over one
// recurrence of the clock spectrum, sampled above the Nyquist rate of the
// largest spectral gap.  Because sum_k f_A(tau_k, t) = 1 identically, the
// conditional distribution is normalized for any quadrature window.
//
// Times here are natural (hbar/mc^2); a conditioning value is meaningful as
// a fraction of the clock period T = 2 pi / eps.  Everything is
// single-threaded and deterministic; the t-loop is embarrassingly parallel
// if that ever becomes worth the bother.

namespace qtd {

/// d-level clock with evenly spaced spectrum E_n = n * energy_step (mc^2
/// units) and covariant time states |tau_k> = d^{-1/2} sum_n e^{-i E_n
/// tau_k} |E_n> at the readings tau_k = k T / d, T = 2 pi / energy_step.
/// The d readings form an orthonormal basis (a projective POVM), and
/// e^{-i tau' H_C} |tau> = |tau + tau'>.
struct FiniteClock {
    FiniteClock(int dim, double energy_step);
    int dim;
    double energy_step;
    double period() const;
    double reading(int k) const;
};

/// Coefficients of |tau> in the energy basis, for any real tau.
std::vector<std::complex<double>> clock_state(const FiniteClock& c, double tau);

/// Group-averaging window [t_lo, t_hi] with `panels` trapezoid panels.
struct TWindow {
    double t_lo;
    double t_hi;
    int panels;
};

/// One particle: grid, external amplitudes, clock, joint state, spectrum.
struct ClockedParticle {
    std::vector<double> grid;                      ///< momentum samples p_j
    std::vector<double> weights;                   ///< trapezoid weights
    std::vector<std::complex<double>> packet;      ///< external amplitudes at p_j
    FiniteClock clock;
    std::vector<std::complex<double>> clock_init;  ///< internal state, energy basis
    std::vector<std::complex<double>> state;       ///< joint amplitudes [j*dim + n]
    std::vector<double> energy;                    ///< sqrt(p_j^2 + (1+n eps)^2), [j*dim + n]
    std::vector<double> omega;                     ///< energy - energy(n=0); the per-column
                                                   ///< common phase drops out of every Born weight
};

struct PwBuildOptions {
    int dim_a = 64;
    int dim_b = 64;
    int grid_points = 256;
    double epsilon = 0.0;         ///< <= 0 selects the default 1e-3 / (max dim - 1)
    double clock_offset = 0.0;    ///< initialize both clocks at |tau = clock_offset>
    double window_periods = 1.0;  ///< whole recurrence periods (units of gamma_ref T)
    double nyquist_factor = 4.0;  ///< oversampling relative to the largest spectral gap
};

struct PwModel {
    ClockedParticle a;
    ClockedParticle b;
    Scenario scenario;
    TWindow window;
    double gamma_ref;        ///< gamma(pbar_b); sets the window length scale
    double bound_rel;        ///< tau_b-proportional part of the accuracy bound
    double bound_drift_abs;  ///< A-reading drift per clock-B period image
    double bound_wrap_abs;   ///< clock wrap-around wobble amplitude

    /// A-priori bound on |mean reading - gamma_eff_inv tau_b| for a
    /// conditioning time tau_b.  Combines the leading-order truncation gap
    /// and rate dressing (both proportional to tau_b), the tick-drift
    /// envelope from the finite reading grids (scaled by bound_drift_abs,
    /// growing near the window seam at tau_b ~ 0 or ~ T), and the
    /// wrap-around wobble, which vanishes when tau_b sits on a reading of
    /// the coarser clock and peaks a quarter cell off that grid.  All
    /// coefficients are calibrated against measured convergence.
    double mean_error_bound(double tau_b) const;
};

/// Discretizes a scenario.  Grids span every packet center +- 8 Delta with at
/// least 8 points per Delta; clock dims >= 8; eps (max dim - 1) <= 0.1.
/// Violations raise ConfigError naming the bound.  Both clocks start in
/// |tau = clock_offset> (offset 0 by default).
PwModel build_model(const Scenario& sc, const PwBuildOptions& opt = {});

/// Distribution over clock-A readings conditioned on clock B showing tau_b.
/// `numerators` and `denominator` are the unnormalized group averages;
/// probabilities = numerators / denominator.  Mixtures combine those parts
/// separately, never the normalized probabilities.
struct ConditionalDistribution {
    std::vector<double> tau_values;
    std::vector<double> probabilities;
    std::vector<double> numerators;
    double denominator;
    double tau_b;
    double period;
};

/// Conditions on 0 <= tau_b < clock B's period.  Throws std::domain_error on
/// a conditioning time outside that range or on a null conditioning event.
ConditionalDistribution conditional_distribution(const PwModel& m, double tau_b);

/// Same, for several conditioning times in one pass over the quadrature
/// window (the costly clock-A transforms are shared).
std::vector<ConditionalDistribution> conditional_distributions(const PwModel& m,
                                                               std::span<const double> tau_bs);

/// Density-matrix mixture weight*m1 + (1-weight)*m2: numerators and
/// denominators mix separately.  The models must be identical apart from
/// particle A's packet amplitudes (same grids, dims, eps, window, B state).
ConditionalDistribution mixture_distribution(const PwModel& m1, const PwModel& m2,
                                             double weight, double tau_b);

struct MeanStats {
    double mean;          ///< circular mean, unwrapped to the branch nearest tau_b
    double circular_std;  ///< sqrt(-2 ln |R|) scaled to time units
    bool ambiguous;       ///< spread exceeds a quarter period
};

MeanStats mean_stats(const ConditionalDistribution& cd);
double mean_reading(const ConditionalDistribution& cd);

/// Time-energy uncertainty check: spread of the continuous covariant reading
/// distribution (d/T) |<tau|psi>|^2 against the spread of M = m + H_C/c^2,
/// compared with the hbar / (2 c^2) bound (0.5 in natural units).
struct UncertaintyReport {
    double delta_t;
    double delta_m;
    double product;
    double bound;
    bool applicable;    ///< false for (near-)eigenstates: delta_m ~ 0, check skipped
    bool seam_warning;  ///< probability mass straddles the chart seam opposite the mean
};

UncertaintyReport uncertainty_diagnostic(const FiniteClock& c,
                                         std::span<const std::complex<double>> state);

/// Diagnostic for the model's clock-A initial state.
UncertaintyReport uncertainty_diagnostic(const PwModel& m);

}  // namespace qtd

#pragma once

#include "qtd/wavepacket.hpp"

namespace qtd {

/// Clock A in a superposition of momentum packets, clock B in a single packet
/// of the same width, observed for a proper duration tau_b on B.  tau_b is a
/// pure scale factor: whatever unit it carries is the unit of mean_tau_a.
struct Scenario {
    Scenario(SuperpositionSpec sup_a, double pbar_b, double tau_b);
    SuperpositionSpec sup_a;
    double pbar_b;
    double delta;  ///< shared packet width, copied from sup_a (validated equal)
    double tau_b;
};

struct DilationResult {
    double k_classical;
    double k_quantum;
    double gamma_eff_inv;  ///< 1 - k_classical - k_quantum
    double mean_tau_a;     ///< gamma_eff_inv * tau_b
};

/// Lorentz factor sqrt(1 + p^2) for momentum p in mc units.
double gamma_factor(double pbar);

/// Classical two-branch dilation coefficient
///   (pbar_a^2 cos^2 theta + pbar_a'^2 sin^2 theta - pbar_b^2) / 2.
double k_classical(double theta, double pbar_a, double pbar_a_prime, double pbar_b);

/// Quantum correction from branch interference:
///   [sin(2 theta) cos(phi) / (8 N)] e^{-dp^2/(4 Delta^2)}
///     [2 (pbar_a'^2 - pbar_a^2) cos(2 theta) - dp^2],   dp = pbar_a' - pbar_a.
/// When (dp / 2 Delta)^2 > 700 the overlap factor is assembled in log space
/// so the sign survives even when the magnitude underflows.
double k_quantum(const SuperpositionSpec& s);

/// Full leading-order result for a scenario.
DilationResult dilation_result(const Scenario& sc);

/// Single-packet special-relativistic baseline (gamma_b / gamma_a) tau_b.
double sr_baseline(double pbar_a, double pbar_b, double tau_b);

}  // namespace qtd

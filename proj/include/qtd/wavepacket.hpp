#pragma once

#include <span>
#include <vector>

#include "qtd/errors.hpp"

namespace qtd {

/// Normalizations below this floor are treated as null states.
inline constexpr double kNormalizationFloor = 1e-9;

/// Gaussian momentum wave packet, amplitude convention
///   psi(p) = (pi Delta^2)^(-1/4) exp(-(p - pbar)^2 / (2 Delta^2)),
/// so that |psi|^2 integrates to 1 and two packets of equal width separated
/// by dp overlap with <a|b> = exp(-dp^2 / (4 Delta^2)).  Delta is the
/// amplitude width: the momentum-density standard deviation is Delta/sqrt(2).
/// All momenta in p/mc units.
struct WavePacket {
    WavePacket(double pbar, double delta);
    double pbar;
    double delta;
};

/// Two-branch coherent superposition of equal-width packets,
///   psi = (cos(theta) |packet_a> + e^{i phi} sin(theta) |packet_a_prime>) / sqrt(N).
struct SuperpositionSpec {
    SuperpositionSpec(double theta, double phi, WavePacket a, WavePacket a_prime);
    double theta;
    double phi;
    WavePacket packet_a;
    WavePacket packet_a_prime;
};

/// Amplitude of a single packet at momentum p.
double gaussian_amplitude(const WavePacket& w, double p);

/// <a|b> for equal-width packets; requires a.delta == b.delta bitwise.
/// Symmetric, in (0, 1], equal to exp(-(b.pbar - a.pbar)^2 / (4 delta^2)).
double overlap(const WavePacket& a, const WavePacket& b);

/// Branch-interference weight sin(2 theta) cos(phi).  Magnitudes at or below
/// 1e-15 are flushed to exactly zero so that numerically degenerate mixtures
/// (theta = pi/2 passed as a rounded double, phi = pi/2, ...) behave as exact
/// mixtures downstream.
double coherence_weight(double theta, double phi);

/// N = 1 + sin(2 theta) cos(phi) exp(-(pbar' - pbar)^2 / (4 Delta^2)).
/// Throws NearNullStateError when N < kNormalizationFloor.
double normalization(const SuperpositionSpec& s);

/// <p^2> of the normalized superposition, evaluated by Gauss-Hermite
/// quadrature (64 nodes per Gaussian density term).  The closed form
/// [cos^2 pbar^2 + sin^2 pbar'^2 + sin(2 theta) cos(phi) w mu^2]/N + Delta^2/2
/// is reserved for cross-checks in the tests.
double second_moment(const SuperpositionSpec& s);

/// Normalized momentum density |psi(p)|^2 / N on the given grid.
/// The grid must be non-empty and strictly increasing.
std::vector<double> sample_density(const SuperpositionSpec& s, std::span<const double> grid);

}  // namespace qtd

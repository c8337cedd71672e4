#include "qtd/wavepacket.hpp"

#include <cmath>

#include "qtd/quadrature.hpp"

namespace qtd {

WavePacket::WavePacket(double pbar_, double delta_) : pbar(pbar_), delta(delta_) {
    if (!(delta > 0.0)) throw std::domain_error("WavePacket: delta must be positive");
    if (!std::isfinite(pbar)) throw std::domain_error("WavePacket: pbar must be finite");
}

SuperpositionSpec::SuperpositionSpec(double theta_, double phi_, WavePacket a, WavePacket a_prime)
    : theta(theta_), phi(phi_), packet_a(a), packet_a_prime(a_prime) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw std::domain_error("SuperpositionSpec: angles must be finite");
    if (packet_a.delta != packet_a_prime.delta)
        throw std::domain_error("SuperpositionSpec: packet widths must match");
}

double gaussian_amplitude(const WavePacket& w, double p) {
    const double x = (p - w.pbar) / w.delta;
    return std::pow(M_PI * w.delta * w.delta, -0.25) * std::exp(-0.5 * x * x);
}

double overlap(const WavePacket& a, const WavePacket& b) {
    if (a.delta != b.delta) throw std::domain_error("overlap: packet widths must match");
    const double r = (b.pbar - a.pbar) / (2.0 * a.delta);
    return std::exp(-r * r);
}

double coherence_weight(double theta, double phi) {
    const double s = std::sin(2.0 * theta) * std::cos(phi);
    // Flush doubles-rounding residue (sin(pi) ~ 1.2e-16) so degenerate
    // mixtures are exact mixtures.
    return (std::abs(s) <= 1e-15) ? 0.0 : s;
}

double normalization(const SuperpositionSpec& s) {
    const double n = 1.0 + coherence_weight(s.theta, s.phi) * overlap(s.packet_a, s.packet_a_prime);
    if (n < kNormalizationFloor)
        throw NearNullStateError("normalization: N below the 1e-9 floor (destructive interference)");
    return n;
}

namespace {

// integral p^2 g_a(p) g_b(p) dp by Gauss-Hermite about the pair center.
// The node exponent x^2 - [(p-pbar_a)^2 + (p-pbar_b)^2] / (2 delta^2) is kept
// in combined form: it is constant in exact arithmetic, so no overflow and no
// cancellation regardless of the separation.
double pair_second_moment(const WavePacket& a, const WavePacket& b) {
    const auto& rule = gauss_hermite_64();
    const double delta = a.delta;
    const double mu = 0.5 * (a.pbar + b.pbar);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    double acc = 0.0;
    for (size_t i = 0; i < rule.node.size(); ++i) {
        const double x = rule.node[i];
        const double p = mu + delta * x;
        const double ua = (p - a.pbar) / delta;
        const double ub = (p - b.pbar) / delta;
        const double expo = x * x - 0.5 * (ua * ua + ub * ub);
        acc += rule.weight[i] * p * p * inv_sqrt_pi * std::exp(expo);
    }
    return acc;
}

}  // namespace

double second_moment(const SuperpositionSpec& s) {
    const double n = normalization(s);
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    const double cw = coherence_weight(s.theta, s.phi);
    double acc = c * c * pair_second_moment(s.packet_a, s.packet_a);
    acc += sn * sn * pair_second_moment(s.packet_a_prime, s.packet_a_prime);
    if (cw != 0.0) acc += cw * pair_second_moment(s.packet_a, s.packet_a_prime);
    return acc / n;
}

std::vector<double> sample_density(const SuperpositionSpec& s, std::span<const double> grid) {
    if (grid.empty()) throw std::domain_error("sample_density: empty grid");
    for (size_t j = 0; j + 1 < grid.size(); ++j)
        if (!(grid[j] < grid[j + 1]))
            throw std::domain_error("sample_density: grid must be strictly increasing");

    const double n = normalization(s);
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    const double cw = coherence_weight(s.theta, s.phi);

    std::vector<double> dens(grid.size());
    for (size_t j = 0; j < grid.size(); ++j) {
        const double ga = gaussian_amplitude(s.packet_a, grid[j]);
        const double gb = gaussian_amplitude(s.packet_a_prime, grid[j]);
        dens[j] = (c * c * ga * ga + sn * sn * gb * gb + cw * ga * gb) / n;
    }
    return dens;
}

}  // namespace qtd

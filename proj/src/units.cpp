#include "qtd/units.hpp"

#include <cmath>

namespace qtd {

NaturalValue momentum_si_to_natural(double p_si, double mass_kg) {
    if (!(mass_kg > 0.0))
        throw std::domain_error("momentum_si_to_natural: mass must be positive");
    return {p_si / (mass_kg * codata().c), Kind::momentum_over_mc};
}

NaturalValue velocity_to_momentum(double v_m_per_s) {
    const double beta = v_m_per_s / codata().c;
    if (!(std::abs(beta) < 1.0))
        throw std::domain_error("velocity_to_momentum: |v| must be below c");
    return {beta / std::sqrt(1.0 - beta * beta), Kind::momentum_over_mc};
}

double momentum_to_velocity(double p_over_mc) {
    return codata().c * p_over_mc / std::sqrt(1.0 + p_over_mc * p_over_mc);
}

}  // namespace qtd

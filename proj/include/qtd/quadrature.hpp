#pragma once

#include <vector>

namespace qtd {

/// Gauss-Hermite rule for the weight e^{-x^2} on (-inf, inf):
/// integral f(x) e^{-x^2} dx ~= sum_i weight[i] f(node[i]).
/// Exact for polynomials of degree <= 2n-1.
struct GaussHermiteRule {
    std::vector<double> node;
    std::vector<double> weight;
};

/// Nodes and Christoffel weights of the n-point rule, computed from the
/// orthonormal Hermite recurrence (bisection brackets from root interlacing,
/// then Newton).  n >= 1; throws std::domain_error otherwise.
GaussHermiteRule gauss_hermite(int n);

/// The 64-point rule used for wave-packet moments, computed once and cached.
const GaussHermiteRule& gauss_hermite_64();

/// Trapezoid weights for an arbitrary strictly increasing grid; the returned
/// vector pairs with the grid for sums approximating integral f dp.
std::vector<double> trapezoid_weights(const std::vector<double>& grid);

}  // namespace qtd

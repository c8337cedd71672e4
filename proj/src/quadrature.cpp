#include "qtd/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace qtd {

namespace {

// Orthonormal Hermite polynomials for the weight e^{-x^2}:
//   h_0 = pi^{-1/4},  h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}.
// Returns h_n(x); if dsum is non-null also accumulates sum_{k<n} h_k(x)^2
// (the reciprocal of the Christoffel weight).
double hermite_ortho(int n, double x, double* dsum) {
    double hm = 0.0;
    double h = std::pow(M_PI, -0.25);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += h * h;
        const double hn = x * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(double(k) / (k + 1)) * hm;
        hm = h;
        h = hn;
    }
    if (dsum) *dsum = sum;
    return h;
}

}  // namespace

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw std::domain_error("gauss_hermite: n must be >= 1");

    GaussHermiteRule rule;
    rule.node.resize(n);
    rule.weight.resize(n);

    // Roots of h_k interlace those of h_{k+1}; build the root ladder up from
    // h_1 (single root at 0) so every level has guaranteed brackets.
    std::vector<double> prev{0.0};
    if (n == 1) {
        prev = {0.0};
    } else {
        for (int k = 2; k <= n; ++k) {
            std::vector<double> cur(k);
            const double outer = std::sqrt(2.0 * k + 1.0) + 1.0;
            for (int i = 0; i < k; ++i) {
                double lo = (i == 0) ? -outer : prev[i - 1];
                double hi = (i == k - 1) ? outer : prev[i];
                double flo = hermite_ortho(k, lo, nullptr);
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = hermite_ortho(k, mid, nullptr);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                double x = 0.5 * (lo + hi);
                // Newton polish: h_k'(x) = sqrt(2k) h_{k-1}(x).
                for (int it = 0; it < 4; ++it) {
                    const double f = hermite_ortho(k, x, nullptr);
                    const double fp = std::sqrt(2.0 * k) * hermite_ortho(k - 1, x, nullptr);
                    if (fp == 0.0) break;
                    x -= f / fp;
                }
                cur[i] = x;
            }
            prev = std::move(cur);
        }
    }

    for (int i = 0; i < n; ++i) {
        double dsum = 0.0;
        hermite_ortho(n, prev[i], &dsum);
        rule.node[i] = prev[i];
        rule.weight[i] = 1.0 / dsum;  // Christoffel number
    }
    return rule;
}

const GaussHermiteRule& gauss_hermite_64() {
    static const GaussHermiteRule rule = gauss_hermite(64);
    return rule;
}

std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
    const size_t n = grid.size();
    if (n < 2) throw std::domain_error("trapezoid_weights: need at least two points");
    std::vector<double> w(n, 0.0);
    for (size_t j = 0; j + 1 < n; ++j) {
        const double h = grid[j + 1] - grid[j];
        if (!(h > 0.0)) throw std::domain_error("trapezoid_weights: grid must be strictly increasing");
        w[j] += 0.5 * h;
        w[j + 1] += 0.5 * h;
    }
    return w;
}

}  // namespace qtd

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qtd/dilation.hpp"

// Parameter sweeps of the quantum dilation coefficient over the mean-momentum
// / branch-difference plane: beta = (pbar_a + pbar_a') / mc, diff = (pbar_a'
// - pbar_a) / mc.  Clock B is taken at rest (pbar_b = 0) for the classical
// column; k_quantum does not depend on pbar_b at all.

namespace qtd {

struct DiffRange {
    double lo;
    double hi;
    double step;
};

struct SweepPlan {
    std::vector<double> beta_values;
    DiffRange diff;
    double delta;
    double theta;
    double phi;
};

enum class RowStatus { ok, near_null };

struct SweepRow {
    double beta;
    double diff;
    double k_classical;
    double k_quantum;
    double gamma_eff_inv;
    RowStatus status;
};

/// Rows in beta-major, diff-minor order.  Near-null normalizations produce a
/// row with NaN coefficients and status near_null rather than an error.
std::vector<SweepRow> run_sweep(const SweepPlan& plan);

struct OptimalPoint {
    double diff_star;
    double k_quantum_star;  ///< signed value at the optimum
};

/// argmax over diff in [lo, hi] of |k_quantum| at fixed beta: a 200-point
/// coarse scan brackets the maximum, golden-section refines it.  diff_star
/// is accurate to 1e-4 (the refinement tolerance is far tighter); exact ties
/// resolve toward smaller diff.  Throws std::domain_error when |k_quantum|
/// stays below 1e-30 across the whole bracket.
OptimalPoint optimal_difference(double beta, double delta, double theta, double phi,
                                double lo, double hi);

/// CSV with header `beta,diff,k_classical,k_quantum,gamma_eff_inv,status`,
/// 17 significant digits, LF line endings.  Parsing such a file reproduces
/// the rows bit-exactly.
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// CSV with header `beta,diff_star,k_quantum_star`, one row per beta.
struct OptimalRow {
    double beta;
    double diff_star;
    double k_quantum_star;
};
void emit_optimal_csv(const std::vector<OptimalRow>& rows, const std::filesystem::path& path);

/// gnuplot script plotting |k_quantum| against diff, one series per beta,
/// plus the optimal-difference trace, from the two CSVs above.
void emit_plot_script(const std::filesystem::path& script_path,
                      const std::filesystem::path& sweep_csv,
                      const std::filesystem::path& optimal_csv,
                      const std::vector<double>& betas);

}  // namespace qtd

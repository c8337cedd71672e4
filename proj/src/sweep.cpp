#include "qtd/sweep.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "qtd/format.hpp"

namespace qtd {

namespace {

constexpr double kNullObjectiveFloor = 1e-30;

SuperpositionSpec pair_spec(double beta, double diff, double delta, double theta, double phi) {
    const double pa = 0.5 * (beta - diff);
    const double pap = 0.5 * (beta + diff);
    return SuperpositionSpec(theta, phi, WavePacket(pa, delta), WavePacket(pap, delta));
}

double abs_k_quantum(double beta, double diff, double delta, double theta, double phi) {
    return std::abs(k_quantum(pair_spec(beta, diff, delta, theta, phi)));
}

void validate_plan(const SweepPlan& plan) {
    if (plan.beta_values.empty()) throw std::domain_error("run_sweep: no beta values");
    if (!(plan.delta > 0.0)) throw std::domain_error("run_sweep: delta must be positive");
    if (!(plan.diff.step > 0.0)) throw std::domain_error("run_sweep: diff step must be positive");
    if (!(plan.diff.hi >= plan.diff.lo)) throw std::domain_error("run_sweep: empty diff range");
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepPlan& plan) {
    validate_plan(plan);
    std::vector<SweepRow> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double beta : plan.beta_values) {
        // beta-major, diff-minor; the count is fixed up front so accumulated
        // step rounding cannot drop or duplicate the final row.
        const int count = int(std::floor((plan.diff.hi - plan.diff.lo) / plan.diff.step + 0.5)) + 1;
        for (int i = 0; i < count; ++i) {
            const double diff = plan.diff.lo + i * plan.diff.step;
            SweepRow row;
            row.beta = beta;
            row.diff = diff;
            try {
                const auto spec = pair_spec(beta, diff, plan.delta, plan.theta, plan.phi);
                row.k_classical = k_classical(plan.theta, spec.packet_a.pbar,
                                              spec.packet_a_prime.pbar, 0.0);
                row.k_quantum = k_quantum(spec);
                row.gamma_eff_inv = 1.0 - row.k_classical - row.k_quantum;
                row.status = RowStatus::ok;
            } catch (const NearNullStateError&) {
                row.k_classical = nan;
                row.k_quantum = nan;
                row.gamma_eff_inv = nan;
                row.status = RowStatus::near_null;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

OptimalPoint optimal_difference(double beta, double delta, double theta, double phi,
                                double lo, double hi) {
    if (!(delta > 0.0)) throw std::domain_error("optimal_difference: delta must be positive");
    if (!(hi > lo)) throw std::domain_error("optimal_difference: empty bracket");

    // Coarse scan: 200 panels locate the best cell; ties keep the smaller diff.
    constexpr int kCoarse = 200;
    const double h = (hi - lo) / kCoarse;
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i <= kCoarse; ++i) {
        const double v = abs_k_quantum(beta, lo + i * h, delta, theta, phi);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best_val < kNullObjectiveFloor)
        throw std::domain_error("optimal_difference: |k_quantum| below 1e-30 across the bracket");

    // Golden-section on the bracketing cells around the coarse winner.
    double a = lo + std::max(0, best - 1) * h;
    double b = lo + std::min(kCoarse, best + 1) * h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = abs_k_quantum(beta, x1, delta, theta, phi);
    double f2 = abs_k_quantum(beta, x2, delta, theta, phi);
    while (b - a > 1e-7 * std::max(1.0, std::abs(b))) {
        if (f1 > f2 || (f1 == f2 && x1 < x2)) {  // ties toward smaller diff
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = abs_k_quantum(beta, x1, delta, theta, phi);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = abs_k_quantum(beta, x2, delta, theta, phi);
        }
    }
    const double diff_star = 0.5 * (a + b);
    OptimalPoint point;
    point.diff_star = diff_star;
    point.k_quantum_star = k_quantum(pair_spec(beta, diff_star, delta, theta, phi));
    return point;
}

namespace {

std::string status_name(RowStatus s) {
    return s == RowStatus::ok ? "ok" : "near_null";
}

std::ofstream open_lf(const std::filesystem::path& path) {
    // Binary mode keeps the promised LF-only line endings everywhere.
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

}  // namespace

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    auto out = open_lf(path);
    out << "beta,diff,k_classical,k_quantum,gamma_eff_inv,status\n";
    for (const auto& r : rows) {
        out << fmt::csv_row({fmt::g17(r.beta), fmt::g17(r.diff), fmt::g17(r.k_classical),
                             fmt::g17(r.k_quantum), fmt::g17(r.gamma_eff_inv),
                             status_name(r.status)})
            << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void emit_optimal_csv(const std::vector<OptimalRow>& rows, const std::filesystem::path& path) {
    auto out = open_lf(path);
    out << "beta,diff_star,k_quantum_star\n";
    for (const auto& r : rows)
        out << fmt::csv_row({fmt::g17(r.beta), fmt::g17(r.diff_star), fmt::g17(r.k_quantum_star)})
            << "\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void emit_plot_script(const std::filesystem::path& script_path,
                      const std::filesystem::path& sweep_csv,
                      const std::filesystem::path& optimal_csv,
                      const std::vector<double>& betas) {
    auto out = open_lf(script_path);
    out << "# gnuplot script: |k_quantum| against the branch momentum difference,\n"
        << "# one curve per beta, with the per-beta optimum marked.\n"
        << "set datafile separator ','\n"
        << "set xlabel 'diff = (p_Aprime - p_A)/mc'\n"
        << "set ylabel '|k_quantum|'\n"
        << "set key top right\n"
        << "plot \\\n";
    for (size_t i = 0; i < betas.size(); ++i) {
        const std::string b = fmt::g17(betas[i]);
        out << "  '" << sweep_csv.filename().string() << "' using (column(1)==" << b
            << "?column(2):1/0):(abs(column(4))) with lines title 'beta=" << fmt::g6(betas[i])
            << "', \\\n";
    }
    out << "  '" << optimal_csv.filename().string()
        << "' using 2:(abs(column(3))) with points pt 7 title 'optimal difference'\n";
    if (!out) throw std::runtime_error("write failed: " + script_path.string());
}

}  // namespace qtd

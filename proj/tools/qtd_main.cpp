// qtd: command-line surface for the quantum time-dilation library.
//
// Subcommands: dilation (single-scenario coefficients), sweep (coefficient
// tables over the momentum difference, plus the optimal-difference trace),
// oracle (clock-simulation cross-check of the analytic mean), estimate
// (SI feasibility numbers).  Exit codes: 0 success, 1 runtime failure,
// 2 usage or validation error.  Structured output is deterministic: two runs
// with the same configuration are byte-identical.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtd/dilation.hpp"
#include "qtd/errors.hpp"
#include "qtd/experiment.hpp"
#include "qtd/format.hpp"
#include "qtd/pwsim.hpp"
#include "qtd/sweep.hpp"
#include "qtd/units.hpp"

namespace {

namespace fmt = qtd::fmt;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// output plumbing

// Buffers everything, then writes in one shot: either to stdout or to a file
// opened in binary mode so line endings stay LF everywhere.
class Writer {
  public:
    explicit Writer(std::string path) : path_(std::move(path)) {}

    void line(const std::string& s) { buf_ += s, buf_ += '\n'; }

    void flush() const {
        if (path_.empty() || path_ == "-") {
            std::fwrite(buf_.data(), 1, buf_.size(), stdout);
            return;
        }
        std::ofstream f(path_, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + path_ + "' for writing");
        f.write(buf_.data(), std::streamsize(buf_.size()));
        f.flush();
        if (!f) throw std::runtime_error("write failed for '" + path_ + "'");
    }

  private:
    std::string path_;
    std::string buf_;
};

const std::vector<std::string> kFormats = {"human", "csv", "json-lines"};

std::string bool_cell(bool v) { return v ? "true" : "false"; }

// One flat record (ordered key/value pairs) rendered in any of the three
// formats; every value string comes straight from a library result.
struct Record {
    std::vector<std::pair<std::string, std::string>> fields;  // pre-formatted, g17/bool
    std::vector<std::pair<std::string, std::string>> human;   // same keys, g6

    void add(const std::string& key, double v) {
        fields.emplace_back(key, fmt::g17(v));
        human.emplace_back(key, fmt::g6(v));
    }
    void add(const std::string& key, const std::string& v) {
        fields.emplace_back(key, v);
        human.emplace_back(key, v);
    }
    void add(const std::string& key, bool v) {
        fields.emplace_back(key, bool_cell(v));
        human.emplace_back(key, bool_cell(v));
    }
};

std::string record_csv_header(const Record& r) {
    std::vector<std::string> cells;
    for (const auto& [k, v] : r.fields) cells.push_back(k);
    return fmt::csv_row(cells);
}

std::string record_csv_row(const Record& r) {
    std::vector<std::string> cells;
    for (const auto& [k, v] : r.fields) cells.push_back(v);
    return fmt::csv_row(cells);
}

std::string record_json(const Record& r) {
    fmt::JsonLine j;
    for (const auto& [k, v] : r.fields) {
        if (v == "true")
            j.field(k, true);
        else if (v == "false")
            j.field(k, false);
        else if (!v.empty() && (std::isdigit(static_cast<unsigned char>(v[0])) || v[0] == '-' ||
                                v[0] == '+' || v == "nan"))
            j.field_number(k, v);
        else
            j.field(k, v);
    }
    return j.str();
}

// Renders a list of records that share one schema.
void emit_records(Writer& w, const std::string& format, const std::vector<Record>& recs) {
    if (recs.empty()) return;
    if (format == "csv") {
        w.line(record_csv_header(recs.front()));
        for (const auto& r : recs) w.line(record_csv_row(r));
    } else if (format == "json-lines") {
        for (const auto& r : recs) w.line(record_json(r));
    } else {
        bool first = true;
        for (const auto& r : recs) {
            if (!first) w.line("");
            first = false;
            std::size_t width = 0;
            for (const auto& [k, v] : r.human) width = std::max(width, k.size());
            for (const auto& [k, v] : r.human) {
                std::string pad(width - k.size(), ' ');
                w.line(k + pad + " = " + v);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// dilation

struct DilationArgs {
    double theta = 0.0, phi = 0.0;
    double p_a = 0.0, p_a_prime = 0.0, p_b = 0.0, delta = 0.0, tau_b = 0.0;
    std::string units = "natural";
    double mass_kg = qtd::codata().m_rb87;
    std::string format = "human", output;
};

int run_dilation(const DilationArgs& a) {
    double pa = a.p_a, pap = a.p_a_prime, pb = a.p_b, delta = a.delta;
    if (a.units == "si") {
        pa = qtd::momentum_si_to_natural(pa, a.mass_kg).value();
        pap = qtd::momentum_si_to_natural(pap, a.mass_kg).value();
        pb = qtd::momentum_si_to_natural(pb, a.mass_kg).value();
        delta = qtd::momentum_si_to_natural(delta, a.mass_kg).value();
    }
    const qtd::Scenario sc(
        qtd::SuperpositionSpec(a.theta, a.phi, qtd::WavePacket(pa, delta),
                               qtd::WavePacket(pap, delta)),
        pb, a.tau_b);
    const qtd::DilationResult r = qtd::dilation_result(sc);

    Record rec;
    rec.add("k_classical", r.k_classical);
    rec.add("k_quantum", r.k_quantum);
    rec.add("gamma_eff_inv", r.gamma_eff_inv);
    rec.add("mean_tau_a", r.mean_tau_a);
    Writer w(a.output);
    emit_records(w, a.format, {rec});
    w.flush();
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::vector<double> betas = {0.02, 0.05, 0.1};
    double diff_lo = 0.0, diff_hi = 0.08, diff_step = 5e-4;
    double delta = 0.01;
    double theta = std::numbers::pi / 4.0, phi = 0.0;
    std::string output = "sweep.csv";
    std::string optimal_output;  // default: optimal.csv next to output
    std::string plot_script;     // none unless given
    std::string format = "csv";
};

std::string row_status(qtd::RowStatus s) {
    return s == qtd::RowStatus::ok ? "ok" : "near_null";
}

int run_sweep(const SweepArgs& a) {
    const qtd::SweepPlan plan{a.betas, {a.diff_lo, a.diff_hi, a.diff_step}, a.delta, a.theta,
                              a.phi};
    const std::vector<qtd::SweepRow> rows = qtd::run_sweep(plan);
    std::vector<qtd::OptimalRow> optima;
    for (double beta : a.betas) {
        const qtd::OptimalPoint p =
            qtd::optimal_difference(beta, a.delta, a.theta, a.phi, a.diff_lo, a.diff_hi);
        optima.push_back({beta, p.diff_star, p.k_quantum_star});
    }

    fs::path out(a.output);
    fs::path opt_out = a.optimal_output.empty()
                           ? (out.parent_path() / "optimal.csv")
                           : fs::path(a.optimal_output);
    if (!a.plot_script.empty() && a.format != "csv")
        throw std::invalid_argument("--plot-script requires --format csv");

    // Artifacts are written file-by-file; a failure removes everything this
    // run created so no partial tables survive.
    std::vector<fs::path> created;
    try {
        if (a.format == "json-lines") {
            Writer w(out.string());
            for (const auto& r : rows) {
                Record rec;
                rec.add("beta", r.beta);
                rec.add("diff", r.diff);
                rec.add("k_classical", r.k_classical);
                rec.add("k_quantum", r.k_quantum);
                rec.add("gamma_eff_inv", r.gamma_eff_inv);
                rec.add("status", row_status(r.status));
                w.line(record_json(rec));
            }
            created.push_back(out);
            w.flush();
            Writer wo(opt_out.string());
            for (const auto& r : optima) {
                Record rec;
                rec.add("beta", r.beta);
                rec.add("diff_star", r.diff_star);
                rec.add("k_quantum_star", r.k_quantum_star);
                wo.line(record_json(rec));
            }
            created.push_back(opt_out);
            wo.flush();
        } else {
            created.push_back(out);
            qtd::emit_csv(rows, out);
            created.push_back(opt_out);
            qtd::emit_optimal_csv(optima, opt_out);
            if (!a.plot_script.empty()) {
                created.push_back(fs::path(a.plot_script));
                qtd::emit_plot_script(a.plot_script, out, opt_out, a.betas);
            }
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : created) fs::remove(p, ec);
        throw;
    }

    if (a.format == "human") {
        std::ostringstream s;
        s << "wrote " << rows.size() << " rows to " << out.string() << " and "
          << optima.size() << " optima to " << opt_out.string();
        std::puts(s.str().c_str());
        for (const auto& r : optima)
            std::puts(("beta = " + fmt::g6(r.beta) + ": diff_star = " + fmt::g6(r.diff_star) +
                       ", k_quantum_star = " + fmt::g6(r.k_quantum_star))
                          .c_str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
    double theta = std::numbers::pi / 4.0, phi = 0.0;
    double p_a = 0.04, p_a_prime = 0.06, p_b = 0.04, delta = 0.01;
    int dim_a = 64, dim_b = 64, grid_points = 256;
    double epsilon = 0.0;  // <= 0: default spacing
    double window_periods = 1.0, nyquist_factor = 4.0;
    std::vector<double> tau_b_frac = {0.25, 0.375, 0.5};
    bool mixture = false;
    std::string format = "human", output;
};

int run_oracle(const OracleArgs& a) {
    const qtd::SuperpositionSpec sup(a.theta, a.phi, qtd::WavePacket(a.p_a, a.delta),
                                     qtd::WavePacket(a.p_a_prime, a.delta));
    qtd::PwBuildOptions opt;
    opt.dim_a = a.dim_a;
    opt.dim_b = a.dim_b;
    opt.grid_points = a.grid_points;
    opt.epsilon = a.epsilon;
    opt.window_periods = a.window_periods;
    opt.nyquist_factor = a.nyquist_factor;

    const qtd::PwModel model = qtd::build_model(qtd::Scenario(sup, a.p_b, 0.0), opt);
    const double period = model.b.clock.period();
    std::vector<double> taus;
    for (double f : a.tau_b_frac) taus.push_back(f * period);

    const std::vector<qtd::ConditionalDistribution> dists =
        qtd::conditional_distributions(model, taus);

    // Mixture baseline: same scenario with the two branches prepared
    // classically (populations cos^2 theta / sin^2 theta, no interference).
    std::vector<qtd::ConditionalDistribution> mixes;
    double mix_weight = 0.0;
    if (a.mixture) {
        const qtd::SuperpositionSpec b1(0.0, 0.0, qtd::WavePacket(a.p_a, a.delta),
                                        qtd::WavePacket(a.p_a_prime, a.delta));
        const qtd::SuperpositionSpec b2(std::numbers::pi / 2.0, 0.0,
                                        qtd::WavePacket(a.p_a, a.delta),
                                        qtd::WavePacket(a.p_a_prime, a.delta));
        const qtd::PwModel m1 = qtd::build_model(qtd::Scenario(b1, a.p_b, 0.0), opt);
        const qtd::PwModel m2 = qtd::build_model(qtd::Scenario(b2, a.p_b, 0.0), opt);
        const double c = std::cos(a.theta);
        mix_weight = c * c;
        for (double t : taus) mixes.push_back(qtd::mixture_distribution(m1, m2, mix_weight, t));
    }

    bool all_pass = true;
    std::vector<Record> recs;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double tau = taus[i];
        const qtd::DilationResult dr = qtd::dilation_result(qtd::Scenario(sup, a.p_b, tau));
        const qtd::MeanStats ms = qtd::mean_stats(dists[i]);
        const double err = std::abs(ms.mean - dr.mean_tau_a);
        const double tol = std::max(3e-6 * tau, model.mean_error_bound(tau));
        const bool pass = err <= tol && !ms.ambiguous;
        all_pass = all_pass && pass;

        Record rec;
        rec.add("tau_b", tau);
        rec.add("oracle_mean", ms.mean);
        rec.add("analytic_mean", dr.mean_tau_a);
        rec.add("abs_error", err);
        rec.add("tolerance", tol);
        rec.add("pass", pass);
        if (a.mixture) {
            const double mix_mean = qtd::mean_reading(mixes[i]);
            rec.add("mixture_mean", mix_mean);
            rec.add("sup_minus_mix", ms.mean - mix_mean);
            rec.add("neg_kq_tau_b", -dr.k_quantum * tau);
        }
        recs.push_back(std::move(rec));
    }

    Writer w(a.output);
    if (a.format == "human") {
        for (const auto& r : recs) {
            std::string lineStr;
            for (const auto& [k, v] : r.human) lineStr += k + "=" + v + "  ";
            w.line(lineStr);
        }
    } else {
        emit_records(w, a.format, recs);
    }
    w.flush();
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
    std::string scenario;
    qtd::ScenarioSI si{qtd::codata().m_rb87,
                       0.0,
                       0.0,
                       std::numbers::pi / 4.0,
                       0.0,
                       0.0,
                       0.0,
                       6.834682610904e9,
                       1e-14,
                       10.0};
    std::string format = "human", output;
};

int run_estimate(const EstimateArgs& a, const std::vector<std::string>& explicit_needed) {
    if (a.scenario.empty() && !explicit_needed.empty()) {
        std::string msg = "estimate: provide --scenario or all of";
        for (const auto& f : explicit_needed) msg += " " + f;
        throw std::invalid_argument(msg);
    }
    const qtd::FeasibilityReport r = qtd::estimate(a.si);

    Record rec;
    rec.add("scenario", a.scenario.empty() ? std::string("custom") : a.scenario);
    rec.add("mass_kg", a.si.mass_kg);
    rec.add("v1_m_per_s", a.si.v1_m_per_s);
    rec.add("v2_m_per_s", a.si.v2_m_per_s);
    rec.add("theta", a.si.theta);
    rec.add("phi", a.si.phi);
    rec.add("delta_v_m_per_s", a.si.delta_v_m_per_s);
    rec.add("tau_b_s", a.si.tau_b_s);
    rec.add("transition_freq_hz", a.si.transition_freq_hz);
    rec.add("clock_resolution_s", a.si.clock_resolution_s);
    rec.add("coherence_time_s", a.si.coherence_time_s);
    rec.add("k_classical", r.k_classical);
    rec.add("k_quantum", r.k_quantum);
    rec.add("time_shift_quantum_s", r.time_shift_quantum_s);
    rec.add("resonance_shift_hz", r.resonance_shift_hz);
    rec.add("detectable", r.detectable);
    rec.add("margin", r.margin);

    Writer w(a.output);
    emit_records(w, a.format, {rec});
    w.flush();
    return 0;  // detectability is data, not an error
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum time dilation toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value configuration file ([subcommand] sections; flags override)");

    DilationArgs da;
    SweepArgs sa;
    OracleArgs oa;
    EstimateArgs ea;
    int rc = 0;

    auto add_format = [](CLI::App* sub, std::string& fmtv, std::string& outv) {
        sub->add_option("--format", fmtv, "human, csv, or json-lines")
            ->check(CLI::IsMember(kFormats));
        sub->add_option("--output", outv, "output path ('-' or empty: stdout)");
    };

    CLI::App* dil = app.add_subcommand("dilation", "coefficients for one scenario");
    dil->configurable();
    dil->fallthrough();
    dil->add_option("--theta", da.theta, "branch mixing angle [rad]")->required();
    dil->add_option("--phi", da.phi, "branch relative phase [rad]");
    dil->add_option("--p-a", da.p_a, "first branch mean momentum")->required();
    dil->add_option("--p-a-prime", da.p_a_prime, "second branch mean momentum")->required();
    dil->add_option("--p-b", da.p_b, "reference clock mean momentum")->required();
    dil->add_option("--delta", da.delta, "packet momentum width")->required();
    dil->add_option("--tau-b", da.tau_b, "elapsed proper time on clock B")->required();
    dil->add_option("--units", da.units, "natural: p/mc and shared time unit; si: kg m/s and s")
        ->check(CLI::IsMember({"natural", "si"}));
    dil->add_option("--mass", da.mass_kg, "particle mass [kg], used by --units si");
    add_format(dil, da.format, da.output);

    CLI::App* swp = app.add_subcommand("sweep", "coefficient tables over momentum difference");
    swp->configurable();
    swp->fallthrough();
    swp->add_option("--beta", sa.betas, "momentum-sum values (comma separated)")
        ->delimiter(',');
    swp->add_option("--diff-lo", sa.diff_lo, "momentum-difference range start");
    swp->add_option("--diff-hi", sa.diff_hi, "momentum-difference range end");
    swp->add_option("--diff-step", sa.diff_step, "momentum-difference step");
    swp->add_option("--delta", sa.delta, "packet momentum width");
    swp->add_option("--theta", sa.theta, "branch mixing angle [rad]");
    swp->add_option("--phi", sa.phi, "branch relative phase [rad]");
    swp->add_option("--optimal-output", sa.optimal_output,
                    "optimal-difference table path (default: optimal.csv beside --output)");
    swp->add_option("--plot-script", sa.plot_script,
                    "also emit a gnuplot script at this path (csv format only)");
    add_format(swp, sa.format, sa.output);
    swp->get_option("--output")->description("row table path (default sweep.csv)");

    CLI::App* orc = app.add_subcommand("oracle", "clock-simulation check of the analytic mean");
    orc->configurable();
    orc->fallthrough();
    orc->add_option("--theta", oa.theta, "branch mixing angle [rad]");
    orc->add_option("--phi", oa.phi, "branch relative phase [rad]");
    orc->add_option("--p-a", oa.p_a, "first branch mean momentum [p/mc]");
    orc->add_option("--p-a-prime", oa.p_a_prime, "second branch mean momentum [p/mc]");
    orc->add_option("--p-b", oa.p_b, "reference clock mean momentum [p/mc]");
    orc->add_option("--delta", oa.delta, "packet momentum width [p/mc]");
    orc->add_option("--dim-a", oa.dim_a, "clock A levels (>= 8)");
    orc->add_option("--dim-b", oa.dim_b, "clock B levels (>= 8)");
    orc->add_option("--grid-points", oa.grid_points, "momentum grid points per particle");
    orc->add_option("--epsilon", oa.epsilon, "clock level spacing (<= 0: auto)");
    orc->add_option("--window-periods", oa.window_periods,
                    "t-window length in whole clock recurrence periods");
    orc->add_option("--nyquist-factor", oa.nyquist_factor, "t-quadrature oversampling");
    orc->add_option("--tau-b-frac", oa.tau_b_frac,
                    "conditioning times as fractions of the clock period")
        ->delimiter(',');
    orc->add_flag("--mixture", oa.mixture, "also report the classical-mixture baseline");
    add_format(orc, oa.format, oa.output);

    CLI::App* est = app.add_subcommand("estimate", "SI feasibility report");
    est->configurable();
    est->fallthrough();
    est->add_option("--scenario", ea.scenario, "builtin scenario name (rb87-default)");
    est->add_option("--mass", ea.si.mass_kg, "atom mass [kg]");
    est->add_option("--v1", ea.si.v1_m_per_s, "first branch velocity [m/s]");
    est->add_option("--v2", ea.si.v2_m_per_s, "second branch velocity [m/s]");
    est->add_option("--theta", ea.si.theta, "branch mixing angle [rad]");
    est->add_option("--phi", ea.si.phi, "branch relative phase [rad]");
    est->add_option("--delta-v", ea.si.delta_v_m_per_s, "branch velocity width [m/s]");
    est->add_option("--tau-b", ea.si.tau_b_s, "interrogation time [s]");
    est->add_option("--transition-freq", ea.si.transition_freq_hz, "clock transition [Hz]");
    est->add_option("--clock-resolution", ea.si.clock_resolution_s,
                    "resolvable time shift [s]");
    est->add_option("--coherence-time", ea.si.coherence_time_s,
                    "superposition coherence time [s]");
    add_format(est, ea.format, ea.output);

    // Dispatch happens after the parse (not in subcommand callbacks) so a
    // config file that names a subcommand section does not run it twice.
    const auto dispatch = [&]() {
        if (dil->parsed()) {
            rc = run_dilation(da);
        } else if (swp->parsed()) {
            rc = run_sweep(sa);
        } else if (orc->parsed()) {
            rc = run_oracle(oa);
        } else if (est->parsed()) {
            // Base values come from the named scenario when given; explicit
            // flags then override field by field.
            std::vector<std::string> missing;
            if (!ea.scenario.empty()) {
                const qtd::ScenarioSI base = qtd::builtin_scenario(ea.scenario);
                qtd::ScenarioSI merged = base;
                if (est->count("--mass")) merged.mass_kg = ea.si.mass_kg;
                if (est->count("--v1")) merged.v1_m_per_s = ea.si.v1_m_per_s;
                if (est->count("--v2")) merged.v2_m_per_s = ea.si.v2_m_per_s;
                if (est->count("--theta")) merged.theta = ea.si.theta;
                if (est->count("--phi")) merged.phi = ea.si.phi;
                if (est->count("--delta-v")) merged.delta_v_m_per_s = ea.si.delta_v_m_per_s;
                if (est->count("--tau-b")) merged.tau_b_s = ea.si.tau_b_s;
                if (est->count("--transition-freq"))
                    merged.transition_freq_hz = ea.si.transition_freq_hz;
                if (est->count("--clock-resolution"))
                    merged.clock_resolution_s = ea.si.clock_resolution_s;
                if (est->count("--coherence-time"))
                    merged.coherence_time_s = ea.si.coherence_time_s;
                ea.si = merged;
            } else {
                for (const char* f : {"--v1", "--v2", "--delta-v", "--tau-b"})
                    if (!est->count(f)) missing.push_back(f);
            }
            rc = run_estimate(ea, missing);
        }
    };

    try {
        app.parse(argc, argv);
        dispatch();
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const qtd::UnknownScenarioError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const qtd::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return rc;
}

#include "qtd/pwsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <utility>

#include "qtd/quadrature.hpp"
#include "qtd/wavepacket.hpp"

namespace qtd {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

cplx unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Unitary inverse DFT, out_k = d^{-1/2} sum_n in_n e^{+2 pi i n k / d}.
// Iterative radix-2 with a precomputed twiddle table when d is a power of
// two (the common case here), dense matrix otherwise.  Applied in place.
class DftPlan {
  public:
    explicit DftPlan(int n) : n_(n), scale_(1.0 / std::sqrt(double(n))) {
        pow2_ = n > 0 && (n & (n - 1)) == 0;
        if (pow2_) {
            rev_.resize(n);
            for (int i = 1, j = 0; i < n; ++i) {
                int bit = n >> 1;
                for (; j & bit; bit >>= 1) j ^= bit;
                j ^= bit;
                rev_[i] = j;
            }
            tw_.resize(n / 2);
            for (int j = 0; j < n / 2; ++j) tw_[j] = unit_phase(2.0 * kPi * j / n);
        } else {
            mat_.resize(std::size_t(n) * n);
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j) {
                    // reduce k*j mod n first so the angle stays small
                    const long long r = (1LL * k * j) % n;
                    mat_[std::size_t(k) * n + j] = unit_phase(2.0 * kPi * double(r) / n);
                }
            buf_.resize(n);
        }
    }

    void run(cplx* a) {
        if (pow2_) {
            for (int i = 1; i < n_; ++i)
                if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
            for (int len = 2; len <= n_; len <<= 1) {
                const int stride = n_ / len;
                for (int i = 0; i < n_; i += len) {
                    for (int j = 0; j < len / 2; ++j) {
                        const cplx w = tw_[std::size_t(j) * stride];
                        const cplx u = a[i + j];
                        const cplx v = a[i + j + len / 2] * w;
                        a[i + j] = u + v;
                        a[i + j + len / 2] = u - v;
                    }
                }
            }
            for (int i = 0; i < n_; ++i) a[i] *= scale_;
        } else {
            for (int k = 0; k < n_; ++k) {
                cplx acc(0.0, 0.0);
                const cplx* row = &mat_[std::size_t(k) * n_];
                for (int j = 0; j < n_; ++j) acc += row[j] * a[j];
                buf_[k] = acc * scale_;
            }
            std::copy(buf_.begin(), buf_.end(), a);
        }
    }

  private:
    int n_;
    double scale_;
    bool pow2_ = false;
    std::vector<int> rev_;
    std::vector<cplx> tw_;
    std::vector<cplx> mat_;
    std::vector<cplx> buf_;
};

ClockedParticle make_particle(double lo, double hi, int points,
                              const std::vector<cplx>& raw_amp, FiniteClock clock,
                              double eps, double clock_offset) {
    ClockedParticle part{{}, {}, {}, clock, {}, {}, {}, {}};
    const int d = clock.dim;
    part.grid.resize(points);
    const double h = (hi - lo) / (points - 1);
    for (int j = 0; j < points; ++j) part.grid[j] = lo + j * h;
    part.weights = trapezoid_weights(part.grid);

    // Renormalize on the grid so truncation and quadrature error land in the
    // state, not in the total probability.
    double norm2 = 0.0;
    for (int j = 0; j < points; ++j) norm2 += part.weights[j] * std::norm(raw_amp[j]);
    if (!(norm2 > 0.0)) throw NearNullStateError("particle amplitudes vanish on the grid");
    const double inv = 1.0 / std::sqrt(norm2);
    part.packet.resize(points);
    for (int j = 0; j < points; ++j) part.packet[j] = raw_amp[j] * inv;

    part.clock_init = clock_state(clock, clock_offset);

    part.state.resize(std::size_t(points) * d);
    part.energy.resize(std::size_t(points) * d);
    part.omega.resize(std::size_t(points) * d);
    for (int j = 0; j < points; ++j) {
        const double p = part.grid[j];
        const double e0 = std::hypot(p, 1.0);
        for (int n = 0; n < d; ++n) {
            const std::size_t idx = std::size_t(j) * d + n;
            part.state[idx] = part.packet[j] * part.clock_init[n];
            const double en = std::hypot(p, 1.0 + n * eps);
            part.energy[idx] = en;
            // E_n - E_0 without cancellation: the difference of squares is
            // n eps (2 + n eps) exactly.
            part.omega[idx] = n * eps * (2.0 + n * eps) / (en + e0);
        }
    }
    return part;
}

void seed_phases(const std::vector<double>& omega, double t, std::vector<cplx>& phase) {
    for (std::size_t i = 0; i < omega.size(); ++i) phase[i] = unit_phase(-omega[i] * t);
}

// Trapezoid weight pattern shared by every per-window integral below.
double panel_weight(int s, int panels, double h) {
    return (s == 0 || s == panels) ? 0.5 * h : h;
}

}  // namespace

FiniteClock::FiniteClock(int dim_, double energy_step_) : dim(dim_), energy_step(energy_step_) {
    if (dim < 2) throw ConfigError("FiniteClock: need at least 2 levels");
    if (!(energy_step > 0.0)) throw ConfigError("FiniteClock: energy step must be positive");
}

double FiniteClock::period() const { return 2.0 * kPi / energy_step; }

double FiniteClock::reading(int k) const { return k * period() / dim; }

std::vector<cplx> clock_state(const FiniteClock& c, double tau) {
    std::vector<cplx> out(c.dim);
    const double amp = 1.0 / std::sqrt(double(c.dim));
    for (int n = 0; n < c.dim; ++n) out[n] = amp * unit_phase(-c.energy_step * n * tau);
    return out;
}

PwModel build_model(const Scenario& sc, const PwBuildOptions& opt) {
    std::ostringstream err;
    if (opt.dim_a < 8 || opt.dim_b < 8) {
        err << "build_model: clock dimensions must be >= 8 (got " << opt.dim_a << ", "
            << opt.dim_b << ")";
        throw ConfigError(err.str());
    }
    if (opt.grid_points < 2) throw ConfigError("build_model: need at least 2 grid points");
    if (!(opt.window_periods > 0.5) ||
        std::abs(opt.window_periods - std::round(opt.window_periods)) > 1e-9)
        throw ConfigError(
            "build_model: window_periods must be a whole number >= 1; "
            "conditioning against a partial recurrence period cuts the "
            "tooth of the conditioning clock and biases readings");
    if (!(opt.nyquist_factor >= 1.0))
        throw ConfigError("build_model: nyquist_factor must be >= 1");

    const int dmax = std::max(opt.dim_a, opt.dim_b);
    double eps = opt.epsilon;
    if (eps <= 0.0) eps = 1e-3 / (dmax - 1);
    if (eps * (dmax - 1) > 0.1 + 1e-15) {
        err << "build_model: top clock level " << eps * (dmax - 1)
            << " mc^2 exceeds the 0.1 limit; internal energies must stay small";
        throw ConfigError(err.str());
    }

    // Rejects degenerate superpositions before any discretization.
    const double nfac = normalization(sc.sup_a);

    const double delta = sc.delta;
    const double pa = sc.sup_a.packet_a.pbar;
    const double pap = sc.sup_a.packet_a_prime.pbar;
    const double a_lo = std::min(pa, pap) - 8.0 * delta;
    const double a_hi = std::max(pa, pap) + 8.0 * delta;
    const double b_lo = sc.pbar_b - 8.0 * delta;
    const double b_hi = sc.pbar_b + 8.0 * delta;
    const double ha = (a_hi - a_lo) / (opt.grid_points - 1);
    const double hb = (b_hi - b_lo) / (opt.grid_points - 1);
    if (ha > delta / 8.0 || hb > delta / 8.0) {
        err << "build_model: grid too coarse: spacing " << std::max(ha, hb)
            << " exceeds Delta/8 = " << delta / 8.0 << "; raise grid_points";
        throw ConfigError(err.str());
    }

    const double st = std::sin(sc.sup_a.theta), ct = std::cos(sc.sup_a.theta);
    std::vector<cplx> amp_a(opt.grid_points);
    std::vector<cplx> amp_b(opt.grid_points);
    const cplx rel = std::polar(1.0, sc.sup_a.phi) * st;
    for (int j = 0; j < opt.grid_points; ++j) {
        const double paj = a_lo + j * ha;
        amp_a[j] = ct * gaussian_amplitude(sc.sup_a.packet_a, paj) +
                   rel * gaussian_amplitude(sc.sup_a.packet_a_prime, paj);
        const double pbj = b_lo + j * hb;
        amp_b[j] = gaussian_amplitude(WavePacket(sc.pbar_b, delta), pbj);
    }

    PwModel m{
        make_particle(a_lo, a_hi, opt.grid_points, amp_a, FiniteClock(opt.dim_a, eps), eps,
                      opt.clock_offset),
        make_particle(b_lo, b_hi, opt.grid_points, amp_b, FiniteClock(opt.dim_b, eps), eps,
                      opt.clock_offset),
        sc,
        TWindow{0.0, 0.0, 0},
        gamma_factor(sc.pbar_b),
        0.0,
        0.0,
        0.0,
    };

    // Sanity: the grid marginal must reproduce the analytic momentum density.
    {
        const std::vector<double> dens = sample_density(sc.sup_a, m.a.grid);
        for (int j = 0; j < opt.grid_points; ++j) {
            double marg = 0.0;
            for (int n = 0; n < opt.dim_a; ++n)
                marg += std::norm(m.a.state[std::size_t(j) * opt.dim_a + n]);
            if (std::abs(marg - dens[j]) > 1e-6) {
                err << "build_model: grid marginal deviates from the analytic density by "
                    << std::abs(marg - dens[j]) << " at p = " << m.a.grid[j];
                throw ConfigError(err.str());
            }
        }
    }

    // Fixed window [0, window_periods * gamma_ref * T].  Keeping the window
    // independent of the conditioning time makes reading covariance exact:
    // shifting both initial clock states by tau' permutes nothing in the
    // t-integral, so the conditional distribution shifts rigidly.
    const double period = 2.0 * kPi / eps;
    const double t_hi = opt.window_periods * m.gamma_ref * period;
    double omega_max = 0.0;
    for (int j = 0; j < opt.grid_points; ++j) {
        omega_max = std::max(omega_max, m.a.omega[std::size_t(j) * opt.dim_a + opt.dim_a - 1]);
        omega_max = std::max(omega_max, m.b.omega[std::size_t(j) * opt.dim_b + opt.dim_b - 1]);
    }
    const double gap = 2.0 * omega_max;  // largest beat frequency in f_A f_B
    int panels = int(std::ceil(t_hi * opt.nyquist_factor * gap / kPi));
    panels = std::max(panels, 64);
    m.window = TWindow{0.0, t_hi, panels};

    // Accuracy bound pieces (see mean_error_bound).  The normalized momentum
    // density splits into three Gaussians: the two branches plus the
    // interference term (signed mass cw * w / N, centered midway); each
    // carries its own mean tick rate.
    const double w1 = ct * ct / nfac;
    const double w2 = st * st / nfac;
    const double wc = coherence_weight(sc.sup_a.theta, sc.sup_a.phi) *
                      overlap(sc.sup_a.packet_a, sc.sup_a.packet_a_prime) / nfac;
    const double mu = 0.5 * (pa + pap);
    const double g_b = gamma_factor(sc.pbar_b);
    const double g_1 = gamma_factor(pa);
    const double g_2 = gamma_factor(pap);
    const double g_c = gamma_factor(mu);
    const DilationResult dr = dilation_result(sc);
    const double mix_exact = w1 * g_b / g_1 + w2 * g_b / g_2 + wc * g_b / g_c;
    const double spread = w1 * std::abs(pa * pa - sc.pbar_b * sc.pbar_b) +
                          w2 * std::abs(pap * pap - sc.pbar_b * sc.pbar_b) +
                          std::abs(wc) * std::abs(mu * mu - sc.pbar_b * sc.pbar_b);
    const double trunc = std::abs(mix_exact - dr.gamma_eff_inv) +
                         2.0 * delta * delta * spread +
                         std::abs(dr.k_quantum) *
                             (std::max(pa * pa, pap * pap) + eps * (dmax - 1) +
                              8.0 * delta * delta);
    const double dress = 0.5 * eps * (dmax - 1) * spread;
    m.bound_rel = trunc + dress + 2e-7;

    // Per-period tick drift between the particles: each clock-B period image
    // displaces clock A's reading by the weighted branch rate differences.
    m.bound_drift_abs = m.gamma_ref * period *
                        (w1 * std::abs(1.0 / g_b - 1.0 / g_1) +
                         w2 * std::abs(1.0 / g_b - 1.0 / g_2) +
                         std::abs(wc) * std::abs(1.0 / g_b - 1.0 / g_c));

    // Wrap wobble amplitude: 1/(eps (d_a-1)(d_b-1)) to a few percent when the
    // conditioning clock is no finer than the probe.  A finer B clock stops
    // averaging A's readout ripple over a whole A cell; the amplitude climbs
    // by one ripple quantum per extra B cell and stays finite in the
    // sharp-time limit, approaching 1/(eps (d_a-1)).
    const double ripple = std::max(1.0, opt.dim_b - opt.dim_a + 1.0);
    m.bound_wrap_abs = 1.25 * ripple / (eps * (opt.dim_a - 1) * (opt.dim_b - 1));
    return m;
}

double PwModel::mean_error_bound(double tau_b) const {
    const int da = a.clock.dim;
    const int db = b.clock.dim;
    const double T = b.clock.period();
    double f = tau_b / T - std::floor(tau_b / T);  // position within the period
    const double wp = window.t_hi / (gamma_ref * T);
    const double m_edge = std::min(f, 1.0 - f);

    // Tick-drift envelope across the period: flat floor, growing toward the
    // window seam as the conditioning tooth loses one of its tails.
    const double seam = std::max(m_edge, 0.5 / db);
    double bound = (0.58 + 0.075 / seam) / da * bound_drift_abs;
    // The conditioning tooth spans ~1/db of the period, and the drift across
    // the tooth itself leaves a residual the reading average cannot cancel.
    bound += 0.15 / db * bound_drift_abs;
    // Within ~a cell of the seam the tooth splits between the window edges
    // and the mean picks up up to about half the per-period drift.
    if (m_edge < 1.5 / db) bound += 0.7 * bound_drift_abs;
    // A finer B clock resolves structure A cannot represent.
    if (db > da) bound += 0.5 * bound_drift_abs;
    // Every extra window period adds a conditioning tooth whose reading
    // drifted by one more period's worth; their average pulls the mean.
    if (wp > 1.0) bound += 0.55 * (wp - 1.0) * bound_drift_abs;

    // Wrap-around wobble beats with the offset of tau_b from the coarser
    // clock's reading grid: zero on-grid and at half-cell offsets, peaking a
    // quarter cell off the grid.  Present even for identical tick rates.
    const int dmin = std::min(da, db);
    bound += bound_wrap_abs * std::abs(std::sin(dmin * b.clock.energy_step * tau_b));

    return bound_rel * std::abs(tau_b) + bound;
}

std::vector<ConditionalDistribution> conditional_distributions(const PwModel& m,
                                                               std::span<const double> tau_bs) {
    const double period_b = m.b.clock.period();
    for (double tb : tau_bs) {
        if (!(tb >= 0.0 && tb < period_b)) {
            std::ostringstream err;
            err << "conditional_distribution: tau_b = " << tb << " outside [0, " << period_b
                << ")";
            throw std::domain_error(err.str());
        }
    }
    const std::size_t nt = tau_bs.size();
    const int da = m.a.clock.dim;
    const int db = m.b.clock.dim;
    const std::size_t na = m.a.grid.size();
    const std::size_t nb = m.b.grid.size();

    // Conditioning covectors <tau_b| e^{...}: conj(clock_state) entries.
    std::vector<cplx> cond(nt * db);
    const double amp_b = 1.0 / std::sqrt(double(db));
    for (std::size_t q = 0; q < nt; ++q)
        for (int n = 0; n < db; ++n)
            cond[q * db + n] = amp_b * unit_phase(m.b.clock.energy_step * n * tau_bs[q]);

    DftPlan plan(da);
    const double h = (m.window.t_hi - m.window.t_lo) / m.window.panels;

    // e^{-i omega t} advanced by per-step multiplication, re-seeded from
    // sin/cos every kReseed nodes to cap the multiplicative rounding drift.
    constexpr int kReseed = 512;
    std::vector<cplx> phase_a(m.a.omega.size()), step_a(m.a.omega.size());
    std::vector<cplx> phase_b(m.b.omega.size()), step_b(m.b.omega.size());
    for (std::size_t i = 0; i < m.a.omega.size(); ++i)
        step_a[i] = unit_phase(-m.a.omega[i] * h);
    for (std::size_t i = 0; i < m.b.omega.size(); ++i)
        step_b[i] = unit_phase(-m.b.omega[i] * h);

    std::vector<std::vector<double>> num(nt, std::vector<double>(da, 0.0));
    std::vector<double> den(nt, 0.0);
    std::vector<double> fa(da);
    std::vector<double> fb(nt);
    std::vector<cplx> buf(da);
    std::vector<cplx> bbuf(db);

    for (int s = 0; s <= m.window.panels; ++s) {
        if (s % kReseed == 0) {
            const double t = m.window.t_lo + s * h;
            seed_phases(m.a.omega, t, phase_a);
            seed_phases(m.b.omega, t, phase_b);
        }
        const double wt = panel_weight(s, m.window.panels, h);

        // Clock-A reading weights f_A(tau_k, t): evolve each momentum
        // column, rotate to the reading basis (one unitary IDFT), square.
        std::fill(fa.begin(), fa.end(), 0.0);
        for (std::size_t j = 0; j < na; ++j) {
            const cplx* ph = &phase_a[j * da];
            const cplx* st = &m.a.state[j * da];
            for (int n = 0; n < da; ++n) buf[n] = ph[n] * st[n];
            plan.run(buf.data());
            const double wj = m.a.weights[j];
            for (int k = 0; k < da; ++k) fa[k] += wj * std::norm(buf[k]);
        }

        // Clock-B weight f_B(tau_b, t) for each conditioning time: a single
        // covariant component per momentum column.
        std::fill(fb.begin(), fb.end(), 0.0);
        for (std::size_t j = 0; j < nb; ++j) {
            const cplx* ph = &phase_b[j * db];
            const cplx* st = &m.b.state[j * db];
            for (int n = 0; n < db; ++n) bbuf[n] = ph[n] * st[n];
            const double wj = m.b.weights[j];
            for (std::size_t q = 0; q < nt; ++q) {
                const cplx* cv = &cond[q * db];
                cplx acc(0.0, 0.0);
                for (int n = 0; n < db; ++n) acc += cv[n] * bbuf[n];
                fb[q] += wj * std::norm(acc);
            }
        }
        for (std::size_t q = 0; q < nt; ++q) {
            const double wfb = wt * fb[q];
            den[q] += wfb;
            double* nq = num[q].data();
            for (int k = 0; k < da; ++k) nq[k] += wfb * fa[k];
        }

        for (std::size_t i = 0; i < phase_a.size(); ++i) phase_a[i] *= step_a[i];
        for (std::size_t i = 0; i < phase_b.size(); ++i) phase_b[i] *= step_b[i];
    }

    std::vector<ConditionalDistribution> out;
    out.reserve(nt);
    const double window_len = m.window.t_hi - m.window.t_lo;
    for (std::size_t q = 0; q < nt; ++q) {
        if (!(den[q] > 1e-14 * window_len)) {
            std::ostringstream err;
            err << "conditional_distribution: conditioning on a null event (tau_b = "
                << tau_bs[q] << ")";
            throw std::domain_error(err.str());
        }
        ConditionalDistribution cd{{}, {}, std::move(num[q]), den[q], tau_bs[q],
                                   m.a.clock.period()};
        cd.tau_values.resize(da);
        cd.probabilities.resize(da);
        for (int k = 0; k < da; ++k) {
            cd.tau_values[k] = m.a.clock.reading(k);
            cd.probabilities[k] = cd.numerators[k] / cd.denominator;
        }
        out.push_back(std::move(cd));
    }
    return out;
}

ConditionalDistribution conditional_distribution(const PwModel& m, double tau_b) {
    const double tb[1] = {tau_b};
    return std::move(conditional_distributions(m, tb).front());
}

ConditionalDistribution mixture_distribution(const PwModel& m1, const PwModel& m2,
                                             double weight, double tau_b) {
    if (!(weight >= 0.0 && weight <= 1.0))
        throw std::domain_error("mixture_distribution: weight must lie in [0, 1]");
    const bool compatible = m1.a.clock.dim == m2.a.clock.dim &&
                            m1.b.clock.dim == m2.b.clock.dim &&
                            m1.a.clock.energy_step == m2.a.clock.energy_step &&
                            m1.a.grid == m2.a.grid && m1.b.grid == m2.b.grid &&
                            m1.b.state == m2.b.state && m1.window.t_lo == m2.window.t_lo &&
                            m1.window.t_hi == m2.window.t_hi &&
                            m1.window.panels == m2.window.panels;
    if (!compatible)
        throw std::domain_error(
            "mixture_distribution: models differ beyond particle A's amplitudes");

    const ConditionalDistribution c1 = conditional_distribution(m1, tau_b);
    const ConditionalDistribution c2 = conditional_distribution(m2, tau_b);
    ConditionalDistribution out = c1;
    out.denominator = weight * c1.denominator + (1.0 - weight) * c2.denominator;
    for (std::size_t k = 0; k < out.numerators.size(); ++k) {
        out.numerators[k] = weight * c1.numerators[k] + (1.0 - weight) * c2.numerators[k];
        out.probabilities[k] = out.numerators[k] / out.denominator;
    }
    return out;
}

MeanStats mean_stats(const ConditionalDistribution& cd) {
    const double w0 = 2.0 * kPi / cd.period;
    cplx r(0.0, 0.0);
    for (std::size_t k = 0; k < cd.probabilities.size(); ++k)
        r += cd.probabilities[k] * unit_phase(w0 * cd.tau_values[k]);
    const double mag = std::abs(r);
    if (mag < 1e-12) return {cd.tau_b, cd.period, true};  // directionless spread
    const double branch = std::arg(r) / w0;  // in (-T/2, T/2]
    const double mean = branch + cd.period * std::round((cd.tau_b - branch) / cd.period);
    const double cstd = std::sqrt(std::max(0.0, -2.0 * std::log(mag))) / w0;
    return {mean, cstd, cstd > cd.period / 4.0};
}

double mean_reading(const ConditionalDistribution& cd) { return mean_stats(cd).mean; }

UncertaintyReport uncertainty_diagnostic(const FiniteClock& c,
                                         std::span<const std::complex<double>> state) {
    if (int(state.size()) != c.dim)
        throw std::invalid_argument("uncertainty_diagnostic: state size != clock dim");
    const int d = c.dim;
    const double eps = c.energy_step;
    const double T = c.period();

    double norm2 = 0.0;
    for (const cplx& v : state) norm2 += std::norm(v);
    if (!(norm2 > 0.0)) throw std::invalid_argument("uncertainty_diagnostic: null state");
    std::vector<cplx> cvec(state.begin(), state.end());
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& v : cvec) v *= inv;

    // Mass spread in mc^2 units: M = H_C / c^2 on top of the rest mass.
    double e1 = 0.0, e2 = 0.0;
    for (int n = 0; n < d; ++n) {
        const double pn = std::norm(cvec[n]);
        e1 += pn * n * eps;
        e2 += pn * n * eps * n * eps;
    }
    const double delta_m = std::sqrt(std::max(0.0, e2 - e1 * e1));
    const bool applicable = delta_m > 1e-6 * eps;

    // Reading distribution on the circle, P(tau) = (1/T) sum_k rho_k
    // e^{i k eps tau} with rho_k the k-th coherence diagonal.
    std::vector<cplx> rho(d);  // rho[k], k = 0 .. d-1; rho_{-k} = conj(rho_k)
    for (int k = 0; k < d; ++k) {
        cplx acc(0.0, 0.0);
        for (int n = 0; n + k < d; ++n) acc += cvec[n + k] * std::conj(cvec[n]);
        rho[k] = acc;
    }

    UncertaintyReport rep{0.0, delta_m, 0.0, 0.5, applicable, false};
    if (!applicable) return rep;

    // Center the linear chart on the circular mean; moments of the
    // trigonometric polynomial over [a, a+T] are exact in closed form.
    double mu = (std::abs(rho[1]) > 0.0) ? std::arg(rho[1]) / eps : 0.0;
    if (mu < 0.0) mu += T;
    const double a = mu - 0.5 * T;

    double mean = a + 0.5 * T;                                    // k = 0 term
    double sq = ((a + T) * (a + T) * (a + T) - a * a * a) / 3.0;  // k = 0 term of <tau^2>*T
    for (int k = 1; k < d; ++k) {
        const double w = k * eps;
        const cplx e_a = unit_phase(w * a);
        // integral tau e^{i w tau} over [a, a+T] = T e^{i w a} / (i w)
        const cplx i1 = e_a * cplx(0.0, -T / w);
        // integral tau^2 e^{i w tau} = T e^{i w a} [ (2a+T)/(i w) + 2/w^2 ]
        const cplx i2 = e_a * (cplx(0.0, -(2.0 * a + T) / w) + cplx(2.0 / (w * w), 0.0)) * T;
        mean += 2.0 * std::real(rho[k] * i1) / T;
        sq += 2.0 * std::real(rho[k] * i2);
    }
    sq /= T;
    rep.delta_t = std::sqrt(std::max(0.0, sq - mean * mean));
    rep.product = rep.delta_t * rep.delta_m;

    // Warn when mass hugs the chart seam (antipode of the mean): moments on
    // a circle stop meaning much there.  Edge strips of half a reading cell.
    const double strip = 0.5 * T / d;
    double edge = 2.0 * strip / T;  // k = 0 term for both strips
    for (int k = 1; k < d; ++k) {
        const double w = k * eps;
        const cplx lo = (unit_phase(w * (a + strip)) - unit_phase(w * a)) / cplx(0.0, w);
        const cplx hi =
            (unit_phase(w * (a + T)) - unit_phase(w * (a + T - strip))) / cplx(0.0, w);
        edge += 2.0 * std::real(rho[k] * (lo + hi)) / T;
    }
    rep.seam_warning = edge > 0.02;
    return rep;
}

UncertaintyReport uncertainty_diagnostic(const PwModel& m) {
    return uncertainty_diagnostic(m.a.clock, m.a.clock_init);
}

}  // namespace qtd

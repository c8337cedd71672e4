#include "qtd/experiment.hpp"

#include <cmath>

#include "qtd/dilation.hpp"
#include "qtd/units.hpp"

namespace qtd {

namespace {

void validate(const ScenarioSI& sc) {
    if (!(sc.mass_kg > 0.0)) throw std::domain_error("estimate: mass must be positive");
    if (!(sc.delta_v_m_per_s > 0.0)) throw std::domain_error("estimate: delta_v must be positive");
    if (!(sc.tau_b_s >= 0.0)) throw std::domain_error("estimate: tau_b must be >= 0");
    if (!(sc.transition_freq_hz > 0.0))
        throw std::domain_error("estimate: transition frequency must be positive");
    if (!(sc.clock_resolution_s > 0.0))
        throw std::domain_error("estimate: clock resolution must be positive");
    if (!(sc.coherence_time_s > 0.0))
        throw std::domain_error("estimate: coherence time must be positive");
}

}  // namespace

FeasibilityReport estimate(const ScenarioSI& sc) {
    validate(sc);

    // velocity_to_momentum rejects superluminal inputs.
    const double p1 = velocity_to_momentum(sc.v1_m_per_s).value();
    const double p2 = velocity_to_momentum(sc.v2_m_per_s).value();
    const double delta = sc.delta_v_m_per_s / codata().c;  // Delta = m dv at leading order

    const SuperpositionSpec spec(sc.theta, sc.phi, WavePacket(p1, delta), WavePacket(p2, delta));
    // Lab frame: clock B at rest.
    const Scenario nat(spec, 0.0, sc.tau_b_s);
    const DilationResult r = dilation_result(nat);

    FeasibilityReport rep;
    rep.k_classical = r.k_classical;
    rep.k_quantum = r.k_quantum;
    // The usable integration time saturates at the coherence time, so the
    // accumulated shift (and the margin) is flat in tau_b beyond it.
    const double tau_eff = std::min(sc.tau_b_s, sc.coherence_time_s);
    rep.time_shift_quantum_s = r.k_quantum * tau_eff;
    rep.resonance_shift_hz = sc.transition_freq_hz * (r.gamma_eff_inv - 1.0);
    rep.margin = std::abs(rep.time_shift_quantum_s) / sc.clock_resolution_s;
    rep.detectable = rep.margin >= 1.0;
    return rep;
}

ScenarioSI builtin_scenario(const std::string& name) {
    if (name == "rb87-default") {
        // Rb-87 clock atoms, branch speeds 10 and 70 m/s.  The 26.5 m/s
        // velocity width puts the 60 m/s branch separation at the ratio that
        // maximizes |k_quantum| (separation ~ 2.26 widths), where
        // |k_quantum| ~ 1.1e-15.  Hyperfine transition at 6.835 GHz; 1e-14 s
        // resolution and 10 s of coherence are current-generation figures.
        ScenarioSI sc;
        sc.mass_kg = codata().m_rb87;
        sc.v1_m_per_s = 10.0;
        sc.v2_m_per_s = 70.0;
        sc.theta = M_PI / 4.0;
        sc.phi = 0.0;
        sc.delta_v_m_per_s = 26.5;
        sc.tau_b_s = 10.0;
        sc.transition_freq_hz = 6.834682610904e9;
        sc.clock_resolution_s = 1e-14;
        sc.coherence_time_s = 10.0;
        return sc;
    }
    std::string msg = "unknown scenario '" + name + "'; available:";
    for (const auto& n : builtin_scenario_names()) msg += " " + n;
    throw UnknownScenarioError(msg);
}

std::vector<std::string> builtin_scenario_names() {
    return {"rb87-default"};
}

}  // namespace qtd

#pragma once

#include <string>
#include <vector>

#include "qtd/errors.hpp"

// Feasibility estimates for an atom-interferometry test of the quantum
// dilation correction: SI inputs, natural-unit kernel, SI outputs.

namespace qtd {

/// Laboratory-frame description: clock B at rest, clock A in a superposition
/// of velocities v1 and v2 with single-branch velocity width delta_v.
struct ScenarioSI {
    double mass_kg;
    double v1_m_per_s;
    double v2_m_per_s;
    double theta;
    double phi;
    double delta_v_m_per_s;
    double tau_b_s;
    double transition_freq_hz;    ///< internal clock transition nu
    double clock_resolution_s;    ///< smallest resolvable time shift
    double coherence_time_s;      ///< longest usable tau_b
};

struct FeasibilityReport {
    double k_classical;
    double k_quantum;
    double time_shift_quantum_s;  ///< k_quantum * min(tau_b, coherence time)
    double resonance_shift_hz;    ///< nu * (gamma_eff_inv - 1)
    bool detectable;              ///< |time_shift_quantum| >= clock resolution
    double margin;                ///< |time_shift_quantum| / clock resolution
};

/// Velocities map to momenta relativistically; the packet width uses the
/// leading-order Delta = m delta_v (Delta/mc = delta_v/c).  Validation errors
/// (superluminal speeds, non-positive mass/width/resolution) raise
/// std::domain_error.
FeasibilityReport estimate(const ScenarioSI& sc);

/// Named parameter sets.  Unknown names raise UnknownScenarioError listing
/// what is available.
ScenarioSI builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

}  // namespace qtd

// model.hpp — Free and interacting SUSY oscillator Hamiltonians, supercharges,
// the H₀/H_int split, and the SUSY frequency condition.

#pragma once

#include "susyosc/algebra.hpp"
#include "susyosc/fock.hpp"

#include <json.hpp>

#include <vector>

namespace susyosc {

// --------------------------- parameters -------------------------------------

// (ω₁, α₂) with ω₂ = (ω₁² + α₂²)/ω₁ and α₁ = −α₂ fixed by the SUSY condition.
struct ModelParams {
    double omega1 = 1.0;  // bosonic frequency (energy units)
    double alpha2 = 0.0;  // interaction strength (energy units)

    // α₂ = 0 collapses to ω₁ exactly (no x²/x round-trip), so the free limit is
    // bit-compatible with the free constructor.
    double omega2() const {
        return alpha2 == 0.0 ? omega1 : (omega1 * omega1 + alpha2 * alpha2) / omega1;
    }
    double alpha1() const { return -alpha2; }
    double lambda() const { return alpha2 / omega1; }  // displacement strength α₂/ω₁

    void validate() const;
};

// Roots of ω₁² − ω₂ω₁ + α₂² = 0: the two bosonic frequencies compatible with a
// given (ω₂, α₂); ξ = ω₂ − 2α₂ parametrizes the distance to degeneracy.
struct FrequencySolution {
    double omega1_minus = 0.0;
    double omega1_plus = 0.0;
    double xi = 0.0;
    bool degenerate = false;
};

void to_json(nlohmann::json& j, const FrequencySolution& solution);

// --------------------------- Hamiltonian bundle -----------------------------

// H = ω₁a†a + ω₂b†b + α₂(a† + a)b†b with supercharge G_S = a†·b·exp[λ(a† − a)];
// H₀ = ω₁a†a + ω₂b†b carries the oscillators, H_int the boson-fermion coupling.
struct HamiltonianBundle {
    SparseMatrix H;
    SparseMatrix H0;
    SparseMatrix Hint;
    SparseMatrix G_S;
    SparseMatrix G_S_dagger;
    ModelParams params;
    FockSpaceConfig space;
    double omega2 = 0.0;  // the ω₂ actually built in (detuned constructors differ
                          // from params.omega2())
};

// Free SUSY oscillator H = ω₁(a†a + b†b); thin wrapper over the interacting
// constructor at α₂ = 0 (bit-compatible by construction).
HamiltonianBundle build_free_susy_oscillator(double omega1, const FockSpaceConfig& cfg);

HamiltonianBundle build_interacting_model(const ModelParams& params,
                                          const FockSpaceConfig& cfg);

// Negative-test constructor: same couplings but ω₂ chosen freely, so the SUSY
// condition ω₂ = (ω₁² + α₂²)/ω₁ is generally violated.
HamiltonianBundle build_detuned_model(const ModelParams& params, double omega2,
                                      const FockSpaceConfig& cfg);

// H alone, without supercharges. Works on doubled spaces (non-tilde sector),
// where the displacement factor inside G_S would be cubic-size.
SparseMatrix build_hamiltonian_matrix(const ModelParams& params, const FockSpaceConfig& cfg);

// --------------------------- SUSY certification -----------------------------

struct SusyExactnessReport {
    AlgebraReport commutator;           // ‖[H, G_S]‖ on the guarded subspace
    AlgebraReport ground_annihilation;  // max ‖G_S v‖, ‖G_S†v‖ over the ground eigenspace
    double ground_energy = 0.0;
};

// Certifies [H, G_S] = 0 and supercharge annihilation of the (possibly
// degenerate) numerical ground space. Single-space bundles only.
SusyExactnessReport check_susy_exactness(const HamiltonianBundle& bundle,
                                         double tolerance = 1e-9);

// Both roots of the SUSY frequency condition; throws std::domain_error when
// ω₂ < 2|α₂| (complex roots — no supersymmetric harmonic oscillator).
FrequencySolution solve_frequencies(double omega2, double alpha2);

// --------------------------- spectrum ---------------------------------------

struct EnergyLevel {
    double energy = 0.0;
    int multiplicity = 0;
};

// Lowest k eigenvalues grouped into degenerate levels at the cluster tolerance
// (default 1e-8·ω₁). Single-space bundles; k within the guarded dimension.
std::vector<EnergyLevel> spectrum(const HamiltonianBundle& bundle, int k,
                                  double cluster_tolerance = -1.0);

// Parameters, ground energy, and the lowest levels as a JSON document.
nlohmann::json bundle_summary(const HamiltonianBundle& bundle, int k);

}  // namespace susyosc

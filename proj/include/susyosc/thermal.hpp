// thermal.hpp — Thermo-field doubling: tilde conjugation, thermal rotation and
// vacuum, thermal energy, Witten index, Goldstino states, and the Gibbs oracle.

#pragma once

#include "susyosc/bogoliubov.hpp"
#include "susyosc/fock.hpp"
#include "susyosc/model.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace susyosc {

// --------------------------- thermal parameters -----------------------------

// Rotation angles: tan θ_f = tanh θ_b = e^{−βω₁/2}. β = +infinity is an exact
// zero-temperature sentinel (both angles zero, no exponentials evaluated).
struct ThermalParams {
    double beta = std::numeric_limits<double>::infinity();
    double omega1 = 1.0;
    double theta_f = 0.0;
    double theta_b = 0.0;

    static ThermalParams from_beta(double beta, double omega1);
    // T in units of ω₁ (κ = 1): β = 1/(T·ω₁); T = 0 maps to the β = ∞ sentinel.
    static ThermalParams from_temperature(double t_over_omega1, double omega1);

    bool zero_temperature() const { return std::isinf(beta); }
    double boltzmann_factor() const {  // e^{−βω₁}
        return zero_temperature() ? 0.0 : std::exp(-beta * omega1);
    }
};

// --------------------------- tilde conjugation ------------------------------

// Slot-swap map X ↦ Π·conj(X)·Πᵀ with Π exchanging (boson, fermion) with
// (tilde-boson, tilde-fermion). Exact for fermion-parity-even operators (every
// observable here); for odd fermionic operators it matches the Jordan–Wigner
// tilde only up to the parity-string sign, which cancels in even combinations.
SparseMatrix tilde_map(const SparseMatrix& m, const FockSpaceConfig& cfg);

// Tilde conjugate of a ladder operator: a ↦ ã, c·a† ↦ c*·ã†, with swapped
// mode metadata (same parity caveat as tilde_map).
ModeOperator tilde_conjugate(const ModeOperator& op);

// Ĥ = H − H̃ on the doubled space; the thermal vacuum is its null vector.
SparseMatrix double_hamiltonian(const HamiltonianBundle& bundle);

// --------------------------- thermal rotation -------------------------------

// Factored representation of −iG with
//   G = −iθ_f(b̃₂b₂ − b₂†b̃₂†) − iθ_b(ã₂a₂ − a₂†ã₂†)
// in the quasiparticle basis. The boson bilinears are sparse; the fermion
// bilinears carry dense displacement factors applied slot-locally, so the
// generator is never materialized on the composite space (its dense form is
// available for small-dimension checks).
class ThermalRotation {
  public:
    ThermalRotation(const ThermalParams& params, const TransformedModes& modes);

    Vector apply(const Vector& v) const;  // (−iG)·v
    Matrix dense() const;                 // small dimensions only (tests)
    double norm_bound() const { return norm_bound_; }
    const FockSpaceConfig& space() const { return space_; }
    const ThermalParams& params() const { return params_; }

  private:
    FockSpaceConfig space_;
    ThermalParams params_;
    SparseMatrix pair_raise_boson_;  // a₂†ã₂†
    SparseMatrix pair_lower_boson_;  // ã₂a₂
    SparseMatrix fermion_raise_;     // b†b̃† (bare; displacement applied slot-locally)
    SparseMatrix fermion_lower_;     // b̃b
    Matrix disp_local_;              // boson-factor D(β₂)
    double norm_bound_ = 0.0;
};

ThermalRotation build_thermal_rotation(const ThermalParams& params,
                                       const TransformedModes& modes);

// --------------------------- thermal vacuum ---------------------------------

enum class VacuumPath { matrix_exponential, closed_form };

struct ThermalVacuum {
    StateVector state;  // unit-normalized
    ThermalParams params;
    VacuumPath construction_path = VacuumPath::closed_form;
    double tail_mass = 0.0;  // boson occupation above the guarded level, pre-normalization
};

// |0(β)⟩ = e^{−iG}|0⟩. The matrix-exponential path applies the rotation as an
// operator exponential; the closed-form path builds the two-mode squeezed pair
//   (1/cosh θ_b)·e^{tanh θ_b·a₂†ã₂†}·(cos θ_f + sin θ_f·b₂†b̃₂†)|0⟩.
// Throws when the boson tail mass exceeds cfg.tail_tolerance (β too small for
// N_b — the adaptive-cutoff signal); enforce_tail = false instead hands the
// measured tail back to adaptive-cutoff drivers.
ThermalVacuum thermal_vacuum(const ThermalParams& params, const TransformedModes& modes,
                             VacuumPath path, bool enforce_tail = true);

// Norms of the rotated annihilators on the thermal vacuum,
// (cosh θ_b·a₂ − sinh θ_b·ã₂†)|0(β)⟩ and (cos θ_f·b₂ − sin θ_f·b̃₂†)|0(β)⟩;
// both vanish up to truncation tails.
std::pair<double, double> thermal_annihilator_defects(const ThermalVacuum& vacuum,
                                                      const TransformedModes& modes);

// --------------------------- observables ------------------------------------

// ⟨0(β)|H|0(β)⟩ for H embedded on the doubled space (non-tilde sector).
double thermal_energy(const ThermalVacuum& vacuum, const SparseMatrix& h);

// Tr(H e^{−βH}) / Tr(e^{−βH}) by eigendecomposition on the single space — the
// independent ensemble oracle for thermal_energy.
double gibbs_energy_oracle(const SparseMatrix& h, double beta);

// Tr((−1)^F e^{−βH}) / Tr(e^{−βH}) with F the fermion-number projector
// (b₂†b₂, or b†b for the free model), on the single space.
double witten_index(const SparseMatrix& h, const SparseMatrix& fermion_number, double beta);

// Closed forms, all with x = e^{−βω₁}:
double thermal_energy_closed_form(double beta, double omega1);   // ω₁(x/(1−x) + x/(1+x))
double witten_index_closed_form(double beta, double omega1);     // (1−x)/(1+x)
double goldstino_norm_closed_form(double beta, double omega1);   // √x/√(1−x²)

// --------------------------- Goldstino states -------------------------------

struct GoldstinoStates {
    double norm1 = 0.0;  // ‖G_2S|0(β)⟩‖ = ‖a₂†b₂|0(β)⟩‖
    double norm2 = 0.0;  // ‖G_2S†|0(β)⟩‖ = ‖b₂†a₂|0(β)⟩‖
    StateVector state1, state2;  // normalized when defined
    bool state1_defined = false;  // false at T = 0 (zero norm), not an error
    bool state2_defined = false;
};

GoldstinoStates goldstino_states(const ThermalVacuum& vacuum, const SparseMatrix& g2s,
                                 const SparseMatrix& g2s_dagger);

// The two Goldstino norms computed without materializing the cubic-size
// doubled-space fermion-mode matrices.
std::pair<double, double> goldstino_norms(const ThermalVacuum& vacuum,
                                          const TransformedModes& modes);

// --------------------------- per-β records ----------------------------------

// One temperature point of the observable pipeline. Energies are reported in
// units of ω₁ (including the closed form and the Gibbs oracle, for direct
// comparability).
struct ObservableRecord {
    double beta = 0.0;
    double T_over_omega1 = 0.0;
    double E0_over_omega1 = 0.0;
    double E0_closed_form = 0.0;
    double gibbs_oracle = 0.0;
    double witten_numeric = 0.0;
    double witten_closed_form = 0.0;
    double goldstino_norm_numeric = 0.0;
    double goldstino_norm_closed_form = 0.0;
    int N_b_used = 0;
    double tail_mass = 0.0;
    bool flagged = false;  // tail mass above tolerance at the cutoff cap
};

struct ThermalOptions {
    int boson_cutoff = 0;  // 0 → adaptive: start at auto_start, double until the
                           // tail passes, cap at auto_cap (then flag)
    int auto_start = 32;
    int auto_cap = 512;
    double tail_tolerance = 1e-8;
    FermionConvention convention = FermionConvention::anticommuting;
};

ObservableRecord compute_observables(const ModelParams& params, double beta,
                                     const ThermalOptions& options);

}  // namespace susyosc

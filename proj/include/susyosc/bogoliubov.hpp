// bogoliubov.hpp — Structure-preserving mode transformation a₂ = a + β₁b†b,
// b₂ = exp[β₂(a† − a)]·b, and the reduction of the interacting Hamiltonian to
// SUSY harmonic-oscillator form.

#pragma once

#include "susyosc/fock.hpp"
#include "susyosc/model.hpp"

#include <optional>
#include <utility>

namespace susyosc {

struct TransformParams {
    double beta1 = 0.0;  // fermion-occupancy shift of the boson mode
    double beta2 = 0.0;  // boson-displacement dressing of the fermion mode
};

// The doubled-space b₂ matrices are cubic-size in the boson dimension (the
// displacement factor is dense on its slot), so they are materialized only up
// to a size threshold; the thermal pipeline works from displacement_local and
// the sparse a₂ family instead.
enum class FermionModePolicy { automatic, materialize, factored_only };

struct TransformedModes {
    ModeOperator a2, a2_dagger;
    ModeOperator b2, b2_dagger;  // empty matrices when not materialized
    // Tilde copies, populated on doubled spaces.
    std::optional<ModeOperator> a2_tilde, a2_tilde_dagger;
    std::optional<ModeOperator> b2_tilde, b2_tilde_dagger;

    TransformParams params;
    FockSpaceConfig space;
    Matrix displacement_local;  // dense boson-factor D(β₂) for matrix-free use
    bool fermion_modes_materialized = true;
};

// Builds the transformed ladder set (tilde copies included on doubled spaces).
// Algebra preservation requires β₁ = β₂: for independent parameters the cross
// commutator [a₂, b₂] = (β₂ − β₁)·D(β₂)·b survives, which the verifier detects.
TransformedModes transform_modes(const TransformParams& params, const FockSpaceConfig& cfg,
                                 FermionModePolicy policy = FermionModePolicy::automatic);

// The canonical specialization β₁ = β₂ = α₂/ω₁.
TransformedModes canonical_transform(const ModelParams& model_params,
                                     const FockSpaceConfig& cfg,
                                     FermionModePolicy policy = FermionModePolicy::automatic);

// H_reduced = ω₁(a₂†a₂ + b₂†b₂) and the guarded residual ‖H − H_reduced‖;
// for canonical parameters the reduction is an exact identity on the truncated
// space, so the residual sits at roundoff. Single-space bundles.
std::pair<SparseMatrix, double> reduce_hamiltonian(const HamiltonianBundle& bundle,
                                                   const TransformedModes& modes);

// G_2S = a₂†·b₂ and its adjoint — the supercharges in the quasiparticle basis.
std::pair<SparseMatrix, SparseMatrix> transformed_supercharges(const TransformedModes& modes);

}  // namespace susyosc

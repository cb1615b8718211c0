// bogoliubov.cpp — Mode transformation and Hamiltonian reduction.

#include "susyosc/bogoliubov.hpp"

#include <cmath>

namespace susyosc {

namespace {

// Above this boson dimension, doubled-space b₂ matrices (cubic nonzero count)
// are not worth materializing.
constexpr int kMaterializeBosonDimLimit = 160;

bool should_materialize(const FockSpaceConfig& cfg, FermionModePolicy policy) {
    switch (policy) {
        case FermionModePolicy::materialize: return true;
        case FermionModePolicy::factored_only: return false;
        case FermionModePolicy::automatic:
            return !cfg.doubled || cfg.boson_dim() <= kMaterializeBosonDimLimit;
    }
    return true;
}

// One sector (tilde or not): a₂ = a + β₁n_f, b₂ = D(β₂)·b.
void build_sector(const TransformParams& params, const FockSpaceConfig& cfg, bool tilde,
                  bool materialize, ModeOperator& a2, ModeOperator& a2_dagger,
                  ModeOperator& b2, ModeOperator& b2_dagger) {
    const auto [a, a_dag] = build_boson_ladder(cfg, tilde);
    const auto [b, b_dag] = build_fermion_ladder(cfg, tilde);
    const SparseMatrix n_f = b_dag.matrix * b.matrix;

    a2 = a;
    a2.matrix = a.matrix + params.beta1 * n_f;
    a2_dagger = a2.dag();

    b2 = b;
    b2_dagger = b_dag;
    if (materialize) {
        const ModeOperator disp = displacement_operator(cfg, params.beta2, tilde);
        b2.matrix = disp.matrix * b.matrix;
        b2_dagger.matrix = b2.matrix.adjoint();
    } else {
        b2.matrix = SparseMatrix();
        b2_dagger.matrix = SparseMatrix();
    }
}

}  // namespace

TransformedModes transform_modes(const TransformParams& params, const FockSpaceConfig& cfg,
                                 FermionModePolicy policy) {
    cfg.validate();
    if (!std::isfinite(params.beta1) || !std::isfinite(params.beta2)) {
        throw std::invalid_argument("transform_modes: parameters must be finite");
    }

    TransformedModes modes;
    modes.params = params;
    modes.space = cfg;
    modes.fermion_modes_materialized = should_materialize(cfg, policy);
    modes.displacement_local = displacement_factor(cfg.boson_dim(), params.beta2);
    const double defect =
        displacement_window_defect(cfg.boson_dim(), params.beta2, cfg.guarded_level());
    if (defect > cfg.tail_tolerance) {
        throw std::runtime_error(
            "transform_modes: displacement window defect exceeds tail tolerance "
            "(insufficient N_b)");
    }

    build_sector(params, cfg, false, modes.fermion_modes_materialized, modes.a2,
                 modes.a2_dagger, modes.b2, modes.b2_dagger);
    if (cfg.doubled) {
        ModeOperator a2t, a2t_dag, b2t, b2t_dag;
        build_sector(params, cfg, true, modes.fermion_modes_materialized, a2t, a2t_dag,
                     b2t, b2t_dag);
        modes.a2_tilde = std::move(a2t);
        modes.a2_tilde_dagger = std::move(a2t_dag);
        modes.b2_tilde = std::move(b2t);
        modes.b2_tilde_dagger = std::move(b2t_dag);
    }
    return modes;
}

TransformedModes canonical_transform(const ModelParams& model_params,
                                     const FockSpaceConfig& cfg, FermionModePolicy policy) {
    model_params.validate();
    const double beta = model_params.lambda();
    return transform_modes(TransformParams{beta, beta}, cfg, policy);
}

std::pair<SparseMatrix, double> reduce_hamiltonian(const HamiltonianBundle& bundle,
                                                   const TransformedModes& modes) {
    if (!bundle.space.same_space(modes.space)) {
        throw std::invalid_argument("reduce_hamiltonian: bundle and modes on different spaces");
    }
    if (bundle.space.doubled) {
        throw std::invalid_argument(
            "reduce_hamiltonian: the reduction residual is certified on the single space");
    }
    if (!modes.fermion_modes_materialized) {
        throw std::invalid_argument("reduce_hamiltonian: fermion modes not materialized");
    }
    const double omega1 = bundle.params.omega1;
    SparseMatrix h_reduced =
        omega1 * (SparseMatrix(modes.a2_dagger.matrix * modes.a2.matrix) +
                  SparseMatrix(modes.b2_dagger.matrix * modes.b2.matrix));
    const double residual = guarded_norm(SparseMatrix(bundle.H - h_reduced), bundle.space);
    return {std::move(h_reduced), residual};
}

std::pair<SparseMatrix, SparseMatrix> transformed_supercharges(const TransformedModes& modes) {
    if (!modes.fermion_modes_materialized) {
        throw std::invalid_argument("transformed_supercharges: fermion modes not materialized");
    }
    SparseMatrix g2s = modes.a2_dagger.matrix * modes.b2.matrix;
    SparseMatrix g2s_dagger = g2s.adjoint();
    return {std::move(g2s), std::move(g2s_dagger)};
}

}  // namespace susyosc

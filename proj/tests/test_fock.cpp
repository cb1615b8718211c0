// test_fock.cpp — Fock-space primitives: ladders, embeddings, displacement,
// matrix exponentials, and guarded diagnostics.

#include "susyosc/fock.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace susyosc;

namespace {

FockSpaceConfig make_cfg(int boson_cutoff, bool doubled = false, int guard_band = -1) {
    FockSpaceConfig cfg;
    cfg.boson_cutoff = boson_cutoff;
    cfg.guard_band = guard_band;
    cfg.doubled = doubled;
    return cfg;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix random_hermitian(int dim, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    }
    return 0.5 * (m + Matrix(m.adjoint()));
}

}  // namespace

// ------------------------------ configuration -------------------------------

TEST_CASE("config_validation_rejects_bad_inputs") {
    CHECK_THROWS_AS(make_cfg(0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_cfg(8, false, 8).validate(), std::invalid_argument);
    FockSpaceConfig bad_tail = make_cfg(8);
    bad_tail.tail_tolerance = 0.0;
    CHECK_THROWS_AS(bad_tail.validate(), std::invalid_argument);
    CHECK_NOTHROW(make_cfg(8).validate());
}

TEST_CASE("default_guard_band_scales_with_cutoff") {
    CHECK(FockSpaceConfig::default_guard(8) == 4);
    CHECK(FockSpaceConfig::default_guard(4) == 3);
    CHECK(FockSpaceConfig::default_guard(64) == 6);
    CHECK(FockSpaceConfig::default_guard(200) == 20);
    CHECK(make_cfg(64).guarded_level() == 58);
    CHECK(make_cfg(64, false, 10).guard() == 10);
}

TEST_CASE("displacement_aware_guard_policy") {
    // Widens with |lambda|, clamps to keep a usable window.
    CHECK(displacement_aware_guard(64, 0.0) == FockSpaceConfig::default_guard(64));
    CHECK(displacement_aware_guard(64, 2.0) == 48);  // 3*N_b/4 clamp
    CHECK(displacement_aware_guard(8, 10.0) == 6);
    CHECK(displacement_aware_guard(128, 2.0) >=
          static_cast<int>(std::ceil(std::exp(1.0) * 2.0 * std::sqrt(128.0))));
    CHECK_THROWS_AS(displacement_aware_guard(0, 1.0), std::invalid_argument);
}

TEST_CASE("composite_index_layout") {
    const FockSpaceConfig single = make_cfg(3, false, 1);
    CHECK(single.dim() == 8);
    CHECK(composite_index(single, 2, 1) == 5);

    const FockSpaceConfig doubled = make_cfg(3, true, 1);
    CHECK(doubled.dim() == 64);
    CHECK(composite_index(doubled, 1, 1, 2, 0) == ((1 * 2 + 1) * 4 + 2) * 2);
    CHECK(doubled.slot_dim(0) == 4);
    CHECK(doubled.slot_dim(1) == 2);
    CHECK(doubled.slot_dim(3) == 2);
    CHECK_THROWS_AS(single.slot_dim(2), std::out_of_range);
}

// ------------------------------ ladder matrices ------------------------------

TEST_CASE("boson_ladder_matrix_elements") {
    const Matrix a = boson_lowering(4);
    CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
    // Hard cutoff: raising annihilates the top level.
    const Matrix a_dag = boson_raising(4);
    CHECK((a_dag.col(3).cwiseAbs().maxCoeff()) == 0.0);
}

TEST_CASE("fermion_ladders_and_parity") {
    const Matrix b = fermion_lowering();
    const Matrix b_dag = fermion_raising();
    CHECK(std::abs(b(0, 1) - 1.0) < 1e-15);
    CHECK(max_abs(b * b) == 0.0);
    CHECK(max_abs(fermion_parity() - (Matrix::Identity(2, 2) - 2.0 * b_dag * b)) < 1e-15);
}

TEST_CASE("embedded_ladders_commute_and_anticommute") {
    const FockSpaceConfig cfg = make_cfg(6, true, 2);
    const auto [a, a_dag] = build_boson_ladder(cfg);
    const auto [b, b_dag] = build_fermion_ladder(cfg);
    const auto [bt, bt_dag] = build_fermion_ladder(cfg, true);

    // Boson and fermion factors commute.
    CHECK(SparseMatrix(a.matrix * b.matrix - b.matrix * a.matrix).norm() < 1e-14);
    // Under the anticommuting convention, distinct fermion modes anticommute.
    CHECK(SparseMatrix(b.matrix * bt.matrix + bt.matrix * b.matrix).norm() < 1e-14);
    CHECK(SparseMatrix(b.matrix * bt_dag.matrix + bt_dag.matrix * b.matrix).norm() < 1e-14);

    FockSpaceConfig commuting = cfg;
    commuting.convention = FermionConvention::commuting;
    const auto [bc, bc_dag] = build_fermion_ladder(commuting);
    const auto [btc, btc_dag] = build_fermion_ladder(commuting, true);
    CHECK(SparseMatrix(bc.matrix * btc.matrix - btc.matrix * bc.matrix).norm() < 1e-14);
}

TEST_CASE("mode_operator_dagger_roundtrip") {
    const FockSpaceConfig cfg = make_cfg(5);
    const auto [a, a_dag] = build_boson_ladder(cfg);
    CHECK(a.dagger == false);
    CHECK(a_dag.dagger == true);
    CHECK(a.mode_tag == ModeTag::boson);
    CHECK(SparseMatrix(a.dag().matrix - a_dag.matrix).norm() == 0.0);
    CHECK(a.dag().dag().dagger == a.dagger);
}

// ------------------------------ displacement --------------------------------

TEST_CASE("displacement_vacuum_overlap_is_gaussian") {
    // <0|exp[lambda(a_dag - a)]|0> = exp(-lambda^2/2)
    const Matrix d = displacement_factor(25, 1.0);
    CHECK(std::abs(d(0, 0) - std::exp(-0.5)) < 1e-12);
    const Matrix d2 = displacement_factor(25, 0.5);
    CHECK(std::abs(d2(0, 0) - std::exp(-0.125)) < 1e-12);
}

TEST_CASE("displacement_factor_exactly_unitary") {
    const Matrix d = displacement_factor(12, 0.8);
    CHECK(max_abs(Matrix(d.adjoint() * d) - Matrix::Identity(12, 12)) < 1e-13);
}

TEST_CASE("displacement_operator_certifies_guarded_window") {
    const FockSpaceConfig cfg = make_cfg(24, false, displacement_aware_guard(24, 0.5));
    const ModeOperator d = displacement_operator(cfg, 0.5);
    const ModeOperator d_inv = displacement_operator(cfg, -0.5);
    CHECK(guarded_norm(
              SparseMatrix(d.matrix * d_inv.matrix -
                           SparseMatrix(Matrix::Identity(cfg.dim(), cfg.dim()).sparseView())),
              cfg) < 1e-10);

    // The window defect is the mass the displaced guarded states leak past the
    // cutoff: negligible behind an adequate guard, fatal behind the default one.
    CHECK(displacement_window_defect(25, 0.5, cfg.guarded_level()) < 1e-12);
    CHECK(displacement_window_defect(25, 0.5, 20) > 1e-3);
    CHECK(displacement_window_defect(25, 0.0, 20) == 0.0);
    CHECK_THROWS_AS(displacement_window_defect(25, 0.5, 25), std::invalid_argument);

    // A displacement too large for the cutoff fails its own certification.
    CHECK_THROWS_AS(displacement_operator(make_cfg(8), 3.0), std::runtime_error);
}

TEST_CASE("displacement_embeds_at_tilde_slot") {
    const FockSpaceConfig cfg = make_cfg(12, true, displacement_aware_guard(12, 0.4));
    const ModeOperator d = displacement_operator(cfg, 0.4, true);
    const StateVector tilde_boson_flip = fock_state(cfg, 2, 1, 0, 0);
    const Vector moved = d.matrix * tilde_boson_flip.amplitudes;
    // Acts only on the tilde-boson slot: the non-tilde labels stay (n_b=2, n_f=1).
    for (Eigen::Index i = 0; i < moved.size(); ++i) {
        if (std::abs(moved(i)) < 1e-14) continue;
        CHECK(i / 2 / cfg.boson_dim() == 2 * 2 + 1);
    }
}

// ------------------------------ slot application ----------------------------

TEST_CASE("apply_slot_operator_matches_embedding") {
    const FockSpaceConfig cfg = make_cfg(3, true, 1);
    const Matrix local = random_hermitian(cfg.boson_dim(), 7);
    std::mt19937 gen(11);
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(cfg.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(dist(gen), dist(gen));

    for (int slot : {0, 2}) {
        const ModeOperator embedded = tensor_embed(local, slot, cfg);
        const Vector direct = embedded.matrix * v;
        const Vector matrix_free = apply_slot_operator(cfg, slot, local, v);
        CHECK((direct - matrix_free).norm() < 1e-12);
    }
    CHECK_THROWS_AS(apply_slot_operator(cfg, 1, local, v), std::invalid_argument);
}

// ------------------------------ exponentials --------------------------------

TEST_CASE("matrix_exponential_routes_agree") {
    const Matrix h = random_hermitian(12, 3);
    const Matrix via_eig = matrix_exponential(h, MatrixStructure::hermitian);
    const Matrix via_pade = matrix_exponential(h, MatrixStructure::general);
    CHECK(max_abs(via_eig - via_pade) < 1e-11 * max_abs(via_eig));

    const Matrix k = Complex(0.0, 1.0) * h;  // anti-Hermitian
    const Matrix u_eig = matrix_exponential(k, MatrixStructure::anti_hermitian);
    const Matrix u_pade = matrix_exponential(k, MatrixStructure::general);
    CHECK(max_abs(u_eig - u_pade) < 1e-11);
    CHECK(max_abs(Matrix(u_eig.adjoint() * u_eig) - Matrix::Identity(12, 12)) < 1e-13);
}

TEST_CASE("matrix_exponential_rejects_wrong_structure") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = 1.0;  // neither Hermitian nor anti-Hermitian
    CHECK_THROWS_AS(matrix_exponential(m, MatrixStructure::hermitian), std::invalid_argument);
    CHECK_THROWS_AS(matrix_exponential(m, MatrixStructure::anti_hermitian),
                    std::invalid_argument);
    CHECK_NOTHROW(matrix_exponential(m, MatrixStructure::general));
}

TEST_CASE("expm_action_chebyshev_matches_dense_route") {
    const FockSpaceConfig cfg = make_cfg(8);
    const auto [a, a_dag] = build_boson_ladder(cfg);
    const SparseMatrix k = 0.7 * (a_dag.matrix - a.matrix);  // anti-Hermitian
    const Matrix u = matrix_exponential(Matrix(k), MatrixStructure::anti_hermitian);

    const StateVector start = fock_state(cfg, 1, 1);
    const double bound = 2.0 * 0.7 * std::sqrt(static_cast<double>(cfg.boson_cutoff)) + 1.0;
    const Vector via_cheb = anti_hermitian_expm_action(
        [&k](const Vector& x) { return Vector(k * x); }, start.amplitudes, bound);
    CHECK((via_cheb - u * start.amplitudes).norm() < 1e-12);
    CHECK(std::abs(via_cheb.norm() - 1.0) < 1e-12);

    CHECK_THROWS_AS(anti_hermitian_expm_action(
                        [&k](const Vector& x) { return Vector(k * x); }, start.amplitudes,
                        -1.0),
                    std::invalid_argument);
}

// ------------------------------ guarded norms -------------------------------

TEST_CASE("guarded_norm_ignores_top_band") {
    const FockSpaceConfig cfg = make_cfg(8, false, 4);
    Matrix m = Matrix::Zero(cfg.dim(), cfg.dim());
    const Eigen::Index top = composite_index(cfg, 8, 0);
    m(top, top) = 100.0;
    CHECK(guarded_norm(m, cfg) == 0.0);
    CHECK(spectral_norm(m) == 100.0);

    const Eigen::Index low = composite_index(cfg, 1, 1);
    m(low, low) = 3.0;
    CHECK(std::abs(guarded_norm(m, cfg) - 3.0) < 1e-13);
    CHECK(std::abs(guarded_norm(SparseMatrix(m.sparseView()), cfg) - 3.0) < 1e-13);
}

TEST_CASE("guarded_indices_respect_both_boson_slots") {
    const FockSpaceConfig cfg = make_cfg(4, true, 2);
    for (const Eigen::Index i : guarded_indices(cfg)) {
        Eigen::Index rest = i / 2;
        const int nt_b = static_cast<int>(rest % cfg.boson_dim());
        const int n_b = static_cast<int>(rest / cfg.boson_dim() / 2);
        CHECK(n_b <= cfg.guarded_level());
        CHECK(nt_b <= cfg.guarded_level());
    }
}

// ------------------------------ states --------------------------------------

TEST_CASE("fock_states_and_tail_mass") {
    const FockSpaceConfig cfg = make_cfg(8, false, 4);
    CHECK(boson_tail_mass(vacuum_state(cfg)) == 0.0);
    CHECK(boson_tail_mass(fock_state(cfg, 7, 0)) == 1.0);
    CHECK(boson_tail_mass(fock_state(cfg, 4, 1)) == 0.0);

    const FockSpaceConfig doubled = make_cfg(8, true, 4);
    CHECK(boson_tail_mass(fock_state(doubled, 0, 0, 7, 1)) == 1.0);
    CHECK(vacuum_state(doubled).norm() == 1.0);
}

TEST_CASE("normalized_rejects_zero_state") {
    const FockSpaceConfig cfg = make_cfg(4);
    StateVector zero{Vector::Zero(cfg.dim()), cfg};
    CHECK_THROWS_AS(zero.normalized(), std::runtime_error);
    CHECK(std::abs(fock_state(cfg, 2, 1).normalized().norm() - 1.0) < 1e-15);
}

// test_model.cpp — Hamiltonian construction, SUSY certification, spectra, and
// the frequency condition.

#include "susyosc/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace susyosc;

namespace {

FockSpaceConfig model_cfg(int boson_cutoff, double lambda) {
    FockSpaceConfig cfg;
    cfg.boson_cutoff = boson_cutoff;
    cfg.guard_band = displacement_aware_guard(boson_cutoff, lambda);
    return cfg;
}

}  // namespace

TEST_CASE("model_params_derived_quantities") {
    const ModelParams p{2.0, 1.0};
    CHECK(p.omega2() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(p.alpha1() == -1.0);
    CHECK(p.lambda() == 0.5);
    CHECK_THROWS_AS((ModelParams{-1.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ModelParams{0.0, 0.0}.validate()), std::invalid_argument);
    // alpha2 = 0 collapses omega2 to omega1 with no rounding.
    CHECK(ModelParams{0.7, 0.0}.omega2() == 0.7);
}

TEST_CASE("free_model_is_bitcompatible_with_zero_coupling") {
    const FockSpaceConfig cfg = model_cfg(24, 0.0);
    const HamiltonianBundle free = build_free_susy_oscillator(1.5, cfg);
    const HamiltonianBundle interacting = build_interacting_model(ModelParams{1.5, 0.0}, cfg);
    CHECK(SparseMatrix(free.H - interacting.H).norm() == 0.0);
    CHECK(SparseMatrix(free.G_S - interacting.G_S).norm() == 0.0);
    CHECK(free.omega2 == 1.5);
}

TEST_CASE("hamiltonian_split_reassembles") {
    const ModelParams params{1.0, 0.5};
    const FockSpaceConfig cfg = model_cfg(24, params.lambda());
    const HamiltonianBundle bundle = build_interacting_model(params, cfg);
    CHECK(SparseMatrix(bundle.H - bundle.H0 - bundle.Hint).norm() < 1e-14);
    // Hermiticity of each piece.
    CHECK(SparseMatrix(bundle.H - SparseMatrix(bundle.H.adjoint())).norm() < 1e-13);
    CHECK(SparseMatrix(bundle.Hint - SparseMatrix(bundle.Hint.adjoint())).norm() < 1e-13);
    // G_S is nilpotent: the fermion factor appears once.
    CHECK(SparseMatrix(bundle.G_S * bundle.G_S).norm() < 1e-13);
}

TEST_CASE("susy_exactness_certifies_interacting_model") {
    const ModelParams params{1.0, 0.5};
    const FockSpaceConfig cfg = model_cfg(48, params.lambda());
    const SusyExactnessReport report =
        check_susy_exactness(build_interacting_model(params, cfg));
    CHECK(report.commutator.passed);
    CHECK(report.ground_annihilation.passed);
    CHECK(std::abs(report.ground_energy) < 1e-9);
    CHECK(report.commutator.relation_name == "[H, G_S] = 0");
}

TEST_CASE("susy_exactness_detects_detuned_frequency") {
    const ModelParams params{1.0, 0.5};
    const FockSpaceConfig cfg = model_cfg(32, params.lambda());
    const HamiltonianBundle detuned = build_detuned_model(params, 2.0, cfg);
    const SusyExactnessReport report = check_susy_exactness(detuned);
    CHECK(!report.commutator.passed);
    CHECK(report.commutator.max_deviation > 1e-3);
    CHECK(detuned.omega2 == 2.0);
    CHECK_THROWS_AS(build_detuned_model(params, -1.0, cfg), std::invalid_argument);
}

TEST_CASE("interacting_spectrum_is_susy_oscillator") {
    const ModelParams params{1.0, 0.5};
    const FockSpaceConfig cfg = model_cfg(48, params.lambda());
    const HamiltonianBundle bundle = build_interacting_model(params, cfg);
    const std::vector<EnergyLevel> levels = spectrum(bundle, 7);
    REQUIRE(levels.size() == 4);
    const int expected_mult[] = {1, 2, 2, 2};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        CHECK(levels[i].multiplicity == expected_mult[i]);
        CHECK(std::abs(levels[i].energy - static_cast<double>(i)) < 1e-8);
    }
}

TEST_CASE("free_spectrum_scales_with_omega1") {
    const FockSpaceConfig cfg = model_cfg(32, 0.0);
    const HamiltonianBundle bundle = build_free_susy_oscillator(2.0, cfg);
    const std::vector<EnergyLevel> levels = spectrum(bundle, 5);
    REQUIRE(levels.size() == 3);
    CHECK(levels[0].multiplicity == 1);
    CHECK(std::abs(levels[0].energy) < 1e-10);
    CHECK(levels[1].multiplicity == 2);
    CHECK(std::abs(levels[1].energy - 2.0) < 1e-10);
    CHECK(levels[2].multiplicity == 2);
    CHECK(std::abs(levels[2].energy - 4.0) < 1e-10);
}

TEST_CASE("detuned_spectrum_splits_degeneracy") {
    const FockSpaceConfig cfg = model_cfg(32, 0.0);
    const HamiltonianBundle bundle = build_detuned_model(ModelParams{1.0, 0.0}, 1.25, cfg);
    const std::vector<EnergyLevel> levels = spectrum(bundle, 5);
    REQUIRE(levels.size() == 5);
    const double expected[] = {0.0, 1.0, 1.25, 2.0, 2.25};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        CHECK(levels[i].multiplicity == 1);
        CHECK(std::abs(levels[i].energy - expected[i]) < 1e-10);
    }
}

TEST_CASE("spectrum_rejects_bad_requests") {
    const ModelParams params{1.0, 0.25};
    const FockSpaceConfig cfg = model_cfg(16, params.lambda());
    const HamiltonianBundle bundle = build_interacting_model(params, cfg);
    CHECK_THROWS_AS(spectrum(bundle, 0), std::out_of_range);
    CHECK_THROWS_AS(spectrum(bundle, 2 * (cfg.guarded_level() + 1) + 1), std::out_of_range);
    CHECK(spectrum(bundle, 1).size() == 1);
    CHECK(std::abs(spectrum(bundle, 1).front().energy) < 1e-9);

    FockSpaceConfig doubled = cfg;
    doubled.doubled = true;
    HamiltonianBundle fake = bundle;
    fake.space = doubled;
    CHECK_THROWS_AS(spectrum(fake, 3), std::invalid_argument);
}

TEST_CASE("solve_frequencies_reproduces_roots") {
    const FrequencySolution s1 = solve_frequencies(5.0, 2.0);
    CHECK(std::abs(s1.omega1_minus - 1.0) < 1e-12);
    CHECK(std::abs(s1.omega1_plus - 4.0) < 1e-12);
    CHECK(std::abs(s1.xi - 1.0) < 1e-12);
    CHECK(!s1.degenerate);

    const FrequencySolution s2 = solve_frequencies(4.0, 2.0);
    CHECK(s2.degenerate);
    CHECK(std::abs(s2.omega1_minus - 2.0) < 1e-12);
    CHECK(std::abs(s2.omega1_plus - 2.0) < 1e-12);
    CHECK(std::abs(s2.xi) < 1e-12);

    const FrequencySolution s3 = solve_frequencies(2.5, 1.0);
    CHECK(std::abs(s3.omega1_minus - 0.5) < 1e-12);
    CHECK(std::abs(s3.omega1_plus - 2.0) < 1e-12);
}

TEST_CASE("solve_frequencies_roots_roundtrip") {
    const double cases[][2] = {{5.0, 2.0}, {2.5, 1.0}, {10.0, 0.5}, {3.0, 1.4}};
    for (const auto& c : cases) {
        const FrequencySolution s = solve_frequencies(c[0], c[1]);
        for (const double root : {s.omega1_minus, s.omega1_plus}) {
            if (root == 0.0) continue;
            const ModelParams p{root, c[1]};
            CHECK(std::abs(p.omega2() - c[0]) < 1e-10 * c[0]);
        }
    }
}

TEST_CASE("solve_frequencies_rejects_complex_roots") {
    CHECK_THROWS_WITH_AS(solve_frequencies(3.0, 2.0),
                         doctest::Contains("no supersymmetric harmonic oscillator"),
                         std::domain_error);
    CHECK_THROWS_AS(solve_frequencies(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_frequencies(1.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("bundle_summary_reports_levels") {
    const ModelParams params{1.0, 0.5};
    const FockSpaceConfig cfg = model_cfg(32, params.lambda());
    const nlohmann::json j = bundle_summary(build_interacting_model(params, cfg), 7);
    CHECK(j.at("omega1") == 1.0);
    CHECK(j.at("omega2").get<double>() == doctest::Approx(1.25));
    CHECK(std::abs(j.at("ground_energy").get<double>()) < 1e-9);
    CHECK(j.at("levels").size() == 4);
}

TEST_CASE("standalone_hamiltonian_matches_bundle") {
    const ModelParams params{1.0, 0.4};
    const FockSpaceConfig cfg = model_cfg(16, params.lambda());
    const HamiltonianBundle bundle = build_interacting_model(params, cfg);
    CHECK(SparseMatrix(build_hamiltonian_matrix(params, cfg) - bundle.H).norm() == 0.0);

    FockSpaceConfig doubled = cfg;
    doubled.doubled = true;
    const SparseMatrix h = build_hamiltonian_matrix(params, doubled);
    CHECK(h.rows() == doubled.dim());
    // Acts on the non-tilde sector only.
    const Vector tilde_excited = fock_state(doubled, 0, 0, 1, 1).amplitudes;
    CHECK((h * tilde_excited).norm() < 1e-14);
    const Vector excited = fock_state(doubled, 1, 0, 0, 0).amplitudes;
    CHECK(std::abs((h * excited).dot(excited).real() - params.omega1) < 1e-13);
}

// model.cpp — SUSY oscillator construction and certification.

#include "susyosc/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace susyosc {

void ModelParams::validate() const {
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) {
        throw std::invalid_argument("ModelParams: omega1 must be positive and finite");
    }
    if (!std::isfinite(alpha2)) {
        throw std::invalid_argument("ModelParams: alpha2 must be finite");
    }
}

void to_json(nlohmann::json& j, const FrequencySolution& solution) {
    j = nlohmann::json{{"omega1_minus", solution.omega1_minus},
                       {"omega1_plus", solution.omega1_plus},
                       {"xi", solution.xi},
                       {"degenerate", solution.degenerate}};
}

// --------------------------- builders ----------------------------------------

namespace {

HamiltonianBundle build_with_omega2(const ModelParams& params, double omega2,
                                    const FockSpaceConfig& cfg) {
    params.validate();
    cfg.validate();

    const auto [a, a_dag] = build_boson_ladder(cfg);
    const auto [b, b_dag] = build_fermion_ladder(cfg);
    const SparseMatrix n_b = a_dag.matrix * a.matrix;
    const SparseMatrix n_f = b_dag.matrix * b.matrix;

    HamiltonianBundle bundle;
    bundle.params = params;
    bundle.space = cfg;
    bundle.omega2 = omega2;
    bundle.H0 = params.omega1 * n_b + omega2 * n_f;
    bundle.Hint = params.alpha2 * ((a_dag.matrix + a.matrix) * n_f);
    bundle.H = bundle.H0 + bundle.Hint;

    // G_S = a†·b·D(λ); the displacement commutes with the fermion factor.
    const ModeOperator disp = displacement_operator(cfg, params.lambda());
    bundle.G_S = a_dag.matrix * b.matrix * disp.matrix;
    bundle.G_S_dagger = bundle.G_S.adjoint();
    return bundle;
}

}  // namespace

HamiltonianBundle build_free_susy_oscillator(double omega1, const FockSpaceConfig& cfg) {
    return build_interacting_model(ModelParams{omega1, 0.0}, cfg);
}

HamiltonianBundle build_interacting_model(const ModelParams& params,
                                          const FockSpaceConfig& cfg) {
    return build_with_omega2(params, params.omega2(), cfg);
}

HamiltonianBundle build_detuned_model(const ModelParams& params, double omega2,
                                      const FockSpaceConfig& cfg) {
    if (!(omega2 > 0.0) || !std::isfinite(omega2)) {
        throw std::invalid_argument("build_detuned_model: omega2 must be positive and finite");
    }
    return build_with_omega2(params, omega2, cfg);
}

SparseMatrix build_hamiltonian_matrix(const ModelParams& params, const FockSpaceConfig& cfg) {
    params.validate();
    cfg.validate();
    const auto [a, a_dag] = build_boson_ladder(cfg);
    const auto [b, b_dag] = build_fermion_ladder(cfg);
    const SparseMatrix n_b = a_dag.matrix * a.matrix;
    const SparseMatrix n_f = b_dag.matrix * b.matrix;
    return params.omega1 * n_b + params.omega2() * n_f +
           params.alpha2 * ((a_dag.matrix + a.matrix) * n_f);
}

// --------------------------- SUSY certification -----------------------------

SusyExactnessReport check_susy_exactness(const HamiltonianBundle& bundle, double tolerance) {
    const FockSpaceConfig& cfg = bundle.space;
    if (cfg.doubled) {
        throw std::invalid_argument(
            "check_susy_exactness: exactness is certified on the single space");
    }

    SusyExactnessReport report;
    const SparseMatrix comm = bundle.H * bundle.G_S - bundle.G_S * bundle.H;
    report.commutator.relation_name = "[H, G_S] = 0";
    report.commutator.max_deviation = guarded_norm(comm, cfg);
    report.commutator.tolerance = tolerance;
    report.commutator.passed = report.commutator.max_deviation < tolerance;
    report.commutator.subspace_dim = static_cast<Eigen::Index>(guarded_indices(cfg).size());

    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(bundle.H));
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("check_susy_exactness: eigendecomposition failed");
    }
    const Eigen::VectorXd w = es.eigenvalues();
    report.ground_energy = w(0);

    // Degenerate ground spaces are handled by sweeping the whole lowest
    // eigenvalue cluster.
    const double cluster_tol = 1e-8 * bundle.params.omega1;
    double worst = 0.0;
    Eigen::Index cluster = 0;
    for (Eigen::Index i = 0; i < w.size() && w(i) - w(0) <= cluster_tol; ++i) {
        const Vector v = es.eigenvectors().col(i);
        worst = std::max({worst, (bundle.G_S * v).norm(), (bundle.G_S_dagger * v).norm()});
        ++cluster;
    }
    report.ground_annihilation.relation_name = "G_S|0_H> = 0 and G_S_dag|0_H> = 0";
    report.ground_annihilation.max_deviation = worst;
    report.ground_annihilation.tolerance = tolerance;
    report.ground_annihilation.passed = worst < tolerance;
    report.ground_annihilation.subspace_dim = cluster;
    return report;
}

FrequencySolution solve_frequencies(double omega2, double alpha2) {
    if (!std::isfinite(omega2) || !std::isfinite(alpha2)) {
        throw std::invalid_argument("solve_frequencies: parameters must be finite");
    }
    if (!(omega2 > 0.0)) {
        throw std::invalid_argument("solve_frequencies: omega2 must be positive");
    }
    const double disc = omega2 * omega2 - 4.0 * alpha2 * alpha2;
    const double scale = omega2 * omega2;
    if (disc < -1e-12 * scale) {
        throw std::domain_error(
            "solve_frequencies: no supersymmetric harmonic oscillator for these parameters "
            "(omega2 < 2|alpha2| gives complex roots)");
    }

    FrequencySolution solution;
    solution.xi = omega2 - 2.0 * alpha2;
    solution.degenerate = disc <= 1e-12 * scale;
    if (solution.degenerate) {
        solution.omega1_minus = solution.omega1_plus = 0.5 * omega2;
        return solution;
    }
    // Cancellation-safe quadratic: larger root first, smaller via the product
    // of roots ω₁₊ω₁₋ = α₂².
    solution.omega1_plus = 0.5 * (omega2 + std::sqrt(disc));
    solution.omega1_minus =
        alpha2 == 0.0 ? 0.0 : (alpha2 * alpha2) / solution.omega1_plus;
    return solution;
}

// --------------------------- spectrum ---------------------------------------

std::vector<EnergyLevel> spectrum(const HamiltonianBundle& bundle, int k,
                                  double cluster_tolerance) {
    const FockSpaceConfig& cfg = bundle.space;
    if (cfg.doubled) {
        throw std::invalid_argument("spectrum: meaningful on single-space bundles");
    }
    const int guarded_dim = (cfg.guarded_level() + 1) * 2;
    if (k < 1 || k > guarded_dim) {
        throw std::out_of_range("spectrum: k must lie within the guarded subspace dimension");
    }
    const double tol =
        cluster_tolerance < 0.0 ? 1e-8 * bundle.params.omega1 : cluster_tolerance;

    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(bundle.H), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("spectrum: eigendecomposition failed");
    }
    const Eigen::VectorXd w = es.eigenvalues();

    std::vector<EnergyLevel> levels;
    double sum = w(0);
    int count = 1;
    for (int i = 1; i < k; ++i) {
        if (w(i) - w(i - 1) <= tol) {
            sum += w(i);
            ++count;
        } else {
            levels.push_back({sum / count, count});
            sum = w(i);
            count = 1;
        }
    }
    levels.push_back({sum / count, count});
    return levels;
}

nlohmann::json bundle_summary(const HamiltonianBundle& bundle, int k) {
    const std::vector<EnergyLevel> levels = spectrum(bundle, k);
    nlohmann::json j{{"omega1", bundle.params.omega1},
                     {"alpha2", bundle.params.alpha2},
                     {"omega2", bundle.omega2},
                     {"boson_cutoff", bundle.space.boson_cutoff},
                     {"ground_energy", levels.front().energy}};
    nlohmann::json rows = nlohmann::json::array();
    for (const EnergyLevel& level : levels) {
        rows.push_back({{"energy", level.energy}, {"multiplicity", level.multiplicity}});
    }
    j["levels"] = rows;
    return j;
}

}  // namespace susyosc

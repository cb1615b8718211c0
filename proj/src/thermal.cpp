// thermal.cpp — Thermo-field doubling, thermal vacuum construction, and
// thermal observables.

#include "susyosc/thermal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

namespace susyosc {

// --------------------------- thermal parameters -----------------------------

ThermalParams ThermalParams::from_beta(double beta, double omega1) {
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) {
        throw std::invalid_argument("ThermalParams: omega1 must be positive and finite");
    }
    if (std::isnan(beta) || !(beta > 0.0)) {
        throw std::invalid_argument("ThermalParams: beta must be positive");
    }
    ThermalParams params;
    params.beta = beta;
    params.omega1 = omega1;
    if (std::isinf(beta)) return params;  // zero-temperature sentinel: angles stay 0

    const double u = std::exp(-0.5 * beta * omega1);  // tan θ_f = tanh θ_b = u
    if (!(u < 1.0)) {
        throw std::invalid_argument(
            "ThermalParams: beta*omega1 too small to represent (theta_b diverges)");
    }
    params.theta_f = std::atan(u);
    params.theta_b = std::atanh(u);
    return params;
}

ThermalParams ThermalParams::from_temperature(double t_over_omega1, double omega1) {
    if (std::isnan(t_over_omega1) || t_over_omega1 < 0.0) {
        throw std::invalid_argument("ThermalParams: temperature must be >= 0");
    }
    if (t_over_omega1 == 0.0) {
        return from_beta(std::numeric_limits<double>::infinity(), omega1);
    }
    return from_beta(1.0 / (t_over_omega1 * omega1), omega1);
}

// --------------------------- tilde conjugation ------------------------------

namespace {

// Permutation sending each composite index to its slot-swapped image
// (n_b, n_f, ñ_b, ñ_f) ↦ (ñ_b, ñ_f, n_b, n_f).
std::vector<Eigen::Index> tilde_permutation(const FockSpaceConfig& cfg) {
    const Eigen::Index d_b = cfg.boson_dim();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(cfg.dim()));
    for (Eigen::Index i = 0; i < cfg.dim(); ++i) {
        Eigen::Index rest = i;
        const int nt_f = static_cast<int>(rest % 2);
        rest /= 2;
        const int nt_b = static_cast<int>(rest % d_b);
        rest /= d_b;
        const int n_f = static_cast<int>(rest % 2);
        const int n_b = static_cast<int>(rest / 2);
        perm[static_cast<std::size_t>(i)] = composite_index(cfg, nt_b, nt_f, n_b, n_f);
    }
    return perm;
}

}  // namespace

SparseMatrix tilde_map(const SparseMatrix& m, const FockSpaceConfig& cfg) {
    cfg.validate();
    if (!cfg.doubled) {
        throw std::invalid_argument("tilde_map: doubled space required");
    }
    if (m.rows() != cfg.dim() || m.cols() != cfg.dim()) {
        throw std::invalid_argument("tilde_map: matrix dimension mismatch");
    }
    const std::vector<Eigen::Index> perm = tilde_permutation(cfg);
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            triplets.emplace_back(perm[static_cast<std::size_t>(it.row())],
                                  perm[static_cast<std::size_t>(it.col())],
                                  std::conj(it.value()));
        }
    }
    SparseMatrix out(cfg.dim(), cfg.dim());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

ModeOperator tilde_conjugate(const ModeOperator& op) {
    ModeOperator out = op;
    out.matrix = tilde_map(op.matrix, op.space);
    switch (op.mode_tag) {
        case ModeTag::boson: out.mode_tag = ModeTag::tilde_boson; break;
        case ModeTag::fermion: out.mode_tag = ModeTag::tilde_fermion; break;
        case ModeTag::tilde_boson: out.mode_tag = ModeTag::boson; break;
        case ModeTag::tilde_fermion: out.mode_tag = ModeTag::fermion; break;
    }
    return out;
}

SparseMatrix double_hamiltonian(const HamiltonianBundle& bundle) {
    if (!bundle.space.doubled) {
        throw std::invalid_argument("double_hamiltonian: doubled-space bundle required");
    }
    return bundle.H - tilde_map(bundle.H, bundle.space);
}

// --------------------------- thermal rotation -------------------------------

namespace {

void require_doubled_modes(const TransformedModes& modes, const char* fn) {
    if (!modes.space.doubled || !modes.a2_tilde || !modes.a2_tilde_dagger) {
        throw std::invalid_argument(std::string(fn) + ": doubled-space modes required");
    }
}

// Bare fermion pair raiser b†b̃† (the displacement dressing of b₂†b̃₂† commutes
// out and is applied slot-locally).
SparseMatrix bare_fermion_pair_raise(const FockSpaceConfig& cfg) {
    const auto [b, b_dag] = build_fermion_ladder(cfg, false);
    const auto [bt, bt_dag] = build_fermion_ladder(cfg, true);
    return b_dag.matrix * bt_dag.matrix;
}

}  // namespace

ThermalRotation::ThermalRotation(const ThermalParams& params, const TransformedModes& modes)
    : space_(modes.space), params_(params), disp_local_(modes.displacement_local) {
    require_doubled_modes(modes, "ThermalRotation");
    pair_raise_boson_ = modes.a2_dagger.matrix * modes.a2_tilde_dagger->matrix;
    pair_lower_boson_ = pair_raise_boson_.adjoint();
    fermion_raise_ = bare_fermion_pair_raise(space_);
    fermion_lower_ = fermion_raise_.adjoint();

    // ‖−iG‖ ≤ 2θ_b·‖a₂†‖² + 2θ_f·‖b₂†b̃₂†‖ with ‖a₂†‖ ≤ √N_b + |β₁| and the
    // fermion pair a contraction of unitaries and projectors.
    const double amp = std::sqrt(static_cast<double>(space_.boson_cutoff)) +
                       std::abs(modes.params.beta1);
    norm_bound_ = 2.0 * params.theta_b * amp * amp + 2.0 * params.theta_f;
}

Vector ThermalRotation::apply(const Vector& v) const {
    if (v.size() != space_.dim()) {
        throw std::invalid_argument("ThermalRotation::apply: vector dimension mismatch");
    }
    Vector out = Vector::Zero(v.size());
    if (params_.theta_b != 0.0) {
        out.noalias() += params_.theta_b * (pair_raise_boson_ * v);
        out.noalias() -= params_.theta_b * (pair_lower_boson_ * v);
    }
    if (params_.theta_f != 0.0) {
        const Matrix disp_dag = disp_local_.adjoint();
        Vector raise = fermion_raise_ * v;
        raise = apply_slot_operator(space_, 0, disp_dag, raise);
        raise = apply_slot_operator(space_, 2, disp_dag, raise);
        Vector lower = fermion_lower_ * v;
        lower = apply_slot_operator(space_, 0, disp_local_, lower);
        lower = apply_slot_operator(space_, 2, disp_local_, lower);
        out += params_.theta_f * (raise - lower);
    }
    return out;
}

Matrix ThermalRotation::dense() const {
    const Eigen::Index d = space_.dim();
    Matrix m(d, d);
    Vector e = Vector::Zero(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        e(j) = 1.0;
        m.col(j) = apply(e);
        e(j) = 0.0;
    }
    return m;
}

ThermalRotation build_thermal_rotation(const ThermalParams& params,
                                       const TransformedModes& modes) {
    return ThermalRotation(params, modes);
}

// --------------------------- thermal vacuum ---------------------------------

namespace {

// (1/cosh θ_b)·e^{tanh θ_b·a₂†ã₂†}·(cos θ_f + sin θ_f·b₂†b̃₂†)|0⟩, the
// disentangled form of e^{−iG}|0⟩, evaluated analytically. On the fermion
// vacuum a₂† pairs bare quanta, giving tⁿ|n,n⟩. On the fermion-excited branch
// it acts displaced, e^{t(a†+β₁)(ã†+β₁)}·D†D̃†|0,0⟩; all raisers commute, so
// the |p,q⟩ amplitude is e^{tβ₁²−β₂²}·Σₙ tⁿ·μ^{p+q−2n}·√(p!q!)/(n!(p−n)!(q−n)!)
// with μ = tβ₁−β₂ — single-signed, summed in log space. Iterating the
// truncated pair raiser instead is unstable at large N_b: the displaced branch
// carries an ~1e-16 noise floor at high levels and each ladder step amplifies
// a level-k component by t·k/n.
Vector closed_form_vacuum(const ThermalParams& params, const TransformedModes& modes) {
    const FockSpaceConfig& cfg = modes.space;
    const int d = cfg.boson_dim();
    const double t = std::tanh(params.theta_b);
    const double beta1 = modes.params.beta1;
    const double beta2 = modes.params.beta2;

    std::vector<double> log_factorial(d + 1);
    for (int k = 0; k <= d; ++k) {
        log_factorial[k] = std::lgamma(k + 1.0);
    }

    Vector total = Vector::Zero(cfg.dim());
    double paired = std::cos(params.theta_f);
    for (int n = 0; n < d; ++n) {
        total(composite_index(cfg, n, 0, n, 0)) = paired;
        paired *= t;
    }

    // Boson amplitudes of the fermion-excited branch; the bare pair raiser
    // b†b̃† then carries the grading signs exactly as an operator route would.
    Vector branch = Vector::Zero(cfg.dim());
    const double mu = t * beta1 - beta2;
    const double prefactor = std::exp(t * beta1 * beta1 - beta2 * beta2);
    if (mu == 0.0) {
        double diag = prefactor;
        for (int p = 0; p < d; ++p) {
            branch(composite_index(cfg, p, 0, p, 0)) = diag;
            diag *= t;
        }
    } else {
        const double log_t = std::log(t);
        const double log_mu = std::log(std::abs(mu));
        for (int p = 0; p < d; ++p) {
            for (int q = 0; q < d; ++q) {
                double sum = 0.0;
                for (int n = 0; n <= std::min(p, q); ++n) {
                    sum += std::exp(n * log_t + (p + q - 2 * n) * log_mu +
                                    0.5 * (log_factorial[p] + log_factorial[q]) -
                                    log_factorial[n] - log_factorial[p - n] -
                                    log_factorial[q - n]);
                }
                const double sign = (mu < 0.0 && (p + q) % 2 == 1) ? -1.0 : 1.0;
                branch(composite_index(cfg, p, 0, q, 0)) = prefactor * sign * sum;
            }
        }
    }
    total += std::sin(params.theta_f) * (bare_fermion_pair_raise(cfg) * branch);
    return total / std::cosh(params.theta_b);
}

}  // namespace

ThermalVacuum thermal_vacuum(const ThermalParams& params, const TransformedModes& modes,
                             VacuumPath path, bool enforce_tail) {
    require_doubled_modes(modes, "thermal_vacuum");
    const FockSpaceConfig& cfg = modes.space;

    ThermalVacuum out;
    out.params = params;
    out.construction_path = path;
    if (params.zero_temperature()) {
        out.state = vacuum_state(cfg);
        return out;
    }

    Vector v;
    if (path == VacuumPath::matrix_exponential) {
        const ThermalRotation rotation(params, modes);
        v = anti_hermitian_expm_action(
            [&rotation](const Vector& x) { return rotation.apply(x); },
            vacuum_state(cfg).amplitudes, rotation.norm_bound());
    } else {
        v = closed_form_vacuum(params, modes);
    }

    StateVector state{std::move(v), cfg};
    out.tail_mass = boson_tail_mass(state);
    if (enforce_tail && out.tail_mass > cfg.tail_tolerance) {
        throw std::runtime_error(
            "thermal_vacuum: boson tail mass exceeds tail tolerance (insufficient N_b "
            "for this beta)");
    }
    out.state = state.normalized();
    return out;
}

std::pair<double, double> thermal_annihilator_defects(const ThermalVacuum& vacuum,
                                                      const TransformedModes& modes) {
    require_doubled_modes(modes, "thermal_annihilator_defects");
    if (!vacuum.state.space.same_space(modes.space)) {
        throw std::invalid_argument(
            "thermal_annihilator_defects: vacuum and modes on different spaces");
    }
    const FockSpaceConfig& cfg = modes.space;
    const Vector& v = vacuum.state.amplitudes;
    const double tb = vacuum.params.theta_b;
    const double tf = vacuum.params.theta_f;

    const Vector boson = std::cosh(tb) * (modes.a2.matrix * v) -
                         std::sinh(tb) * (modes.a2_tilde_dagger->matrix * v);

    // b₂ = D(β₂)·b and b̃₂† = b̃†·D̃(β₂)†, displacement factors applied slot-locally.
    const auto [b, b_dag] = build_fermion_ladder(cfg, false);
    const auto [bt, bt_dag] = build_fermion_ladder(cfg, true);
    Vector b2v = b.matrix * v;
    b2v = apply_slot_operator(cfg, 0, modes.displacement_local, b2v);
    Vector bt2dv = bt_dag.matrix * v;
    bt2dv = apply_slot_operator(cfg, 2, modes.displacement_local.adjoint(), bt2dv);
    const Vector fermion = std::cos(tf) * b2v - std::sin(tf) * bt2dv;

    return {boson.norm(), fermion.norm()};
}

// --------------------------- observables ------------------------------------

double thermal_energy(const ThermalVacuum& vacuum, const SparseMatrix& h) {
    const Vector& v = vacuum.state.amplitudes;
    if (h.rows() != v.size() || h.cols() != v.size()) {
        throw std::invalid_argument("thermal_energy: dimension mismatch");
    }
    return v.dot(h * v).real();
}

namespace {

void require_hermitian(const Matrix& m, const char* fn) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument(std::string(fn) + ": matrix must be Hermitian");
    }
}

void require_beta(double beta, const char* fn) {
    if (std::isnan(beta) || !(beta > 0.0)) {
        throw std::invalid_argument(std::string(fn) + ": beta must be positive");
    }
}

}  // namespace

double gibbs_energy_oracle(const SparseMatrix& h, double beta) {
    require_beta(beta, "gibbs_energy_oracle");
    const Matrix hd(h);
    require_hermitian(hd, "gibbs_energy_oracle");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hd, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("gibbs_energy_oracle: eigendecomposition failed");
    }
    const Eigen::VectorXd w = es.eigenvalues();
    if (std::isinf(beta)) return w(0);

    // Spectral shift keeps the Boltzmann weights in range.
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double weight = std::exp(-beta * (w(i) - w(0)));
        num += w(i) * weight;
        den += weight;
    }
    return num / den;
}

double witten_index(const SparseMatrix& h, const SparseMatrix& fermion_number, double beta) {
    require_beta(beta, "witten_index");
    if (h.rows() != fermion_number.rows() || h.cols() != fermion_number.cols()) {
        throw std::invalid_argument("witten_index: dimension mismatch");
    }
    const SparseMatrix defect = SparseMatrix(fermion_number * fermion_number) - fermion_number;
    if (defect.norm() > 1e-8 * std::max(1.0, fermion_number.norm())) {
        throw std::invalid_argument("witten_index: fermion_number must be a projector (F^2 = F)");
    }
    const Matrix hd(h);
    require_hermitian(hd, "witten_index");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hd);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("witten_index: eigendecomposition failed");
    }
    const Eigen::VectorXd w = es.eigenvalues();
    const Matrix fv = fermion_number * es.eigenvectors();

    // (−1)^F expectation per eigenvector.
    auto parity = [&](Eigen::Index i) {
        return 1.0 - 2.0 * es.eigenvectors().col(i).dot(fv.col(i)).real();
    };

    if (std::isinf(beta)) {
        // Ground-cluster parity average (handles degenerate ground spaces).
        const double cluster_tol = 1e-12 * std::max(1.0, std::abs(w(0)));
        double sum = 0.0;
        Eigen::Index count = 0;
        for (Eigen::Index i = 0; i < w.size() && w(i) - w(0) <= cluster_tol; ++i) {
            sum += parity(i);
            ++count;
        }
        return sum / static_cast<double>(count);
    }

    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double weight = std::exp(-beta * (w(i) - w(0)));
        num += parity(i) * weight;
        den += weight;
    }
    return num / den;
}

double thermal_energy_closed_form(double beta, double omega1) {
    require_beta(beta, "thermal_energy_closed_form");
    if (std::isinf(beta)) return 0.0;
    const double x = std::exp(-beta * omega1);
    return omega1 * (x / (1.0 - x) + x / (1.0 + x));
}

double witten_index_closed_form(double beta, double omega1) {
    require_beta(beta, "witten_index_closed_form");
    if (std::isinf(beta)) return 1.0;
    const double x = std::exp(-beta * omega1);
    return (1.0 - x) / (1.0 + x);
}

double goldstino_norm_closed_form(double beta, double omega1) {
    require_beta(beta, "goldstino_norm_closed_form");
    if (std::isinf(beta)) return 0.0;
    const double x = std::exp(-beta * omega1);
    return std::sqrt(x) / std::sqrt(1.0 - x * x);
}

// --------------------------- Goldstino states -------------------------------

GoldstinoStates goldstino_states(const ThermalVacuum& vacuum, const SparseMatrix& g2s,
                                 const SparseMatrix& g2s_dagger) {
    const Vector& v = vacuum.state.amplitudes;
    if (g2s.rows() != v.size() || g2s_dagger.rows() != v.size()) {
        throw std::invalid_argument("goldstino_states: dimension mismatch");
    }
    constexpr double kDefinedThreshold = 1e-12;

    GoldstinoStates out;
    Vector s1 = g2s * v;
    Vector s2 = g2s_dagger * v;
    out.norm1 = s1.norm();
    out.norm2 = s2.norm();
    out.state1_defined = out.norm1 > kDefinedThreshold;
    out.state2_defined = out.norm2 > kDefinedThreshold;
    if (out.state1_defined) out.state1 = StateVector{s1 / out.norm1, vacuum.state.space};
    if (out.state2_defined) out.state2 = StateVector{s2 / out.norm2, vacuum.state.space};
    return out;
}

std::pair<double, double> goldstino_norms(const ThermalVacuum& vacuum,
                                          const TransformedModes& modes) {
    require_doubled_modes(modes, "goldstino_norms");
    if (!vacuum.state.space.same_space(modes.space)) {
        throw std::invalid_argument("goldstino_norms: vacuum and modes on different spaces");
    }
    const FockSpaceConfig& cfg = modes.space;
    const Vector& v = vacuum.state.amplitudes;
    const auto [b, b_dag] = build_fermion_ladder(cfg, false);

    // G_2S·v = a₂†·D(β₂)·b·v
    Vector w1 = b.matrix * v;
    w1 = apply_slot_operator(cfg, 0, modes.displacement_local, w1);
    w1 = modes.a2_dagger.matrix * w1;

    // G_2S†·v = b†·D(β₂)†·a₂·v
    Vector w2 = modes.a2.matrix * v;
    w2 = apply_slot_operator(cfg, 0, modes.displacement_local.adjoint(), w2);
    w2 = b_dag.matrix * w2;

    return {w1.norm(), w2.norm()};
}

// --------------------------- per-β records ----------------------------------

ObservableRecord compute_observables(const ModelParams& params, double beta,
                                     const ThermalOptions& options) {
    params.validate();
    require_beta(beta, "compute_observables");
    if (options.boson_cutoff == 0 &&
        (options.auto_start < 2 || options.auto_cap < options.auto_start)) {
        throw std::invalid_argument("compute_observables: invalid adaptive-cutoff range");
    }

    ObservableRecord rec;
    rec.beta = beta;
    rec.T_over_omega1 = std::isinf(beta) ? 0.0 : 1.0 / (beta * params.omega1);
    rec.E0_closed_form = thermal_energy_closed_form(beta, params.omega1) / params.omega1;
    rec.witten_closed_form = witten_index_closed_form(beta, params.omega1);
    rec.goldstino_norm_closed_form = goldstino_norm_closed_form(beta, params.omega1);

    const ThermalParams tparams = ThermalParams::from_beta(beta, params.omega1);

    std::vector<int> cutoffs;
    if (options.boson_cutoff > 0) {
        cutoffs.push_back(options.boson_cutoff);
    } else {
        for (int nb = options.auto_start; nb <= options.auto_cap; nb *= 2) {
            cutoffs.push_back(nb);
        }
    }

    for (std::size_t ci = 0; ci < cutoffs.size(); ++ci) {
        const int nb = cutoffs[ci];
        const bool last = ci + 1 == cutoffs.size();

        FockSpaceConfig doubled;
        doubled.boson_cutoff = nb;
        doubled.guard_band = displacement_aware_guard(nb, params.lambda());
        doubled.doubled = true;
        doubled.tail_tolerance = options.tail_tolerance;
        doubled.convention = options.convention;

        const TransformedModes modes =
            canonical_transform(params, doubled, FermionModePolicy::factored_only);
        const ThermalVacuum vac =
            thermal_vacuum(tparams, modes, VacuumPath::closed_form, false);
        if (vac.tail_mass > options.tail_tolerance && !last) continue;

        rec.N_b_used = nb;
        rec.tail_mass = vac.tail_mass;
        rec.flagged = vac.tail_mass > options.tail_tolerance;

        rec.E0_over_omega1 =
            thermal_energy(vac, build_hamiltonian_matrix(params, doubled)) / params.omega1;
        rec.goldstino_norm_numeric = goldstino_norms(vac, modes).first;

        // Ensemble observables on the single space.
        FockSpaceConfig single = doubled;
        single.doubled = false;
        const HamiltonianBundle bundle = build_interacting_model(params, single);
        rec.gibbs_oracle = gibbs_energy_oracle(bundle.H, beta) / params.omega1;
        const TransformedModes single_modes =
            canonical_transform(params, single, FermionModePolicy::materialize);
        const SparseMatrix quasiparticle_number =
            single_modes.b2_dagger.matrix * single_modes.b2.matrix;
        rec.witten_numeric = witten_index(bundle.H, quasiparticle_number, beta);
        break;
    }
    return rec;
}

}  // namespace susyosc

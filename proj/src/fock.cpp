// fock.cpp — Truncated Fock-space primitives: ladders, embeddings, displacement,
// matrix exponentials, and guarded-subspace diagnostics.

#include "susyosc/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace susyosc {

// --------------------------- space configuration ----------------------------

Eigen::Index FockSpaceConfig::slot_dim(int slot) const {
    if (slot < 0 || slot >= num_slots()) {
        throw std::out_of_range("FockSpaceConfig::slot_dim: slot out of range");
    }
    return (slot % 2 == 0) ? static_cast<Eigen::Index>(boson_dim()) : 2;
}

void FockSpaceConfig::validate() const {
    if (boson_cutoff < 1) {
        throw std::invalid_argument("FockSpaceConfig: boson_cutoff must be >= 1");
    }
    const int g = guard();
    if (g < 0 || g >= boson_cutoff) {
        throw std::invalid_argument("FockSpaceConfig: guard band must satisfy 0 <= g < N_b");
    }
    if (!(tail_tolerance > 0.0)) {
        throw std::invalid_argument("FockSpaceConfig: tail_tolerance must be positive");
    }
}

int displacement_aware_guard(int boson_cutoff, double lambda) {
    if (boson_cutoff < 1) {
        throw std::invalid_argument("displacement_aware_guard: boson_cutoff must be >= 1");
    }
    int g = FockSpaceConfig::default_guard(boson_cutoff);
    if (lambda != 0.0) {
        const double excursion =
            std::exp(1.0) * std::abs(lambda) * std::sqrt(static_cast<double>(boson_cutoff));
        g = std::max(g, static_cast<int>(std::ceil(excursion)) + 16);
    }
    return std::min({g, 3 * boson_cutoff / 4, boson_cutoff - 1});
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n <= 0.0 || !std::isfinite(n)) {
        throw std::runtime_error("StateVector::normalized: zero or non-finite norm");
    }
    return StateVector{amplitudes / n, space};
}

// --------------------------- single-factor matrices -------------------------

Matrix boson_lowering(int dim) {
    if (dim < 2) throw std::invalid_argument("boson_lowering: dim must be >= 2");
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return m;
}

Matrix boson_raising(int dim) { return boson_lowering(dim).adjoint(); }

Matrix fermion_lowering() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;  // b|1> = |0>
    return m;
}

Matrix fermion_raising() { return fermion_lowering().adjoint(); }

Matrix fermion_parity() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;  // P = 1 − 2b†b
    return m;
}

Matrix displacement_factor(int boson_dim, double lambda) {
    if (lambda == 0.0) return Matrix::Identity(boson_dim, boson_dim);
    const Matrix gen = lambda * (boson_raising(boson_dim) - boson_lowering(boson_dim));
    return matrix_exponential(gen, MatrixStructure::anti_hermitian);
}

// --------------------------- composite embedding ----------------------------

Eigen::Index composite_index(const FockSpaceConfig& cfg, int n_b, int n_f, int nt_b,
                             int nt_f) {
    if (n_b < 0 || n_b > cfg.boson_cutoff || n_f < 0 || n_f > 1) {
        throw std::out_of_range("composite_index: occupation out of range");
    }
    if (!cfg.doubled) {
        if (nt_b != 0 || nt_f != 0) {
            throw std::invalid_argument("composite_index: tilde occupation on undoubled space");
        }
        return static_cast<Eigen::Index>(n_b) * 2 + n_f;
    }
    if (nt_b < 0 || nt_b > cfg.boson_cutoff || nt_f < 0 || nt_f > 1) {
        throw std::out_of_range("composite_index: tilde occupation out of range");
    }
    const Eigen::Index d_b = cfg.boson_dim();
    return ((static_cast<Eigen::Index>(n_b) * 2 + n_f) * d_b + nt_b) * 2 + nt_f;
}

namespace {

SparseMatrix sparse_identity(Eigen::Index dim) {
    SparseMatrix id(dim, dim);
    id.setIdentity();
    return id;
}

ModeTag slot_mode_tag(int slot) {
    switch (slot) {
        case 0: return ModeTag::boson;
        case 1: return ModeTag::fermion;
        case 2: return ModeTag::tilde_boson;
        case 3: return ModeTag::tilde_fermion;
        default: throw std::out_of_range("slot_mode_tag: slot out of range");
    }
}

}  // namespace

ModeOperator tensor_embed(const Matrix& op, int slot, const FockSpaceConfig& cfg,
                          SlotParity parity) {
    cfg.validate();
    if (slot < 0 || slot >= cfg.num_slots()) {
        throw std::out_of_range("tensor_embed: slot out of range");
    }
    if (op.rows() != op.cols() || op.rows() != cfg.slot_dim(slot)) {
        throw std::invalid_argument("tensor_embed: operator dimension does not match slot");
    }
    if (parity == SlotParity::odd && slot % 2 == 0) {
        throw std::invalid_argument("tensor_embed: boson-slot operators are always even");
    }

    std::vector<SparseMatrix> factors;
    factors.reserve(cfg.num_slots());
    for (int s = 0; s < cfg.num_slots(); ++s) factors.push_back(sparse_identity(cfg.slot_dim(s)));
    factors[slot] = op.sparseView();

    // Jordan–Wigner string: an odd fermionic operator carries the parity of all
    // earlier fermion slots, so that tilde and non-tilde fermions anticommute.
    if (parity == SlotParity::odd && cfg.convention == FermionConvention::anticommuting) {
        for (int s = 1; s < slot; s += 2) factors[s] = fermion_parity().sparseView();
    }

    SparseMatrix out = factors[0];
    for (int s = 1; s < cfg.num_slots(); ++s) {
        out = Eigen::kroneckerProduct(out, factors[s]).eval();
    }
    return ModeOperator{std::move(out), slot_mode_tag(slot), false, cfg};
}

std::pair<ModeOperator, ModeOperator> build_boson_ladder(const FockSpaceConfig& cfg,
                                                         bool tilde) {
    cfg.validate();
    if (tilde && !cfg.doubled) {
        throw std::invalid_argument("build_boson_ladder: tilde operators need a doubled space");
    }
    const int slot = tilde ? 2 : 0;
    ModeOperator low = tensor_embed(boson_lowering(cfg.boson_dim()), slot, cfg);
    ModeOperator raise = low.dag();
    return {std::move(low), std::move(raise)};
}

std::pair<ModeOperator, ModeOperator> build_fermion_ladder(const FockSpaceConfig& cfg,
                                                           bool tilde) {
    cfg.validate();
    if (tilde && !cfg.doubled) {
        throw std::invalid_argument("build_fermion_ladder: tilde operators need a doubled space");
    }
    const int slot = tilde ? 3 : 1;
    ModeOperator low = tensor_embed(fermion_lowering(), slot, cfg, SlotParity::odd);
    ModeOperator raise = low.dag();
    return {std::move(low), std::move(raise)};
}

double displacement_unitarity_defect(const Matrix& disp, const Matrix& disp_inverse,
                                     int guarded_level) {
    if (disp.rows() != disp.cols() || disp.rows() != disp_inverse.rows() ||
        disp_inverse.rows() != disp_inverse.cols()) {
        throw std::invalid_argument("displacement_unitarity_defect: dimension mismatch");
    }
    const Eigen::Index d = disp.rows();
    const Eigen::Index window = static_cast<Eigen::Index>(guarded_level) + 1;
    if (window < 1 || window > d) {
        throw std::invalid_argument("displacement_unitarity_defect: guarded level out of range");
    }
    const Matrix unit_defect =
        (disp.adjoint() * disp - Matrix::Identity(d, d)).topLeftCorner(window, window);
    const Matrix inv_defect =
        (disp * disp_inverse - Matrix::Identity(d, d)).topLeftCorner(window, window);
    return std::max(spectral_norm(unit_defect), spectral_norm(inv_defect));
}

double displacement_window_defect(int boson_dim, double lambda, int guarded_level) {
    if (boson_dim < 1) {
        throw std::invalid_argument("displacement_window_defect: boson_dim must be positive");
    }
    if (guarded_level < 0 || guarded_level >= boson_dim) {
        throw std::invalid_argument("displacement_window_defect: guarded level out of range");
    }
    if (lambda == 0.0) return 0.0;
    // The reference carries the mass a displacement spreads past the cutoff;
    // projecting it back makes the guarded-block unitarity defect equal that
    // leaked mass.
    const int padded = 2 * boson_dim;
    const Matrix ref =
        displacement_factor(padded, lambda).topLeftCorner(boson_dim, boson_dim);
    const Matrix ref_inverse =
        displacement_factor(padded, -lambda).topLeftCorner(boson_dim, boson_dim);
    return displacement_unitarity_defect(ref, ref_inverse, guarded_level);
}

ModeOperator displacement_operator(const FockSpaceConfig& cfg, double lambda, bool tilde) {
    cfg.validate();
    if (!std::isfinite(lambda)) {
        throw std::invalid_argument("displacement_operator: lambda must be finite");
    }
    if (tilde && !cfg.doubled) {
        throw std::invalid_argument("displacement_operator: tilde operator needs a doubled space");
    }
    const int d = cfg.boson_dim();

    // A violation means the truncation window cannot hold the displaced
    // guarded states (insufficient N_b).
    const double defect = displacement_window_defect(d, lambda, cfg.guarded_level());
    if (defect > cfg.tail_tolerance) {
        throw std::runtime_error(
            "displacement_operator: guarded window defect exceeds tail tolerance "
            "(insufficient N_b)");
    }

    ModeOperator out = tensor_embed(displacement_factor(d, lambda), tilde ? 2 : 0, cfg);
    return out;
}

Vector apply_slot_operator(const FockSpaceConfig& cfg, int slot, const Matrix& local,
                           const Vector& v) {
    if (slot < 0 || slot >= cfg.num_slots()) {
        throw std::out_of_range("apply_slot_operator: slot out of range");
    }
    const Eigen::Index mid = cfg.slot_dim(slot);
    if (local.rows() != mid || local.cols() != mid) {
        throw std::invalid_argument("apply_slot_operator: operator dimension mismatch");
    }
    if (v.size() != cfg.dim()) {
        throw std::invalid_argument("apply_slot_operator: vector dimension mismatch");
    }
    Eigen::Index left = 1, right = 1;
    for (int s = 0; s < slot; ++s) left *= cfg.slot_dim(s);
    for (int s = slot + 1; s < cfg.num_slots(); ++s) right *= cfg.slot_dim(s);

    using RowMajorMatrix =
        Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Vector out(v.size());
    for (Eigen::Index l = 0; l < left; ++l) {
        const Eigen::Index base = l * mid * right;
        Eigen::Map<const RowMajorMatrix> vblk(v.data() + base, mid, right);
        Eigen::Map<RowMajorMatrix> oblk(out.data() + base, mid, right);
        oblk.noalias() = local * vblk;
    }
    return out;
}

// --------------------------- matrix exponential -----------------------------

namespace {

void require_hermitian(const Matrix& h, const char* who) {
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument(std::string(who) + ": matrix lacks the declared structure");
    }
}

}  // namespace

Matrix matrix_exponential(const Matrix& m, MatrixStructure structure) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("matrix_exponential: matrix must be square");
    }
    if (!m.allFinite()) {
        throw std::invalid_argument("matrix_exponential: non-finite entries");
    }

    Matrix out;
    switch (structure) {
        case MatrixStructure::hermitian: {
            require_hermitian(m, "matrix_exponential");
            Eigen::SelfAdjointEigenSolver<Matrix> es(m);
            if (es.info() != Eigen::Success) {
                throw std::runtime_error("matrix_exponential: eigendecomposition failed");
            }
            out = es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
                  es.eigenvectors().adjoint();
            break;
        }
        case MatrixStructure::anti_hermitian: {
            // m = iH with H Hermitian; exp(m) = U e^{iw} U† is exactly unitary.
            const Matrix h = Complex(0.0, -1.0) * m;
            require_hermitian(h, "matrix_exponential");
            Eigen::SelfAdjointEigenSolver<Matrix> es(h);
            if (es.info() != Eigen::Success) {
                throw std::runtime_error("matrix_exponential: eigendecomposition failed");
            }
            const Eigen::VectorXd w = es.eigenvalues();
            Vector phases(w.size());
            for (Eigen::Index j = 0; j < w.size(); ++j) {
                phases(j) = std::exp(Complex(0.0, w(j)));
            }
            out = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
            break;
        }
        case MatrixStructure::general:
            out = m.exp();  // scaling-and-squaring (Padé)
            break;
    }
    if (!out.allFinite()) {
        throw std::runtime_error("matrix_exponential: result has non-finite entries");
    }
    return out;
}

Vector anti_hermitian_expm_action(const std::function<Vector(const Vector&)>& apply_k,
                                  const Vector& v, double bound) {
    if (!(bound >= 0.0) || !std::isfinite(bound)) {
        throw std::invalid_argument("anti_hermitian_expm_action: bound must be finite and >= 0");
    }
    const double beta0 = v.norm();
    if (beta0 == 0.0) return v;

    // e^{K} = e^{−iH} with H = iK Hermitian, ‖H‖ ≤ ρ. Chebyshev expansion of the
    // phase factor: e^{−iρx} = Σ_k (2−δ_{k0})(−i)^k J_k(ρ) T_k(x) on x ∈ [−1,1].
    const double rho = bound * 1.02 + 1.0;
    const auto apply_h_scaled = [&](const Vector& x) -> Vector {
        return (Complex(0.0, 1.0) / rho) * apply_k(x);
    };

    const Complex minus_i(0.0, -1.0);
    Vector t_prev = v;
    Vector t_cur = apply_h_scaled(v);
    Vector acc = std::cyl_bessel_j(0.0, rho) * t_prev +
                 2.0 * minus_i * std::cyl_bessel_j(1.0, rho) * t_cur;

    const int k_max = static_cast<int>(rho + 12.0 * std::sqrt(rho) + 80.0);
    Complex phase = minus_i;
    int tiny_run = 0;
    for (int k = 2; k <= k_max; ++k) {
        Vector t_next = 2.0 * apply_h_scaled(t_cur) - t_prev;
        t_prev = std::move(t_cur);
        t_cur = std::move(t_next);
        phase *= minus_i;
        const double jk = std::cyl_bessel_j(static_cast<double>(k), rho);
        acc += (2.0 * jk) * phase * t_cur;
        if (std::abs(jk) < 1e-18) {
            if (++tiny_run >= 6 && static_cast<double>(k) > rho) {
                if (!acc.allFinite()) {
                    throw std::runtime_error(
                        "anti_hermitian_expm_action: non-finite result (bound too small?)");
                }
                return acc;
            }
        } else {
            tiny_run = 0;
        }
    }
    throw std::runtime_error("anti_hermitian_expm_action: Chebyshev expansion did not converge");
}

// --------------------------- guarded-subspace norms -------------------------

std::vector<Eigen::Index> guarded_indices(const FockSpaceConfig& cfg) {
    cfg.validate();
    const int level = cfg.guarded_level();
    std::vector<Eigen::Index> idx;
    if (!cfg.doubled) {
        idx.reserve(static_cast<std::size_t>(level + 1) * 2);
        for (int n = 0; n <= level; ++n) {
            for (int f = 0; f < 2; ++f) idx.push_back(composite_index(cfg, n, f));
        }
        return idx;
    }
    idx.reserve(static_cast<std::size_t>(level + 1) * (level + 1) * 4);
    for (int n = 0; n <= level; ++n) {
        for (int f = 0; f < 2; ++f) {
            for (int tn = 0; tn <= level; ++tn) {
                for (int tf = 0; tf < 2; ++tf) idx.push_back(composite_index(cfg, n, f, tn, tf));
            }
        }
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double guarded_norm(const Matrix& m, const FockSpaceConfig& cfg) {
    if (m.rows() != cfg.dim() || m.cols() != cfg.dim()) {
        throw std::invalid_argument("guarded_norm: matrix dimension mismatch");
    }
    const std::vector<Eigen::Index> idx = guarded_indices(cfg);
    const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
    Matrix sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = m(idx[i], idx[j]);
    }
    return spectral_norm(sub);
}

double guarded_norm(const SparseMatrix& m, const FockSpaceConfig& cfg) {
    if (m.rows() != cfg.dim() || m.cols() != cfg.dim()) {
        throw std::invalid_argument("guarded_norm: matrix dimension mismatch");
    }
    const std::vector<Eigen::Index> idx = guarded_indices(cfg);
    std::vector<Eigen::Index> pos(static_cast<std::size_t>(m.rows()), -1);
    for (std::size_t i = 0; i < idx.size(); ++i) pos[static_cast<std::size_t>(idx[i])] = static_cast<Eigen::Index>(i);

    Matrix sub = Matrix::Zero(static_cast<Eigen::Index>(idx.size()),
                              static_cast<Eigen::Index>(idx.size()));
    for (int outer = 0; outer < m.outerSize(); ++outer) {
        const Eigen::Index col = pos[static_cast<std::size_t>(outer)];
        if (col < 0) continue;
        for (SparseMatrix::InnerIterator it(m, outer); it; ++it) {
            const Eigen::Index row = pos[static_cast<std::size_t>(it.row())];
            if (row >= 0) sub(row, col) = it.value();
        }
    }
    return spectral_norm(sub);
}

// --------------------------- states -----------------------------------------

StateVector vacuum_state(const FockSpaceConfig& cfg) { return fock_state(cfg, 0, 0, 0, 0); }

StateVector fock_state(const FockSpaceConfig& cfg, int n_b, int n_f, int nt_b, int nt_f) {
    cfg.validate();
    Vector amp = Vector::Zero(cfg.dim());
    amp(composite_index(cfg, n_b, n_f, nt_b, nt_f)) = 1.0;
    return StateVector{std::move(amp), cfg};
}

double boson_tail_mass(const StateVector& state) {
    const FockSpaceConfig& cfg = state.space;
    if (state.amplitudes.size() != cfg.dim()) {
        throw std::invalid_argument("boson_tail_mass: vector dimension mismatch");
    }
    const int level = cfg.guarded_level();
    const Eigen::Index d_b = cfg.boson_dim();
    double tail = 0.0;
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        Eigen::Index rest = i;
        int nt_b = 0;
        if (cfg.doubled) {
            rest /= 2;            // drop tilde-fermion
            nt_b = static_cast<int>(rest % d_b);
            rest /= d_b;          // drop tilde-boson
        }
        const int n_b = static_cast<int>(rest / 2);
        if (n_b > level || nt_b > level) tail += std::norm(state.amplitudes(i));
    }
    return tail;
}

}  // namespace susyosc

// fock.hpp — Truncated bosonic/fermionic ladder operators, displacement operators,
// and state vectors on single or doubled (tilde) composite Fock spaces.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace susyosc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

// --------------------------- space configuration ----------------------------

// Statistics of tilde vs non-tilde fermion operators. Anticommuting is the
// physical convention (parity strings in the tensor embedding); commuting is a
// test toggle — observables of this quadratic model are insensitive to it.
enum class FermionConvention { anticommuting, commuting };

// Composite factor order, fixed for reproducibility:
//   single:  boson (dim N_b+1) ⊗ fermion (dim 2)
//   doubled: boson ⊗ fermion ⊗ tilde-boson ⊗ tilde-fermion
// Composite index: ((n_b·2 + n_f)·(N_b+1) + ñ_b)·2 + ñ_f.
struct FockSpaceConfig {
    int boson_cutoff = 32;         // N_b: highest retained boson occupation
    int guard_band = -1;           // g: top levels excluded from identity checks; -1 → default
    bool doubled = false;          // tilde factors present
    double tail_tolerance = 1e-8;  // max allowed occupation probability above N_b − g
    FermionConvention convention = FermionConvention::anticommuting;

    // Default guard band: truncated ladder matrices violate the CCR only near
    // the top level, so a thin band suffices for plain ladder identities.
    static int default_guard(int n_b) { return std::min(std::max(4, n_b / 10), n_b - 1); }

    int guard() const { return guard_band < 0 ? default_guard(boson_cutoff) : guard_band; }
    int boson_dim() const { return boson_cutoff + 1; }
    int guarded_level() const { return boson_cutoff - guard(); }
    int num_slots() const { return doubled ? 4 : 2; }

    Eigen::Index slot_dim(int slot) const;
    Eigen::Index dim() const {
        const Eigen::Index single = static_cast<Eigen::Index>(boson_dim()) * 2;
        return doubled ? single * single : single;
    }

    void validate() const;

    // Same underlying composite space (guard band and tail tolerance are
    // check-time knobs, not part of the space identity).
    bool same_space(const FockSpaceConfig& other) const {
        return boson_cutoff == other.boson_cutoff && doubled == other.doubled &&
               convention == other.convention;
    }
};

// Guard band wide enough for displacement-dressed identities: exp[λ(a†−a)]
// leaks into ~|λ|·√n levels above the coherent excursion, so the default band
// is insufficient once λ ≳ 1. Excursion error ~ (λ²n̄)^g/(g!)², giving
// g ≈ e·|λ|·√N_b with a constant margin.
int displacement_aware_guard(int boson_cutoff, double lambda);

// --------------------------- operators and states ---------------------------

enum class ModeTag { boson, fermion, tilde_boson, tilde_fermion };

// Fermionic-parity bookkeeping for the tensor embedding: odd operators (b, b†)
// pick up Jordan–Wigner parity strings on earlier fermion slots; even ones
// (b†b, any boson operator) never do. The matrix alone cannot reveal oddness,
// so the caller states it.
enum class SlotParity { even, odd };

struct ModeOperator {
    SparseMatrix matrix;
    ModeTag mode_tag = ModeTag::boson;
    bool dagger = false;
    FockSpaceConfig space;

    ModeOperator dag() const {
        ModeOperator out = *this;
        out.matrix = matrix.adjoint();
        out.dagger = !dagger;
        return out;
    }
    Matrix dense() const { return Matrix(matrix); }
};

struct StateVector {
    Vector amplitudes;
    FockSpaceConfig space;

    double norm() const { return amplitudes.norm(); }
    StateVector normalized() const;
};

// --------------------------- single-factor matrices -------------------------

// a|n> = sqrt(n)|n-1>, a†|n> = sqrt(n+1)|n+1>, a†|N_b> = 0 (hard cutoff)
Matrix boson_lowering(int dim);
Matrix boson_raising(int dim);

// 2-level fermion: b = |0><1|, b† = |1><0|, parity P = diag(1,−1) = 1 − 2b†b
Matrix fermion_lowering();
Matrix fermion_raising();
Matrix fermion_parity();

// Dense boson-factor displacement exp[λ(a† − a)] (exactly unitary: the
// generator is anti-Hermitian even after truncation).
Matrix displacement_factor(int boson_dim, double lambda);

// Guarded-block defect max(‖D†D − I‖, ‖D(λ)D(−λ) − I‖) of a boson-factor
// displacement pair, on levels 0..guarded_level.
double displacement_unitarity_defect(const Matrix& disp, const Matrix& disp_inverse,
                                     int guarded_level);

// Mass the displaced guarded window leaks past the cutoff, measured against a
// reference exponential computed on a padded (doubled) space and projected
// back. The same-truncation product D(λ)D(−λ) is exactly the identity and
// cannot see an undersized window; this can.
double displacement_window_defect(int boson_dim, double lambda, int guarded_level);

// --------------------------- composite embedding ----------------------------

Eigen::Index composite_index(const FockSpaceConfig& cfg, int n_b, int n_f,
                             int nt_b = 0, int nt_f = 0);

// Kronecker embedding of a single-factor operator, identity on other factors;
// odd fermionic operators get parity strings on earlier fermion slots (under
// the anticommuting convention).
ModeOperator tensor_embed(const Matrix& op, int slot, const FockSpaceConfig& cfg,
                          SlotParity parity = SlotParity::even);

std::pair<ModeOperator, ModeOperator> build_boson_ladder(const FockSpaceConfig& cfg,
                                                         bool tilde = false);
std::pair<ModeOperator, ModeOperator> build_fermion_ladder(const FockSpaceConfig& cfg,
                                                           bool tilde = false);

// exp[λ(a† − a)] embedded at the (tilde-)boson slot; certifies that the
// displaced guarded window fits the cutoff (window defect vs cfg.tail_tolerance).
ModeOperator displacement_operator(const FockSpaceConfig& cfg, double lambda,
                                   bool tilde = false);

// Matrix-free application of a dense single-factor operator at one slot:
// out = (I ⊗ … ⊗ local ⊗ … ⊗ I)·v without forming the composite matrix.
// No parity strings (intended for boson-slot factors, which are always even).
Vector apply_slot_operator(const FockSpaceConfig& cfg, int slot, const Matrix& local,
                           const Vector& v);

// --------------------------- matrix exponential -----------------------------

enum class MatrixStructure { general, hermitian, anti_hermitian };

// exp(M). Structure-tagged inputs use the eigendecomposition route (exactly
// unitary/positive results); general inputs use scaling-and-squaring. The two
// routes are cross-checked in the test suite.
Matrix matrix_exponential(const Matrix& m, MatrixStructure structure = MatrixStructure::general);

// e^{K}·v for anti-Hermitian K given only K's action, via a Chebyshev expansion
// of the phase factor on [−bound, bound]; bound must dominate ‖K‖₂.
Vector anti_hermitian_expm_action(const std::function<Vector(const Vector&)>& apply_k,
                                  const Vector& v, double bound);

// --------------------------- guarded-subspace norms -------------------------

// Composite indices whose boson occupations (both slots when doubled) lie at
// or below the guarded level N_b − g.
std::vector<Eigen::Index> guarded_indices(const FockSpaceConfig& cfg);

double spectral_norm(const Matrix& m);

// Spectral norm of P·M·P with P the guarded-subspace projector.
double guarded_norm(const Matrix& m, const FockSpaceConfig& cfg);
double guarded_norm(const SparseMatrix& m, const FockSpaceConfig& cfg);

// --------------------------- states -----------------------------------------

StateVector vacuum_state(const FockSpaceConfig& cfg);
StateVector fock_state(const FockSpaceConfig& cfg, int n_b, int n_f, int nt_b = 0,
                       int nt_f = 0);

// Probability carried by basis states with any boson occupation above the
// guarded level — the truncation-tail diagnostic.
double boson_tail_mass(const StateVector& state);

}  // namespace susyosc

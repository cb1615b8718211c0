// algebra.hpp — Wedge/bullet ladder-algebra relation checks with quantified
// guarded-subspace deviations, reported per relation.

#pragma once

#include "susyosc/fock.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace susyosc {

struct AlgebraReport {
    std::string relation_name;
    double max_deviation = 0.0;  // spectral-norm deviation on the guarded subspace
    double tolerance = 0.0;
    bool passed = false;
    Eigen::Index subspace_dim = 0;
};

void to_json(nlohmann::json& j, const AlgebraReport& report);

// Wedge product A∧B ≡ (1/2)[A, B]; reports ‖(1/2)(AB − BA) − expected‖ on the
// guarded subspace.
AlgebraReport check_wedge(const ModeOperator& op_a, const ModeOperator& op_b,
                          const SparseMatrix& expected, double tolerance = 1e-10,
                          std::string_view relation_name = "wedge");

// Bullet product A•B ≡ (1/2){A, B}; reports ‖(1/2)(AB + BA) − expected‖.
AlgebraReport check_bullet(const ModeOperator& op_a, const ModeOperator& op_b,
                           const SparseMatrix& expected, double tolerance = 1e-10,
                           std::string_view relation_name = "bullet");

// The four ladder relations
//   a†∧a = −1/2,  a†•a = n_b + 1/2,  b†•b = 1/2,  b†∧b = n_f − 1/2
// plus cross-(anti)commutators, evaluated for the supplied ladder set (tilde
// copies included on doubled spaces). The number operators in the expected
// matrices are built from the supplied pair, so the same checks certify any
// canonically transformed set. Deterministic relation order.
std::vector<AlgebraReport> verify_full_algebra(const std::vector<ModeOperator>& ops,
                                               const FockSpaceConfig& cfg,
                                               double tolerance = 1e-10);

bool all_passed(const std::vector<AlgebraReport>& reports);

}  // namespace susyosc

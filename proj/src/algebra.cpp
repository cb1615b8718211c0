// algebra.cpp — Wedge/bullet relation evaluation on guarded subspaces.

#include "susyosc/algebra.hpp"

#include <algorithm>

namespace susyosc {

void to_json(nlohmann::json& j, const AlgebraReport& report) {
    j = nlohmann::json{{"relation", report.relation_name},
                       {"max_deviation", report.max_deviation},
                       {"tolerance", report.tolerance},
                       {"passed", report.passed},
                       {"subspace_dim", report.subspace_dim}};
}

namespace {

void require_same_space(const ModeOperator& op_a, const ModeOperator& op_b,
                        const SparseMatrix& expected, const char* who) {
    if (!op_a.space.same_space(op_b.space)) {
        throw std::invalid_argument(std::string(who) + ": operators live on different spaces");
    }
    if (op_a.matrix.rows() != op_b.matrix.rows() ||
        op_a.matrix.rows() != expected.rows() || expected.rows() != expected.cols()) {
        throw std::invalid_argument(std::string(who) + ": matrix dimension mismatch");
    }
}

AlgebraReport make_report(std::string_view name, const SparseMatrix& deviation,
                          const FockSpaceConfig& cfg, double tolerance) {
    AlgebraReport report;
    report.relation_name = std::string(name);
    report.max_deviation = guarded_norm(deviation, cfg);
    report.tolerance = tolerance;
    report.passed = report.max_deviation < tolerance;
    report.subspace_dim = static_cast<Eigen::Index>(guarded_indices(cfg).size());
    return report;
}

}  // namespace

AlgebraReport check_wedge(const ModeOperator& op_a, const ModeOperator& op_b,
                          const SparseMatrix& expected, double tolerance,
                          std::string_view relation_name) {
    require_same_space(op_a, op_b, expected, "check_wedge");
    const SparseMatrix dev =
        0.5 * (op_a.matrix * op_b.matrix - op_b.matrix * op_a.matrix) - expected;
    return make_report(relation_name, dev, op_a.space, tolerance);
}

AlgebraReport check_bullet(const ModeOperator& op_a, const ModeOperator& op_b,
                           const SparseMatrix& expected, double tolerance,
                           std::string_view relation_name) {
    require_same_space(op_a, op_b, expected, "check_bullet");
    const SparseMatrix dev =
        0.5 * (op_a.matrix * op_b.matrix + op_b.matrix * op_a.matrix) - expected;
    return make_report(relation_name, dev, op_a.space, tolerance);
}

namespace {

const ModeOperator& find_op(const std::vector<ModeOperator>& ops, ModeTag tag, bool dagger,
                            const char* label) {
    const ModeOperator* found = nullptr;
    for (const ModeOperator& op : ops) {
        if (op.mode_tag == tag && op.dagger == dagger) {
            if (found) {
                throw std::invalid_argument(std::string("verify_full_algebra: duplicate ") + label);
            }
            found = &op;
        }
    }
    if (!found) {
        throw std::invalid_argument(std::string("verify_full_algebra: missing ") + label);
    }
    return *found;
}

SparseMatrix scaled_identity(Eigen::Index dim, double value) {
    SparseMatrix id(dim, dim);
    id.setIdentity();
    return SparseMatrix(value * id);
}

SparseMatrix zero_matrix(Eigen::Index dim) { return SparseMatrix(dim, dim); }

// The four relations for one boson/fermion mode pair, expected matrices built
// from the pair itself (n_b = a†a, n_f = b†b of the supplied set).
void append_pair_relations(std::vector<AlgebraReport>& out, const ModeOperator& a,
                           const ModeOperator& a_dag, const ModeOperator& b,
                           const ModeOperator& b_dag, const std::string& prefix,
                           double tolerance) {
    const Eigen::Index dim = a.matrix.rows();
    const SparseMatrix n_b = a_dag.matrix * a.matrix;
    const SparseMatrix n_f = b_dag.matrix * b.matrix;

    out.push_back(check_wedge(a_dag, a, scaled_identity(dim, -0.5), tolerance,
                              prefix + "a_dag wedge a = -1/2"));
    out.push_back(check_bullet(a_dag, a, SparseMatrix(n_b + scaled_identity(dim, 0.5)),
                               tolerance, prefix + "a_dag bullet a = n_b + 1/2"));
    out.push_back(check_bullet(b_dag, b, scaled_identity(dim, 0.5), tolerance,
                               prefix + "b_dag bullet b = 1/2"));
    out.push_back(check_wedge(b_dag, b, SparseMatrix(n_f - scaled_identity(dim, 0.5)),
                              tolerance, prefix + "b_dag wedge b = n_f - 1/2"));
    out.push_back(
        check_bullet(b, b, zero_matrix(dim), tolerance, prefix + "b bullet b = 0"));
    out.push_back(check_wedge(a, b, zero_matrix(dim), tolerance, prefix + "a wedge b = 0"));
    out.push_back(
        check_wedge(a, b_dag, zero_matrix(dim), tolerance, prefix + "a wedge b_dag = 0"));
}

}  // namespace

std::vector<AlgebraReport> verify_full_algebra(const std::vector<ModeOperator>& ops,
                                               const FockSpaceConfig& cfg,
                                               double tolerance) {
    cfg.validate();
    const ModeOperator& a = find_op(ops, ModeTag::boson, false, "a");
    const ModeOperator& a_dag = find_op(ops, ModeTag::boson, true, "a_dag");
    const ModeOperator& b = find_op(ops, ModeTag::fermion, false, "b");
    const ModeOperator& b_dag = find_op(ops, ModeTag::fermion, true, "b_dag");
    for (const ModeOperator& op : ops) {
        if (!op.space.same_space(cfg)) {
            throw std::invalid_argument("verify_full_algebra: operator space mismatch");
        }
    }

    std::vector<AlgebraReport> reports;
    append_pair_relations(reports, a, a_dag, b, b_dag, "", tolerance);

    if (cfg.doubled) {
        const ModeOperator& at = find_op(ops, ModeTag::tilde_boson, false, "a_tilde");
        const ModeOperator& at_dag = find_op(ops, ModeTag::tilde_boson, true, "a_tilde_dag");
        const ModeOperator& bt = find_op(ops, ModeTag::tilde_fermion, false, "b_tilde");
        const ModeOperator& bt_dag = find_op(ops, ModeTag::tilde_fermion, true, "b_tilde_dag");
        append_pair_relations(reports, at, at_dag, bt, bt_dag, "tilde: ", tolerance);

        // Cross-sector: tilde bosons commute with everything non-tilde; tilde
        // fermions anticommute (or commute, under the toggle) with fermions.
        const Eigen::Index dim = a.matrix.rows();
        const SparseMatrix zero = zero_matrix(dim);
        reports.push_back(check_wedge(a, at, zero, tolerance, "a wedge a_tilde = 0"));
        reports.push_back(check_wedge(a, at_dag, zero, tolerance, "a wedge a_tilde_dag = 0"));
        reports.push_back(check_wedge(a, bt, zero, tolerance, "a wedge b_tilde = 0"));
        reports.push_back(check_wedge(b, at, zero, tolerance, "b wedge a_tilde = 0"));
        if (cfg.convention == FermionConvention::anticommuting) {
            reports.push_back(check_bullet(b, bt, zero, tolerance, "b bullet b_tilde = 0"));
            reports.push_back(
                check_bullet(b, bt_dag, zero, tolerance, "b bullet b_tilde_dag = 0"));
        } else {
            reports.push_back(check_wedge(b, bt, zero, tolerance, "b wedge b_tilde = 0"));
            reports.push_back(
                check_wedge(b, bt_dag, zero, tolerance, "b wedge b_tilde_dag = 0"));
        }
    }
    return reports;
}

bool all_passed(const std::vector<AlgebraReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const AlgebraReport& r) { return r.passed; });
}

}  // namespace susyosc

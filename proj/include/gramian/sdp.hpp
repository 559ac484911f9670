#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace gramian {

/// Standard-form primal/dual pair
///   (P) min <C,X>  s.t. <A_i,X> = b_i, X ⪰ 0
///   (D) max b'y    s.t. C - Σ y_i A_i = S ⪰ 0.
/// Constraint matrices are stored sparse with both triangles filled.
struct SdpProblem {
    int size = 0;
    Eigen::MatrixXd cost;
    std::vector<Eigen::SparseMatrix<double>> constraints;
    Eigen::VectorXd rhs;

    int num_constraints() const { return static_cast<int>(constraints.size()); }
    /// Throws std::invalid_argument on shape mismatch, asymmetry or an empty constraint list.
    void validate() const;
};

enum class SdpStatus { optimal, primal_infeasible, numerical_failure };

std::string to_string(SdpStatus s);

struct SdpOptions {
    double gap_tol = 1e-8;
    double feas_tol = 1e-8;
    int max_iter = 200;
    double initial_scale = 0.0;       ///< <= 0 selects 1 + max|b_i|
    double infeasibility_bound = 1e10; ///< trace bound behind the primal-infeasibility heuristic
    bool verbose = false;              ///< per-iteration log on stderr
};

struct SdpSolution {
    SdpStatus status = SdpStatus::numerical_failure;
    Eigen::MatrixXd X;
    Eigen::VectorXd y; ///< one entry per original constraint (zero for dropped dependent rows)
    Eigen::MatrixXd S;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0; ///< <X,S>
    double primal_residual = 0.0; ///< max_i |<A_i,X> - b_i| / (1 + |b_i|)
    double dual_residual = 0.0;   ///< ||C - A'y - S||_F / (1 + ||C||_F)
    int iterations = 0;
    int dropped_constraints = 0;
    std::string message;
};

/// Infeasible primal-dual path following (HKM direction, Mehrotra predictor-corrector).
/// Deterministic. Linearly dependent constraints are removed first; an inconsistent dependent
/// row yields primal_infeasible. A dual iterate with b'y > 0 and Σ y_i A_i ⪯ (b'y / bound) I,
/// which rules out feasible X with trace below the bound, also yields primal_infeasible.
SdpSolution solve_sdp(const SdpProblem &p, const SdpOptions &opts = {});

struct OptimalityReport {
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double complementarity = 0.0;
    double min_eig_x = 0.0;
    double min_eig_s = 0.0;
    bool optimal_pair = false;
};

/// Both feasible within tol (residuals as in SdpSolution, eigenvalues >= -tol * (1 + ||.||))
/// and <X,S> <= tol * (1 + trace X).
OptimalityReport check_optimality_pair(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, const Eigen::MatrixXd &S,
                                       const SdpProblem &p, double tol);

/// <A, B> for sparse symmetric A and dense B.
double inner(const Eigen::SparseMatrix<double> &a, const Eigen::MatrixXd &b);

/// Σ y_i A_i as a dense matrix.
Eigen::MatrixXd adjoint(const std::vector<Eigen::SparseMatrix<double>> &a, const Eigen::VectorXd &y, int size);

} // namespace gramian

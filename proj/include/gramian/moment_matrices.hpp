#pragma once

#include "gramian/monomial.hpp"
#include "gramian/poly_tensor.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace gramian {

/// Raised when a numerical construction cannot be completed (rank conditions, complex spectra, ...).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Symmetric matrix [m_{β+β'}] indexed by MonomialBasis(n, degree).
struct MomentMatrix {
    MonomialBasis basis;
    Eigen::MatrixXd matrix;

    int degree() const { return basis.max_degree(); }
    int n() const { return basis.n(); }
    /// Leading block over monomials of degree <= lower (a moment matrix itself).
    MomentMatrix truncated(int lower) const;
};

/// Entry (β, β') = m_{β+β'}. Throws std::invalid_argument when m is not defined up to 2 * degree.
MomentMatrix build_moment_matrix(const MomentSequence &m, int degree);

/// r x dim R_degree matrix with entry (t, β) = z_t^β, columns in graded-lex order.
Eigen::MatrixXd build_vandermonde(const Eigen::MatrixXd &points, int degree);

struct RankInfo {
    int rank = 0;
    Eigen::VectorXd singular_values;
};

/// Number of singular values above rel_tol * σ_1 (zero for the zero matrix).
RankInfo numerical_rank(const Eigen::MatrixXd &a, double rel_tol);

/// Jacobi equilibration D^{-1/2} A D^{-1/2}, D = diag(A). Diagonal entries at or below
/// floor * max diag are left unscaled, so solver noise on null rows is not blown up to O(1).
/// Congruence by a positive diagonal preserves rank and inertia, and removes the dependence of
/// moment-matrix rank decisions on the scale of the points.
Eigen::MatrixXd equilibrate(const Eigen::MatrixXd &a, double floor = 0.0);

/// Rank of a moment matrix, decided on its Jacobi-equilibrated form (floor = rel_tol).
/// Expects moments of points of moderate size; see the MomentMatrix overload otherwise.
RankInfo moment_rank(const Eigen::MatrixXd &m, double rel_tol);

/// As above after the uniform rescale by max(1, moment_scale(m)). Scales below 1 are not
/// applied: on a near point mass at the origin they would amplify noise on the null rows.
RankInfo moment_rank(const MomentMatrix &m, double rel_tol);

struct FlatnessVerdict {
    bool flat = false;
    int rank_lower = 0;
    int rank_upper = 0;
    double min_eigenvalue = 0.0; ///< of the equilibrated upper matrix, relative to its largest
    bool positive_semidefinite = false;
};

/// Rank agreement of M_D and M_{D+1} plus positive semidefiniteness of M_{D+1}.
/// Throws std::invalid_argument when M_{D+1} does not extend M_D on the shared block.
FlatnessVerdict check_flat_extension(const MomentMatrix &lower, const MomentMatrix &upper, double rel_tol);

/// Kernel structure of Vandermonde matrices with rank V_d = rank V_{d+1} = r.
struct KernelBasis {
    int rank = 0;
    Eigen::MatrixXd low;          ///< K_d: dim R_d x t, orthonormal columns spanning Ker V_d
    Eigen::MatrixXd normal_forms; ///< F: dim R_d x s with V_d F = (degree d+1 columns of V_{d+1})
    Eigen::MatrixXd full;         ///< K_{d+1} = [[K_d, -F], [0, I_s]]

    Eigen::Index t() const { return low.cols(); }
    Eigen::Index s() const { return normal_forms.cols(); }
};

/// Throws NumericalError when V_d has rank below its row count or the rank grows at degree d+1.
KernelBasis kernel_extension(const Eigen::MatrixXd &vd, const Eigen::MatrixXd &vd1, double rel_tol = 1e-9);

/// Uniform variable scale s for a moment matrix: the largest (M[x_k^e, x_k^e] / M[1,1])^{1/2e}
/// over variables k at the top degree e. Returns 1 for degenerate input.
double moment_scale(const MomentMatrix &m);

/// M' = D^{-1} M D^{-1} with D = diag(s^{|β|}): the moment matrix of the points z / s.
MomentMatrix rescale_moments(const MomentMatrix &m, double s);

struct ExtractionOptions {
    double rel_tol = 1e-6;
    std::uint64_t seed = 0x5eed;
};

/// Recovers r points and weights from a flat positive semidefinite moment matrix via
/// multiplication matrices. Throws NumericalError on complex or repeated eigenvalues, or on a
/// negative recovered weight.
Decomposition extract_points(const MomentMatrix &upper, int r, const ExtractionOptions &opts = {});

} // namespace gramian

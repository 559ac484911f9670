#pragma once

#include "gramian/moment_matrices.hpp"
#include "gramian/poly_tensor.hpp"
#include "gramian/sdp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gramian {

/// Entries (β, β') of an N x N symmetric matrix with β + β' = α.
struct SupportClass {
    MultiIndex alpha;
    std::vector<std::pair<int, int>> entries; ///< unordered pairs, i <= j
    int multiplicity = 0;                     ///< c_α: ordered pairs, = <Y_α, Y_α>
    Eigen::SparseMatrix<double> y;            ///< 0/1 pattern matrix
    std::vector<Eigen::SparseMatrix<double>> z; ///< orthonormal complement of y within the class
};

/// Orthogonal decomposition of the symmetric N x N matrices, N = dim R_{d+1}, into
/// moment-pattern matrices Y_α and their complements Z_{α,i}, one class per |α| <= 2d+2.
struct OrthBasis {
    int n = 0;
    int d = 0;
    MonomialBasis basis;    ///< rows/columns, degree <= d+1
    MonomialBasis sums;     ///< class labels α, degree <= 2d+2, same order as classes
    std::vector<SupportClass> classes;

    int size() const { return static_cast<int>(basis.size()); }
    std::size_t num_y() const { return classes.size(); }
    std::size_t num_z() const;
};

/// Z blocks use a Householder reflection of the normalized Y direction in orthonormal
/// coordinates of each class; each Z is signed so that its largest-magnitude coordinate is positive.
OrthBasis build_orth_basis(int n, int d);

/// min <I,X> s.t. <Y_α,X> = c_α m_α (|α| <= 2d), <Z_{α,i},X> = 0 (|α| <= 2d+2), X ⪰ 0.
/// Constraint order: Y constraints in class order, then Z constraints in class order.
/// Throws std::invalid_argument when m is not defined up to degree 2d.
SdpProblem assemble_relaxation(const MomentSequence &m, const OrthBasis &basis);

/// Number of Y constraints in an assembled relaxation (classes with |α| <= 2d).
std::size_t num_moment_constraints(const OrthBasis &basis);

struct RelaxationOptions {
    SdpOptions sdp;
    double rank_tol = 1e-6;
    double verify_tol = 1e-6;
    std::uint64_t seed = 0x5eed;
    bool rescale = true; ///< solve for the points z / s, s from the top-degree pure moments
    /// Restrict X to the face orthogonal to the kernel of the fixed block M_d. The restricted
    /// problem has an interior point whenever the data come from a decomposition, the full one
    /// does not once r < dim R_d.
    bool facial_reduction = true;
    double face_tol = 1e-10; ///< kernel threshold on the equilibrated M_d, relative to its largest eigenvalue
};

struct RelaxationReport {
    int n = 0;
    int d = 0;
    SdpStatus status = SdpStatus::numerical_failure;
    std::string solver_message;
    int iterations = 0;
    double scale = 1.0;
    int face_dimension = 0; ///< columns of the face basis; N without facial reduction

    MomentMatrix X;         ///< optimum in the input coordinates
    MomentMatrix X_scaled;  ///< optimum for the scaled problem
    double trace = 0.0;
    double trace_scaled = 0.0;
    double eigen_sum = 0.0; ///< Σ eigenvalues of X (equals trace when PSD)
    double min_eigenvalue = 0.0;
    double moment_spread = 0.0; ///< max over classes of spread / (1 + |mean|), scaled frame

    int rank = 0;
    int rank_lower = 0;
    Eigen::VectorXd equilibrated_singular_values;
    FlatnessVerdict flatness;

    std::optional<Decomposition> decomposition;
    std::optional<DecompositionCheck> verification;
    std::string extraction_error;

    std::optional<double> reference_trace;

    Eigen::VectorXd dual_y; ///< multipliers of the Y constraints (scaled frame)
    Eigen::VectorXd dual_z; ///< multipliers of the Z constraints (scaled frame)
    Eigen::MatrixXd dual_S; ///< C - Σ y_i A_i over the full space (scaled frame); PSD on the face
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

/// Solves the relaxation for p = Σ λ_t (1 + z_t·x)^{2d}, reads off rank and flatness, and
/// extracts a decomposition when the optimum is flat. Throws std::invalid_argument when p has
/// a zero constant term or a degree above 2d.
RelaxationReport solve_relaxation(const Polynomial &p, int d, const RelaxationOptions &opts = {},
                                  const std::optional<Decomposition> &reference = std::nullopt);

/// Same pipeline starting from moments (degree <= 2d). p is used only for verification when given.
RelaxationReport solve_relaxation_moments(const MomentSequence &m, int d, const RelaxationOptions &opts,
                                          const Polynomial *p = nullptr,
                                          const std::optional<Decomposition> &reference = std::nullopt);

/// Uniform scale from moments: max_k (m_{2d e_k} / m_0)^{1/2d}, or 1 when undefined.
double moments_scale(const MomentSequence &m, int d);

/// m_α / s^{|α|}.
MomentSequence scale_moments(const MomentSequence &m, double s);

} // namespace gramian

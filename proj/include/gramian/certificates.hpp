#pragma once

#include "gramian/moment_matrices.hpp"
#include "gramian/poly_tensor.hpp"
#include "gramian/relaxation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gramian {

/// Homogeneous form of a fixed degree; coefficients follow homogeneous_monomials(n, degree).
struct HomogeneousForm {
    int n = 0;
    int degree = 0;
    Eigen::VectorXd coeffs;
};

/// Degree-d slices of the kernel columns of V_d. Throws std::invalid_argument when K_d has no columns.
std::vector<HomogeneousForm> top_degree_forms(const Eigen::MatrixXd &kd, int n, int d);

struct SresMatrix {
    int n = 0;
    int form_degree = 0;
    int delta = 0;
    Eigen::MatrixXd matrix; ///< rows: degree-Δ monomials; column (i, α) = coefficients of x^α h_i
    int rank = 0;
    bool full_row_rank = false;
};

/// Columns ordered form-major, multiplier monomials in homogeneous_monomials order.
/// Throws std::invalid_argument on an empty list, mixed degrees or Δ below the form degree.
SresMatrix build_subresultant(const std::vector<HomogeneousForm> &forms, int delta, double rank_tol = 1e-9);

enum class CertVerdict { certified, certified_unique, not_found, infeasible_heuristic };
std::string to_string(CertVerdict v);

struct CertificateResiduals {
    double moment_product = 0.0; ///< ||M S||_F / (||M||_F ||S||_F)
    double odd_coeff = 0.0;      ///< max_{|β|=2d+1} |coeff(x'Sx, x^β)|
    double top_coeff = 0.0;      ///< max_{|β|=2d+2} |coeff(x'Sx, x^β) - [β even]|
    double min_eig = 0.0;        ///< λ_min(S) / ||S||_2
    double norm = 0.0;           ///< ||S||_2
    bool passes = false;
};

/// Checks S against the moment matrix M (same basis, degree d+1): all four residuals within tol,
/// with coefficient residuals measured against 1 + ||S||_2.
CertificateResiduals verify_certificate(const MomentMatrix &m, const Eigen::MatrixXd &s, double tol);

struct CertifyOptions {
    double tol = 1e-6;         ///< certificate residual tolerance
    double rank_tol = 1e-8;    ///< rank of S and of its Schur reduction
    double sres_rank_tol = 1e-9;
    double linear_tol = 1e-8;  ///< solvability: residual <= linear_tol * (1 + ||rhs||)
    double kernel_tol = 1e-9;
    bool assert_unique = false; ///< caller asserts the decomposition is the unique one of its rank
    bool cross_check = true;    ///< corroborate failed searches with the relaxation optimum
    SdpOptions sdp;
    RelaxationOptions relax;
};

struct Certificate {
    CertVerdict verdict = CertVerdict::not_found;
    std::string method;  ///< sres, general_fast, general_sdp, general_sdp_trace or none
    std::string message;

    int n = 0, d = 0, r = 0, N = 0;
    Eigen::Index t = 0, s = 0;
    double scale = 1.0; ///< points are divided by this before any computation

    Eigen::MatrixXd S;        ///< certificate for the input points
    Eigen::MatrixXd S_scaled; ///< certificate for the scaled points (where residuals are measured)
    Eigen::MatrixXd G;        ///< S_scaled = K_{d+1} G K_{d+1}'
    Eigen::MatrixXd g;        ///< t x s block
    Eigen::VectorXd z;        ///< multipliers of the top-degree complement matrices
    int rank = 0;
    CertificateResiduals residuals;

    Eigen::MatrixXd S_reduced; ///< Schur-complement reduction of S_scaled
    int rank_reduced = 0;
    CertificateResiduals reduced_residuals;

    std::optional<SresMatrix> sres;
    double linear_residual = 0.0;
    std::string sdp_status;

    std::optional<double> relaxation_trace; ///< scaled frame
    std::optional<double> moment_trace;     ///< trace of M_{d+1}, scaled frame
};

/// Linear system of the assumed-G form: coefficient matrix over unknowns g_ij (column (i, α_j))
/// and right-hand side, both assembled by multiplying the parametrized q_j polynomials.
struct LinearSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
};
LinearSystem assumed_form_system(const KernelBasis &kb, int n, int d);

/// Subresultant route. Throws NumericalError when the kernel structure cannot be built.
Certificate certify_sres(const Decomposition &dec, int d, const CertifyOptions &opts = {});

/// General kernel-parametrized route with fast path, feasibility SDP and relaxation cross-check.
Certificate certify_general(const Decomposition &dec, int d, const CertifyOptions &opts = {});

/// certify_sres, falling through to certify_general when it does not certify.
Certificate certify(const Decomposition &dec, int d, const CertifyOptions &opts = {});

/// [[S12 S22^+ S21, S12], [S21, S22]], blocks split at degree d / d+1. Rank <= dim of the top block.
Eigen::MatrixXd schur_reduce(const Eigen::MatrixXd &s, Eigen::Index top_size, double rel_tol = 1e-12);

struct CaseVerdict {
    int n = 0, d = 0, r = 0;
    long long t = 0;
    bool guaranteed_by_fullrank = false;
    bool overconstrained = false;
    bool uniqueness_regime = false;
    bool uncertain = false;
    std::int64_t threshold_num = 0; ///< overconstraint threshold as a reduced fraction
    std::int64_t threshold_den = 1;
    double threshold = 0.0;
    std::string guarantee_case; ///< "t=n", "t=n+1" or empty
};

/// Throws std::invalid_argument unless 1 <= r <= C(n+d, n).
CaseVerdict case_verdict(int n, int d, int r);

enum class WitnessKind { star_n, star_n_plus_1, powers_2_pow };
std::string to_string(WitnessKind k);
WitnessKind witness_kind_from_string(const std::string &s);

struct WitnessResult {
    WitnessKind kind = WitnessKind::star_n;
    std::vector<HomogeneousForm> forms;
    SresMatrix sres; ///< Sres_{2d+1} for star systems, Sres_{2d} for the 2^{n-1} system
    bool spans = false;
};

/// Throws std::invalid_argument for powers_2_pow with n > 6.
WitnessResult witness_systems(int n, int d, WitnessKind kind);

} // namespace gramian

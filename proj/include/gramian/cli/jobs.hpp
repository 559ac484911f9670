#pragma once

#include "gramian/cli/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gramian::cli {

inline constexpr const char *tool_version = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_mismatch = 1, exit_schema = 2, exit_numerical = 3 };

struct JobOptions {
    double tol_rank = 1e-6;
    double tol_gap = 1e-8;
    double tol_feas = 1e-8;
    double tol_cert = 1e-6;
    std::uint64_t seed = 0x5eed;
    bool assert_unique = false;
    bool include_matrices = false;
    bool timings = false; ///< off by default so reports stay byte-stable
};

struct JobResult {
    json report;
    int exit_code = exit_ok;
    std::string csv; ///< sweep only
};

RelaxationOptions relaxation_options(const JobOptions &o);
CertifyOptions certify_options(const JobOptions &o);

/// Relaxation on the input polynomial (or the polynomial induced by an input decomposition,
/// which then also serves as the reference). Exit 3 on solver failure, report still filled.
JobResult run_decompose(const Input &in, const JobOptions &o);

/// certify_sres then certify_general. Requires a decomposition (SchemaError otherwise).
JobResult run_certify(const Input &in, const JobOptions &o);

JobResult run_case(int n, int d, int r, const JobOptions &o);

struct SweepSpec {
    std::vector<int> ns{2};
    std::vector<int> ds{3};
    std::vector<int> rs{8};
    int instances = 10;
    unsigned threads = 0; ///< 0: hardware concurrency, capped by GRAMIAN_SDP_THREADS
};

/// Random integer instances per (n, d, r) cell; CSV rows n,d,r,seed,verdict,rank,trace,gap.
JobResult run_sweep(const SweepSpec &spec, const JobOptions &o);

/// Both built-in rank-9 planar instances, the univariate orthogonal basis and the r = 10 case verdict,
/// each compared against stored expectations. Exit 1 when any expectation fails.
JobResult run_reproduce(const JobOptions &o);

/// The two built-in rank-9 planar point sets with unit weights: 1 has M_{d+1} optimal, 2 does not.
Decomposition example_decomposition(int which);

/// Max over expected points of the coordinatewise relative error (denominator max(|z|, 1)) to
/// the nearest unused found point; infinity when the counts differ.
double max_point_error(const Eigen::MatrixXd &found, const Eigen::MatrixXd &expected);

/// Seed for instance k of a sweep cell, derived from the base seed and the cell.
std::uint64_t instance_seed(std::uint64_t base, int n, int d, int r, int k);

} // namespace gramian::cli

#pragma once

#include "gramian/certificates.hpp"
#include "gramian/relaxation.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace gramian::cli {

using json = nlohmann::json;

/// Input document that does not match the schema (exit code 2).
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// {"n", "d", "polynomial": [{"exponents": [...], "coeff": x}, ...]}
/// or {"n", "d", "decomposition": {"points": [[...], ...], "weights": [...]}}.
struct Input {
    int n = 0;
    int d = 0;
    std::optional<Polynomial> polynomial;
    std::optional<Decomposition> decomposition;
};

/// Throws SchemaError on any violation, including duplicate exponent vectors and |β| > 2d.
Input parse_input(const json &doc);

/// Reads a file ("-" for stdin) and parses it. Throws SchemaError on unreadable or malformed JSON.
Input load_input(const std::string &path);

json to_json(const Eigen::MatrixXd &m);
json to_json(const Eigen::VectorXd &v);
json to_json(const Polynomial &p); ///< nonzero terms only, graded-lex order
json to_json(const Decomposition &dec);
json to_json(const CaseVerdict &v);
json to_json(const CertificateResiduals &r);
json to_json(const SresMatrix &s, bool include_matrix = false);

/// Report body for a relaxation solve; matrices only when requested.
json relaxation_json(const RelaxationReport &rep, bool include_matrices);
json certificate_json(const Certificate &cert, bool include_matrices);

/// Problem dump for debugging: size, cost, constraints as (row, col, value) triplets, rhs.
json sdp_problem_json(const SdpProblem &p);

} // namespace gramian::cli

#include "gramian/cli/io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

namespace gramian::cli {

namespace {

int require_int(const json &doc, const char *key) {
    if (!doc.contains(key))
        throw SchemaError(std::string("missing field \"") + key + "\"");
    const json &v = doc.at(key);
    if (!v.is_number_integer())
        throw SchemaError(std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

double require_number(const json &v, const std::string &what) {
    if (!v.is_number())
        throw SchemaError(what + " must be a number");
    return v.get<double>();
}

Polynomial parse_polynomial(const json &terms, int n, int d) {
    if (!terms.is_array())
        throw SchemaError("\"polynomial\" must be an array of terms");
    Polynomial p = Polynomial::zero(n, 2 * d);
    std::set<std::vector<int>> seen;
    for (const auto &term : terms) {
        if (!term.is_object() || !term.contains("exponents") || !term.contains("coeff"))
            throw SchemaError("each polynomial term needs \"exponents\" and \"coeff\"");
        const json &ex = term.at("exponents");
        if (!ex.is_array() || static_cast<int>(ex.size()) != n)
            throw SchemaError("\"exponents\" must be an array of n integers");
        std::vector<int> e;
        for (const auto &v : ex) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw SchemaError("exponents must be non-negative integers");
            e.push_back(v.get<int>());
        }
        if (!seen.insert(e).second)
            throw SchemaError("duplicate exponent vector in polynomial");
        MultiIndex beta(e);
        if (beta.degree() > 2 * d)
            throw SchemaError("term " + beta.to_string() + " exceeds degree 2d");
        p.set_coefficient(beta, require_number(term.at("coeff"), "\"coeff\""));
    }
    return p;
}

Decomposition parse_decomposition(const json &doc, int n) {
    if (!doc.is_object() || !doc.contains("points") || !doc.contains("weights"))
        throw SchemaError("\"decomposition\" needs \"points\" and \"weights\"");
    const json &pts = doc.at("points"), &w = doc.at("weights");
    if (!pts.is_array() || !w.is_array() || pts.size() != w.size() || pts.empty())
        throw SchemaError("\"points\" and \"weights\" must be non-empty arrays of equal length");
    Eigen::MatrixXd points(static_cast<Eigen::Index>(pts.size()), n);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(w.size()));
    for (std::size_t t = 0; t < pts.size(); ++t) {
        if (!pts[t].is_array() || static_cast<int>(pts[t].size()) != n)
            throw SchemaError("each point must have n coordinates");
        for (int k = 0; k < n; ++k)
            points(static_cast<Eigen::Index>(t), k) = require_number(pts[t][static_cast<std::size_t>(k)], "coordinate");
        weights(static_cast<Eigen::Index>(t)) = require_number(w[t], "weight");
    }
    try {
        return Decomposition(std::move(points), std::move(weights));
    } catch (const std::invalid_argument &e) {
        throw SchemaError(e.what());
    }
}

} // namespace

Input parse_input(const json &doc) {
    if (!doc.is_object())
        throw SchemaError("input must be a JSON object");
    Input in;
    in.n = require_int(doc, "n");
    in.d = require_int(doc, "d");
    if (in.n < 1 || in.d < 1)
        throw SchemaError("n and d must be positive");
    const bool has_p = doc.contains("polynomial"), has_dec = doc.contains("decomposition");
    if (has_p == has_dec)
        throw SchemaError("exactly one of \"polynomial\" and \"decomposition\" is required");
    if (has_p)
        in.polynomial = parse_polynomial(doc.at("polynomial"), in.n, in.d);
    else
        in.decomposition = parse_decomposition(doc.at("decomposition"), in.n);
    return in;
}

Input load_input(const std::string &path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream f(path);
        if (!f)
            throw SchemaError("cannot read input file " + path);
        text.assign(std::istreambuf_iterator<char>(f), {});
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    return parse_input(doc);
}

json to_json(const Eigen::MatrixXd &m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

json to_json(const Eigen::VectorXd &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

json to_json(const Polynomial &p) {
    json out = json::array();
    for (std::size_t i = 0; i < p.basis().size(); ++i) {
        const double c = p.coefficients()(static_cast<Eigen::Index>(i));
        if (c != 0.0)
            out.push_back({{"exponents", p.basis()[i].exponents()}, {"coeff", c}});
    }
    return out;
}

json to_json(const Decomposition &dec) { return {{"points", to_json(dec.points())}, {"weights", to_json(dec.weights())}}; }

json to_json(const CaseVerdict &v) {
    return {{"n", v.n},
            {"d", v.d},
            {"r", v.r},
            {"t", v.t},
            {"guaranteed_by_fullrank", v.guaranteed_by_fullrank},
            {"guarantee_case", v.guarantee_case},
            {"overconstrained", v.overconstrained},
            {"uniqueness_regime", v.uniqueness_regime},
            {"uncertain", v.uncertain},
            {"threshold", v.threshold},
            {"threshold_fraction", std::to_string(v.threshold_num) + "/" + std::to_string(v.threshold_den)}};
}

json to_json(const CertificateResiduals &r) {
    return {{"moment_product", r.moment_product}, {"odd_coeff", r.odd_coeff}, {"top_coeff", r.top_coeff},
            {"min_eig", r.min_eig},               {"norm", r.norm},           {"passes", r.passes}};
}

json to_json(const SresMatrix &s, bool include_matrix) {
    json out = {{"delta", s.delta},
                {"rows", s.matrix.rows()},
                {"cols", s.matrix.cols()},
                {"rank", s.rank},
                {"full_row_rank", s.full_row_rank}};
    if (include_matrix)
        out["matrix"] = to_json(s.matrix);
    return out;
}

json relaxation_json(const RelaxationReport &rep, bool include_matrices) {
    json out = {{"status", to_string(rep.status)},
                {"solver_message", rep.solver_message},
                {"iterations", rep.iterations},
                {"scale", rep.scale},
                {"face_dimension", rep.face_dimension},
                {"optimal_trace", rep.trace},
                {"optimal_trace_scaled", rep.trace_scaled},
                {"eigen_sum", rep.eigen_sum},
                {"min_eigenvalue", rep.min_eigenvalue},
                {"moment_spread", rep.moment_spread},
                {"rank", rep.rank},
                {"rank_lower", rep.rank_lower},
                {"flat", rep.flatness.flat},
                {"positive_semidefinite", rep.flatness.positive_semidefinite},
                {"equilibrated_singular_values", to_json(rep.equilibrated_singular_values)},
                {"gap", rep.gap},
                {"primal_residual", rep.primal_residual},
                {"dual_residual", rep.dual_residual}};
    out["decomposition"] = rep.decomposition ? to_json(*rep.decomposition) : json(nullptr);
    if (rep.verification)
        out["verification"] = {{"matches", rep.verification->matches},
                               {"max_residual", rep.verification->max_residual}};
    if (!rep.extraction_error.empty())
        out["extraction_error"] = rep.extraction_error;
    if (rep.reference_trace) {
        out["reference_trace"] = *rep.reference_trace;
        out["trace_gap_relative"] = (*rep.reference_trace - rep.trace) / *rep.reference_trace;
    }
    if (include_matrices) {
        out["X"] = to_json(rep.X.matrix);
        out["dual_y"] = to_json(rep.dual_y);
        out["dual_z"] = to_json(rep.dual_z);
        out["dual_S_scaled"] = to_json(rep.dual_S);
    }
    return out;
}

json certificate_json(const Certificate &c, bool include_matrices) {
    json out = {{"verdict", to_string(c.verdict)},
                {"method", c.method},
                {"message", c.message},
                {"n", c.n},
                {"d", c.d},
                {"r", c.r},
                {"N", c.N},
                {"t", c.t},
                {"s", c.s},
                {"scale", c.scale},
                {"rank", c.rank},
                {"rank_reduced", c.rank_reduced},
                {"residuals", to_json(c.residuals)},
                {"reduced_residuals", to_json(c.reduced_residuals)},
                {"linear_residual", c.linear_residual},
                {"z_norm_squared", c.z.squaredNorm()}};
    if (c.sres)
        out["sres"] = to_json(*c.sres);
    if (!c.sdp_status.empty())
        out["sdp_status"] = c.sdp_status;
    if (c.relaxation_trace)
        out["relaxation_trace_scaled"] = *c.relaxation_trace;
    if (c.moment_trace)
        out["moment_trace_scaled"] = *c.moment_trace;
    if (include_matrices && c.S.size()) {
        out["S"] = to_json(c.S);
        out["S_scaled"] = to_json(c.S_scaled);
        out["S_reduced_scaled"] = to_json(c.S_reduced);
        out["G"] = to_json(c.G);
    }
    return out;
}

json sdp_problem_json(const SdpProblem &p) {
    json cons = json::array();
    for (const auto &a : p.constraints) {
        json trip = json::array();
        for (int k = 0; k < a.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
                trip.push_back({it.row(), it.col(), it.value()});
        cons.push_back(std::move(trip));
    }
    return {{"size", p.size}, {"cost", to_json(p.cost)}, {"constraints", std::move(cons)}, {"rhs", to_json(p.rhs)}};
}

} // namespace gramian::cli

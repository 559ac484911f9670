#include "gramian/cli/jobs.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace gramian;
using namespace gramian::cli;

namespace {

json decomposition_doc() {
    return json::parse(R"({"n": 2, "d": 2, "decomposition": {"points": [[1, 2], [-3, 1], [2, -2]], "weights": [1, 2, 1]}})");
}

} // namespace

TEST_CASE("parse_input accepts both document shapes") {
    const Input a = parse_input(json::parse(R"({"n": 1, "d": 1, "polynomial": [
        {"exponents": [0], "coeff": 1}, {"exponents": [2], "coeff": 9}, {"exponents": [1], "coeff": 6}]})"));
    REQUIRE(a.polynomial);
    CHECK(a.polynomial->coefficient(MultiIndex{1}) == 6);
    CHECK(a.polynomial->degree_bound() == 2);

    const Input b = parse_input(decomposition_doc());
    REQUIRE(b.decomposition);
    CHECK(b.decomposition->rank() == 3);
    CHECK(b.decomposition->weights()(1) == 2);
}

TEST_CASE("parse_input schema errors") {
    const char *bad[] = {
        R"([1, 2])",
        R"({"d": 1, "polynomial": []})",
        R"({"n": 1.5, "d": 1, "polynomial": []})",
        R"({"n": 1, "d": 0, "polynomial": []})",
        R"({"n": 1, "d": 1})",
        R"({"n": 1, "d": 1, "polynomial": [], "decomposition": {"points": [[1]], "weights": [1]}})",
        R"({"n": 1, "d": 1, "polynomial": [{"exponents": [0], "coeff": 1}, {"exponents": [0], "coeff": 1}]})",
        R"({"n": 1, "d": 1, "polynomial": [{"exponents": [3], "coeff": 1}]})",
        R"({"n": 1, "d": 1, "polynomial": [{"exponents": [0, 1], "coeff": 1}]})",
        R"({"n": 1, "d": 1, "polynomial": [{"exponents": [-1], "coeff": 1}]})",
        R"({"n": 1, "d": 1, "polynomial": [{"exponents": [1], "coeff": "x"}]})",
        R"({"n": 1, "d": 1, "decomposition": {"points": [[1], [1]], "weights": [1, 1]}})",
        R"({"n": 1, "d": 1, "decomposition": {"points": [[1]], "weights": [-1]}})",
        R"({"n": 2, "d": 1, "decomposition": {"points": [[1]], "weights": [1]}})",
    };
    for (const char *doc : bad) {
        CAPTURE(doc);
        CHECK_THROWS_AS(parse_input(json::parse(doc)), SchemaError);
    }
    CHECK_THROWS_AS(load_input("/nonexistent/input.json"), SchemaError);
}

TEST_CASE("decompose recovers a point mass at the origin") {
    const Input in = parse_input(json::parse(R"({"n": 2, "d": 1, "polynomial": [{"exponents": [0, 0], "coeff": 1}]})"));
    const JobResult res = run_decompose(in, {});
    CHECK(res.exit_code == exit_ok);
    const json &r = res.report.at("result");
    CHECK(r.at("status") == "optimal");
    CHECK(r.at("rank") == 1);
    const json &pts = r.at("decomposition").at("points");
    REQUIRE(pts.size() == 1);
    CHECK(std::abs(pts[0][0].get<double>()) <= 1e-6);
    CHECK(std::abs(pts[0][1].get<double>()) <= 1e-6);
    CHECK(r.at("decomposition").at("weights")[0].get<double>() == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("decompose rejects a zero constant term as a schema error") {
    const Input in = parse_input(json::parse(R"({"n": 1, "d": 1, "polynomial": [{"exponents": [2], "coeff": 1}]})"));
    CHECK_THROWS_AS(run_decompose(in, {}), SchemaError);
}

TEST_CASE("certify report") {
    const JobResult res = run_certify(parse_input(decomposition_doc()), {});
    CHECK(res.exit_code == exit_ok);
    const std::string verdict = res.report.at("result").at("verdict");
    CHECK(verdict.rfind("certified", 0) == 0);

    const Input poly = parse_input(json::parse(R"({"n": 1, "d": 1, "polynomial": [{"exponents": [0], "coeff": 1}]})"));
    CHECK_THROWS_AS(run_certify(poly, {}), SchemaError);
}

TEST_CASE("reports are byte-stable") {
    const Input in = parse_input(decomposition_doc());
    CHECK(run_certify(in, {}).report.dump() == run_certify(in, {}).report.dump());
    CHECK(run_decompose(in, {}).report.dump() == run_decompose(in, {}).report.dump());
}

TEST_CASE("case report") {
    const JobResult res = run_case(2, 3, 10, {});
    CHECK(res.report.at("result").at("overconstrained") == true);
    CHECK(res.report.at("result").at("threshold_fraction") == "48/5");
    CHECK(res.report.at("command") == "case");
    CHECK_THROWS_AS(run_case(2, 3, 0, {}), SchemaError);
}

TEST_CASE("sweep does not depend on the thread count") {
    SweepSpec spec;
    spec.ns = {2};
    spec.ds = {2};
    spec.rs = {3, 4};
    spec.instances = 3;
    spec.threads = 1;
    const JobResult one = run_sweep(spec, {});
    spec.threads = 4;
    const JobResult four = run_sweep(spec, {});
    CHECK(one.csv == four.csv);
    CHECK(one.report.dump() == four.report.dump());
    CHECK(one.csv.rfind("n,d,r,seed,verdict,rank,trace,gap\n", 0) == 0);
    CHECK(std::count(one.csv.begin(), one.csv.end(), '\n') == 1 + 2 * 3);
}

TEST_CASE("instance seeds differ across cells") {
    CHECK(instance_seed(1, 2, 3, 8, 0) != instance_seed(1, 2, 3, 8, 1));
    CHECK(instance_seed(1, 2, 3, 8, 0) != instance_seed(1, 2, 3, 9, 0));
    CHECK(instance_seed(1, 2, 3, 8, 0) == instance_seed(1, 2, 3, 8, 0));
}

TEST_CASE("max_point_error") {
    Eigen::MatrixXd a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 3, 4, 1, 2.00002;
    CHECK(max_point_error(b, a) == doctest::Approx(1e-5));
    CHECK(std::isinf(max_point_error(a.topRows(1), a)));
}

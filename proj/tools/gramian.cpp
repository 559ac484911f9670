// Command-line front end: decompose, certify, case, sweep, reproduce.

#include "gramian/cli/jobs.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <regex>

using namespace gramian;
using namespace gramian::cli;

namespace {

struct Common {
    JobOptions job;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App *sub, Common &c) {
    sub->add_option("--tol-rank", c.job.tol_rank, "relative rank tolerance")->capture_default_str();
    sub->add_option("--tol-gap", c.job.tol_gap, "SDP duality gap tolerance")->capture_default_str();
    sub->add_option("--tol-feas", c.job.tol_feas, "SDP feasibility tolerance")->capture_default_str();
    sub->add_option("--tol-cert", c.job.tol_cert, "certificate residual tolerance")->capture_default_str();
    sub->add_option("--seed", c.job.seed, "random seed")->capture_default_str();
    sub->add_option("--out", c.out, "write the report here instead of stdout");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_flag("--timings", c.job.timings, "include wall-clock timings (reports are then not byte-stable)");
    sub->add_flag("--matrices", c.job.include_matrices, "include optimal and certificate matrices");
}

void emit(const std::string &text, const std::string &path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw SchemaError("cannot write " + path);
    f << text;
}

// Accepts "n=2" style tokens next to --n/--d/--r.
void parse_case_tokens(const std::vector<std::string> &tokens, int &n, int &d, int &r) {
    static const std::regex kv(R"(^(n|d|r)=(-?\d+)$)");
    for (const auto &tok : tokens) {
        std::smatch m;
        if (!std::regex_match(tok, m, kv))
            throw SchemaError("case: expected n=<int>, d=<int> or r=<int>, got \"" + tok + "\"");
        const int v = std::stoi(m[2]);
        (m[1] == "n" ? n : m[1] == "d" ? d : r) = v;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gramian decompositions of even-order symmetric tensors via trace minimization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    Common common;
    std::string input;
    bool assert_unique = false;
    int cn = 0, cd = 0, cr = 0;
    std::vector<std::string> case_tokens;
    SweepSpec sweep;
    std::string csv_path;

    auto *dec = app.add_subcommand("decompose", "solve the trace-minimization relaxation for a polynomial");
    dec->add_option("input", input, "input JSON file, - for stdin")->required();
    add_common(dec, common);

    auto *cert = app.add_subcommand("certify", "search for a dual certificate of optimality");
    cert->add_option("input", input, "input JSON file with a decomposition, - for stdin")->required();
    cert->add_flag("--assert-unique", assert_unique, "the decomposition is known to be unique at its rank");
    add_common(cert, common);

    auto *cas = app.add_subcommand("case", "case verdict for (n, d, r)");
    cas->add_option("tokens", case_tokens, "n=<int> d=<int> r=<int>");
    cas->add_option("--n", cn);
    cas->add_option("--d", cd);
    cas->add_option("--r", cr);
    add_common(cas, common);

    auto *swp = app.add_subcommand("sweep", "certificate rates over random integer instances");
    swp->add_option("--n", sweep.ns, "variable counts")->delimiter(',')->capture_default_str();
    swp->add_option("--d", sweep.ds, "half degrees")->delimiter(',')->capture_default_str();
    swp->add_option("--r", sweep.rs, "ranks")->delimiter(',')->capture_default_str();
    swp->add_option("--instances", sweep.instances, "instances per cell")->capture_default_str();
    swp->add_option("--threads", sweep.threads, "worker threads (GRAMIAN_SDP_THREADS caps this)");
    swp->add_option("--csv", csv_path, "also write the per-instance CSV here");
    add_common(swp, common);

    auto *rep = app.add_subcommand("reproduce", "rerun the built-in worked examples against stored expectations");
    add_common(rep, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_schema;
    }

    try {
        common.job.assert_unique = assert_unique;
        JobResult res;
        if (dec->parsed()) {
            res = run_decompose(load_input(input), common.job);
        } else if (cert->parsed()) {
            res = run_certify(load_input(input), common.job);
        } else if (cas->parsed()) {
            parse_case_tokens(case_tokens, cn, cd, cr);
            res = run_case(cn, cd, cr, common.job);
        } else if (swp->parsed()) {
            if (sweep.instances < 1)
                throw SchemaError("--instances must be positive");
            res = run_sweep(sweep, common.job);
            if (!csv_path.empty())
                emit(res.csv, csv_path);
        } else {
            res = run_reproduce(common.job);
        }
        if (common.format == "csv" && swp->parsed())
            emit(res.csv, common.out);
        else
            emit(res.report.dump(2) + "\n", common.out);
        return res.exit_code;
    } catch (const SchemaError &e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return exit_schema;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
}

#include "gramian/certificates.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gramian {

namespace {

using Sparse = Eigen::SparseMatrix<double>;

// Shared setup: scaled points, their moment matrix and kernel structure.
struct Context {
    int n = 0, d = 0, r = 0, N = 0;
    Eigen::Index dim_low = 0;
    double scale = 1.0;
    MomentMatrix M;
    KernelBasis kb;
};

Context make_context(const Decomposition &dec, int d, double kernel_tol) {
    if (d < 1)
        throw std::invalid_argument("certificates: d must be at least 1");
    Context c;
    c.n = dec.n();
    c.d = d;
    c.r = dec.rank();
    const double amax = dec.points().size() ? dec.points().cwiseAbs().maxCoeff() : 0.0;
    c.scale = amax > 0.0 ? amax : 1.0;
    c.M = rescale_moments(build_moment_matrix(moments_from_decomposition(dec, 2 * d + 2), d + 1), c.scale);
    c.N = static_cast<int>(c.M.basis.size());
    c.dim_low = static_cast<Eigen::Index>(c.M.basis.offset(d + 1));
    const Eigen::MatrixXd pts = dec.points() / c.scale;
    c.kb = kernel_extension(build_vandermonde(pts, d), build_vandermonde(pts, d + 1), kernel_tol);
    return c;
}

Certificate blank(const Context &c) {
    Certificate cert;
    cert.n = c.n;
    cert.d = c.d;
    cert.r = c.r;
    cert.N = c.N;
    cert.t = c.kb.t();
    cert.s = c.kb.s();
    cert.scale = c.scale;
    cert.method = "none";
    return cert;
}

double spectral_norm(const Eigen::MatrixXd &a) {
    if (a.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// S = s^{2d+2} D^{-1} S_scaled D^{-1}, D = diag(s^{|β|}).
Eigen::MatrixXd unscale(const Eigen::MatrixXd &s_scaled, const MonomialBasis &basis, double s, int d) {
    Eigen::VectorXd f(s_scaled.rows());
    for (Eigen::Index i = 0; i < f.size(); ++i)
        f(i) = std::pow(s, d + 1 - basis[static_cast<std::size_t>(i)].degree());
    return f.asDiagonal() * s_scaled * f.asDiagonal();
}

void finalize(Certificate &cert, const Context &c, const Eigen::MatrixXd &G, const CertifyOptions &opts) {
    cert.G = G;
    cert.S_scaled = c.kb.full * G * c.kb.full.transpose();
    cert.S_scaled = 0.5 * (cert.S_scaled + cert.S_scaled.transpose());
    cert.S = unscale(cert.S_scaled, c.M.basis, c.scale, c.d);
    cert.residuals = verify_certificate(c.M, cert.S_scaled, opts.tol);
    cert.rank = numerical_rank(cert.S_scaled, opts.rank_tol).rank;
    cert.S_reduced = schur_reduce(cert.S_scaled, c.kb.s());
    cert.rank_reduced = numerical_rank(cert.S_reduced, opts.rank_tol).rank;
    cert.reduced_residuals = verify_certificate(c.M, cert.S_reduced, opts.tol);
    if (!cert.residuals.passes) {
        cert.verdict = CertVerdict::not_found;
        return;
    }
    cert.verdict = (opts.assert_unique && cert.rank == c.N - c.r) ? CertVerdict::certified_unique
                                                                  : CertVerdict::certified;
}

Polynomial column_poly(const MonomialBasis &basis, const Eigen::VectorXd &col) { return Polynomial(basis, col); }

Eigen::VectorXd top_slice(const Polynomial &p, const std::vector<MultiIndex> &monos) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(monos.size()));
    for (std::size_t k = 0; k < monos.size(); ++k)
        v(static_cast<Eigen::Index>(k)) = p.coefficient(monos[k]);
    return v;
}

HomogeneousForm linear_power(const Eigen::VectorXd &ell, int d) {
    const int n = static_cast<int>(ell.size());
    HomogeneousForm h{n, d, {}};
    const auto monos = homogeneous_monomials(n, d);
    h.coeffs.resize(static_cast<Eigen::Index>(monos.size()));
    for (std::size_t k = 0; k < monos.size(); ++k) {
        double v = static_cast<double>(multinomial(d, monos[k]));
        for (int i = 0; i < n; ++i)
            v *= std::pow(ell(i), monos[k][i]);
        h.coeffs(static_cast<Eigen::Index>(k)) = v;
    }
    return h;
}

} // namespace

std::string to_string(CertVerdict v) {
    switch (v) {
    case CertVerdict::certified:
        return "certified";
    case CertVerdict::certified_unique:
        return "certified_unique";
    case CertVerdict::not_found:
        return "not_found";
    case CertVerdict::infeasible_heuristic:
        return "infeasible_heuristic";
    }
    return "unknown";
}

std::vector<HomogeneousForm> top_degree_forms(const Eigen::MatrixXd &kd, int n, int d) {
    if (kd.cols() == 0)
        throw std::invalid_argument("top_degree_forms: kernel is empty (t = 0)");
    const MonomialBasis basis(n, d);
    if (kd.rows() != static_cast<Eigen::Index>(basis.size()))
        throw std::invalid_argument("top_degree_forms: kernel rows do not match dim R_d");
    const auto lo = static_cast<Eigen::Index>(basis.offset(d));
    std::vector<HomogeneousForm> out;
    for (Eigen::Index i = 0; i < kd.cols(); ++i)
        out.push_back({n, d, kd.col(i).tail(kd.rows() - lo)});
    return out;
}

SresMatrix build_subresultant(const std::vector<HomogeneousForm> &forms, int delta, double rank_tol) {
    if (forms.empty())
        throw std::invalid_argument("build_subresultant: no forms");
    const int n = forms.front().n, d = forms.front().degree;
    for (const auto &h : forms)
        if (h.n != n || h.degree != d)
            throw std::invalid_argument("build_subresultant: forms differ in degree or variable count");
    if (delta < d)
        throw std::invalid_argument("build_subresultant: delta below the form degree");

    const MonomialBasis target(n, delta);
    const auto row0 = target.offset(delta);
    const auto mults = homogeneous_monomials(n, delta - d);
    const auto hmonos = homogeneous_monomials(n, d);

    SresMatrix out;
    out.n = n;
    out.form_degree = d;
    out.delta = delta;
    out.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(target.count(delta)),
                                       static_cast<Eigen::Index>(forms.size() * mults.size()));
    Eigen::Index col = 0;
    for (const auto &h : forms)
        for (const auto &a : mults) {
            for (std::size_t k = 0; k < hmonos.size(); ++k)
                out.matrix(static_cast<Eigen::Index>(target.index_of(hmonos[k] + a) - row0), col) +=
                    h.coeffs(static_cast<Eigen::Index>(k));
            ++col;
        }
    out.rank = numerical_rank(out.matrix, rank_tol).rank;
    out.full_row_rank = out.rank == out.matrix.rows();
    return out;
}

CertificateResiduals verify_certificate(const MomentMatrix &m, const Eigen::MatrixXd &s, double tol) {
    if (s.rows() != m.matrix.rows() || s.cols() != m.matrix.cols())
        throw std::invalid_argument("verify_certificate: shape mismatch");
    CertificateResiduals res;
    const int d = m.degree() - 1;
    const MonomialBasis sums(m.n(), 2 * d + 2);
    const auto lo = sums.offset(2 * d + 1);
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sums.size() - lo));
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j) {
            const MultiIndex beta = m.basis[static_cast<std::size_t>(i)] + m.basis[static_cast<std::size_t>(j)];
            if (beta.degree() >= 2 * d + 1)
                coeff(static_cast<Eigen::Index>(sums.index_of(beta) - lo)) += s(i, j);
        }
    for (std::size_t k = lo; k < sums.size(); ++k) {
        const double c = coeff(static_cast<Eigen::Index>(k - lo));
        if (sums[k].degree() == 2 * d + 1)
            res.odd_coeff = std::max(res.odd_coeff, std::abs(c));
        else
            res.top_coeff = std::max(res.top_coeff, std::abs(c - (sums[k].is_even() ? 1.0 : 0.0)));
    }
    res.norm = spectral_norm(s);
    const double denom = m.matrix.norm() * s.norm();
    res.moment_product = denom > 0.0 ? (m.matrix * s).norm() / denom : 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
    res.min_eig = res.norm > 0.0 ? es.eigenvalues()(0) / res.norm : 0.0;
    res.passes = res.moment_product <= tol && res.odd_coeff <= tol * (1.0 + res.norm) &&
                 res.top_coeff <= tol * (1.0 + res.norm) && res.min_eig >= -tol;
    return res;
}

LinearSystem assumed_form_system(const KernelBasis &kb, int n, int d) {
    const MonomialBasis low(n, d), full(n, d + 1);
    const auto rows = homogeneous_monomials(n, 2 * d + 1);
    const Eigen::Index t = kb.t(), s = kb.s();
    LinearSystem sys;
    sys.matrix.resize(static_cast<Eigen::Index>(rows.size()), t * s);
    sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));

    // q_j = x^{α_j} - F_j + Σ_i g_ij k_i; the odd top coefficients of ½ Σ_j q_j² are affine in g,
    // with ∂/∂g_ij = q_j(0) k_i and constant part ½ Σ_j q_j(0)².
    std::vector<Polynomial> q0, k;
    for (Eigen::Index j = 0; j < s; ++j)
        q0.push_back(column_poly(full, kb.full.col(t + j)));
    for (Eigen::Index i = 0; i < t; ++i)
        k.push_back(column_poly(low, kb.low.col(i)));
    for (Eigen::Index i = 0; i < t; ++i)
        for (Eigen::Index j = 0; j < s; ++j)
            sys.matrix.col(i * s + j) = top_slice(multiply(q0[static_cast<std::size_t>(j)], k[static_cast<std::size_t>(i)]), rows);
    for (Eigen::Index j = 0; j < s; ++j) {
        const auto &q = q0[static_cast<std::size_t>(j)];
        sys.rhs -= 0.5 * top_slice(multiply(q, q), rows);
    }
    return sys;
}

Certificate certify_sres(const Decomposition &dec, int d, const CertifyOptions &opts) {
    const Context c = make_context(dec, d, opts.kernel_tol);
    Certificate cert = blank(c);
    cert.method = "sres";
    if (c.kb.t() == 0) {
        cert.message = "no kernel forms (r = dim R_d)";
        return cert;
    }
    cert.sres = build_subresultant(top_degree_forms(c.kb.low, c.n, d), 2 * d + 1, opts.sres_rank_tol);
    if (!cert.sres->full_row_rank) {
        cert.message = "subresultant matrix is rank deficient (rank " + std::to_string(cert.sres->rank) + " of " +
                       std::to_string(cert.sres->matrix.rows()) + " rows)";
        return cert;
    }
    const LinearSystem sys = assumed_form_system(c.kb, c.n, d);
    const Eigen::VectorXd gv = sys.matrix.completeOrthogonalDecomposition().solve(sys.rhs);
    cert.linear_residual = (sys.matrix * gv - sys.rhs).norm();
    if (cert.linear_residual > opts.linear_tol * (1.0 + sys.rhs.norm())) {
        cert.message = "assumed-form linear system is not solvable";
        return cert;
    }
    const Eigen::Index t = c.kb.t(), s = c.kb.s();
    cert.g = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(gv.data(), t, s);
    Eigen::MatrixXd G(t + s, t + s);
    G << cert.g * cert.g.transpose(), cert.g, cert.g.transpose(), Eigen::MatrixXd::Identity(s, s);
    finalize(cert, c, G, opts);
    cert.message = cert.residuals.passes ? "subresultant has full row rank" : "certificate failed verification";
    return cert;
}

Certificate certify_general(const Decomposition &dec, int d, const CertifyOptions &opts) {
    const Context c = make_context(dec, d, opts.kernel_tol);
    Certificate cert = blank(c);
    const Eigen::Index t = c.kb.t(), s = c.kb.s(), size = t + s;
    const OrthBasis ob = build_orth_basis(c.n, d);
    const Eigen::MatrixXd &K = c.kb.full;

    // Top classes live in the degree-(d+1) block; odd classes pulled back through K_{d+1}.
    std::vector<Eigen::MatrixXd> ztop, ytop, podd;
    std::vector<double> ytop_rhs;
    for (const auto &cls : ob.classes) {
        if (cls.alpha.degree() == 2 * d + 2) {
            ytop.push_back(Eigen::MatrixXd(cls.y).bottomRightCorner(s, s));
            ytop_rhs.push_back(cls.alpha.is_even() ? 1.0 : 0.0);
            for (const auto &z : cls.z)
                ztop.push_back(Eigen::MatrixXd(z).bottomRightCorner(s, s));
        } else if (cls.alpha.degree() == 2 * d + 1) {
            podd.push_back(K.transpose() * cls.y * K);
        }
    }
    const auto nz = static_cast<Eigen::Index>(ztop.size());
    const auto rows = static_cast<Eigen::Index>(podd.size());

    // Odd coefficients of x' K G K' x with A = 0 and B = I - Σ z Z are affine in (g, z).
    Eigen::MatrixXd eg(rows, t * s), ez(rows, nz);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index b = 0; b < rows; ++b) {
        const Eigen::MatrixXd &p = podd[static_cast<std::size_t>(b)];
        const Eigen::MatrixXd pbb = p.bottomRightCorner(s, s);
        for (Eigen::Index i = 0; i < t; ++i)
            for (Eigen::Index j = 0; j < s; ++j)
                eg(b, i * s + j) = 2.0 * p(i, t + j);
        for (Eigen::Index u = 0; u < nz; ++u)
            ez(b, u) = -(pbb.array() * ztop[static_cast<std::size_t>(u)].array()).sum();
        rhs(b) = -pbb.trace();
    }

    // Fast path: minimum-norm z after eliminating g; Σ z² < 1 makes B positive definite.
    Eigen::MatrixXd qez = ez;
    Eigen::VectorXd qc = rhs;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_g;
    if (t > 0) {
        cod_g.compute(eg);
        qez -= eg * cod_g.solve(ez);
        qc -= eg * cod_g.solve(rhs);
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(nz);
    if (nz > 0)
        z = qez.completeOrthogonalDecomposition().solve(qc);
    const double proj_res = (qez * z - qc).norm();
    if (proj_res <= opts.linear_tol * (1.0 + rhs.norm())) {
        Eigen::VectorXd gv = Eigen::VectorXd::Zero(t * s);
        if (t > 0)
            gv = cod_g.solve(rhs - ez * z);
        cert.linear_residual = (eg * gv + ez * z - rhs).norm();
        cert.z = z;
        if (z.squaredNorm() < 1.0 && cert.linear_residual <= opts.linear_tol * (1.0 + rhs.norm())) {
            Eigen::MatrixXd B = Eigen::MatrixXd::Identity(s, s);
            for (Eigen::Index u = 0; u < nz; ++u)
                B -= z(u) * ztop[static_cast<std::size_t>(u)];
            cert.g = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(gv.data(), t, s);
            Eigen::MatrixXd G(size, size);
            G << cert.g * B.ldlt().solve(cert.g.transpose()), cert.g, cert.g.transpose(), B;
            finalize(cert, c, G, opts);
            if (cert.verdict != CertVerdict::not_found) {
                cert.method = "general_fast";
                cert.message = "minimum-norm solution has sum z^2 < 1";
                return cert;
            }
        }
    }

    // Feasibility SDP on G ⪰ 0 under the same linear constraints.
    SdpProblem prob;
    prob.size = static_cast<int>(size);
    Eigen::Index m = 0;
    prob.rhs.resize(static_cast<Eigen::Index>(ytop.size()) + rows);
    for (std::size_t k = 0; k < ytop.size(); ++k) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
        a.bottomRightCorner(s, s) = ytop[k];
        prob.constraints.push_back(a.sparseView());
        prob.rhs(m++) = ytop_rhs[k];
    }
    for (const auto &p : podd) {
        prob.constraints.push_back((0.5 * (p + p.transpose())).sparseView(1.0, 1e-14));
        prob.rhs(m++) = 0.0;
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
        prob.cost = attempt == 0 ? Eigen::MatrixXd(Eigen::MatrixXd::Zero(size, size))
                                 : Eigen::MatrixXd(Eigen::MatrixXd::Identity(size, size));
        const SdpSolution sol = solve_sdp(prob, opts.sdp);
        cert.sdp_status = to_string(sol.status) + ": " + sol.message;
        if (sol.status != SdpStatus::optimal)
            continue;
        finalize(cert, c, sol.X, opts);
        if (cert.verdict != CertVerdict::not_found) {
            cert.method = attempt == 0 ? "general_sdp" : "general_sdp_trace";
            cert.g = sol.X.topRightCorner(t, s);
            cert.message = "feasibility SDP found a positive semidefinite G";
            return cert;
        }
    }

    cert.method = "none";
    cert.message = "no certificate found (" + cert.sdp_status + ")";
    if (opts.cross_check) {
        const MomentSequence ms = scale_moments(moments_from_decomposition(dec, 2 * d), c.scale);
        const RelaxationReport rep = solve_relaxation_moments(ms, d, opts.relax);
        cert.relaxation_trace = rep.trace;
        cert.moment_trace = c.M.matrix.trace();
        const double margin = 10.0 * opts.relax.sdp.gap_tol * (1.0 + *cert.moment_trace);
        if (rep.status == SdpStatus::optimal && rep.trace < *cert.moment_trace - margin) {
            cert.verdict = CertVerdict::infeasible_heuristic;
            cert.message += "; relaxation optimum lies below trace(M_{d+1})";
        } else {
            cert.message += "; relaxation does not separate from trace(M_{d+1})";
        }
    }
    return cert;
}

Certificate certify(const Decomposition &dec, int d, const CertifyOptions &opts) {
    Certificate first = certify_sres(dec, d, opts);
    if (first.verdict == CertVerdict::certified || first.verdict == CertVerdict::certified_unique)
        return first;
    Certificate second = certify_general(dec, d, opts);
    second.sres = first.sres;
    second.message = "sres: " + first.message + "; general: " + second.message;
    return second;
}

Eigen::MatrixXd schur_reduce(const Eigen::MatrixXd &s, Eigen::Index top_size, double rel_tol) {
    const Eigen::Index k = s.rows() - top_size;
    if (k < 0)
        throw std::invalid_argument("schur_reduce: top block larger than matrix");
    const Eigen::MatrixXd s22 = s.bottomRightCorner(top_size, top_size);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s22 + s22.transpose()));
    const double top = es.eigenvalues().size() ? es.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(top_size);
    for (Eigen::Index i = 0; i < top_size; ++i)
        if (std::abs(es.eigenvalues()(i)) > rel_tol * top)
            inv(i) = 1.0 / es.eigenvalues()(i);
    const Eigen::MatrixXd pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    Eigen::MatrixXd out = s;
    out.topLeftCorner(k, k) = s.topRightCorner(k, top_size) * pinv * s.bottomLeftCorner(top_size, k);
    return 0.5 * (out + out.transpose());
}

CaseVerdict case_verdict(int n, int d, int r) {
    if (n < 1 || d < 1)
        throw std::invalid_argument("case_verdict: need n >= 1 and d >= 1");
    const auto dim = static_cast<long long>(binomial(n + d, n));
    if (r < 1 || r > dim)
        throw std::invalid_argument("case_verdict: r must lie in [1, C(n+d, n)]");
    CaseVerdict v;
    v.n = n;
    v.d = d;
    v.r = r;
    v.t = dim - r;

    const bool list_n = (n == 2) || (n == 3 && d <= 3) || (n == 4 && d <= 2) || (n >= 5 && d == 1);
    const bool list_n1 = (n == 2 || n == 3) || (n == 4 && d <= 6) || (n == 5 && d <= 3) ||
                         (n >= 6 && n <= 8 && d <= 2) || (n >= 9 && d == 1);
    if (v.t == n && list_n) {
        v.guaranteed_by_fullrank = true;
        v.guarantee_case = "t=n";
    } else if (v.t == n + 1 && list_n1) {
        v.guaranteed_by_fullrank = true;
        v.guarantee_case = "t=n+1";
    }

    using i128 = __int128;
    const i128 a = binomial(n + d + 1, d + 1), b = binomial(n + d, d + 1);
    i128 num = a * b - b * (b - 1) / 2 - static_cast<i128>(binomial(n + 2 * d, 2 * d + 1)) -
               static_cast<i128>(binomial(n + 2 * d + 1, 2 * d + 2));
    i128 den = b;
    i128 g = std::gcd(static_cast<long long>(num < 0 ? -num : num), static_cast<long long>(den));
    if (g > 1) {
        num /= g;
        den /= g;
    }
    v.threshold_num = static_cast<std::int64_t>(num);
    v.threshold_den = static_cast<std::int64_t>(den);
    v.threshold = static_cast<double>(num) / static_cast<double>(den);
    v.overconstrained = !v.guaranteed_by_fullrank && static_cast<i128>(r) * den > num;
    v.uniqueness_regime = d >= 2 && r <= dim - n + 1;
    v.uncertain = !v.guaranteed_by_fullrank && !v.overconstrained;
    return v;
}

std::string to_string(WitnessKind k) {
    switch (k) {
    case WitnessKind::star_n:
        return "star_n";
    case WitnessKind::star_n_plus_1:
        return "star_n_plus_1";
    case WitnessKind::powers_2_pow:
        return "powers_2_pow";
    }
    return "unknown";
}

WitnessKind witness_kind_from_string(const std::string &s) {
    for (auto k : {WitnessKind::star_n, WitnessKind::star_n_plus_1, WitnessKind::powers_2_pow})
        if (to_string(k) == s)
            return k;
    throw std::invalid_argument("unknown witness system: " + s);
}

WitnessResult witness_systems(int n, int d, WitnessKind kind) {
    if (n < 1 || d < 1)
        throw std::invalid_argument("witness_systems: need n >= 1 and d >= 1");
    WitnessResult w;
    w.kind = kind;
    if (kind == WitnessKind::powers_2_pow) {
        if (n > 6)
            throw std::invalid_argument("witness_systems: powers_2_pow supports n <= 6");
        for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
            Eigen::VectorXd ell = -Eigen::VectorXd::Ones(n);
            ell(0) = 1.0;
            for (int i = 1; i < n; ++i)
                if (mask & (1 << (i - 1)))
                    ell(i) = 1.0;
            w.forms.push_back(linear_power(ell, d));
        }
        w.sres = build_subresultant(w.forms, 2 * d);
    } else {
        for (int i = 0; i < n; ++i)
            w.forms.push_back(linear_power(Eigen::VectorXd::Unit(n, i), d));
        if (kind == WitnessKind::star_n_plus_1)
            w.forms.push_back(linear_power(Eigen::VectorXd::Ones(n), d));
        w.sres = build_subresultant(w.forms, 2 * d + 1);
    }
    w.spans = w.sres.full_row_rank;
    return w;
}

} // namespace gramian

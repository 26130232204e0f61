#include "dimwit/sdp.hpp"

#include <cmath>
#include <iostream>

#include <json.hpp>

namespace dimwit {

using nlohmann::json;

std::string SolveResult::to_json() const {
    json j;
    j["bound"] = bound;
    j["objective"] = objective;
    j["status"] = status;
    j["iterations"] = iterations;
    j["residuals"] = {{"primal", primal_residual}, {"dual", dual_residual}};
    return j.dump();
}

namespace {

struct Flattened {
    int n = 0, m = 0, nc = 0;
    const std::vector<int32_t>* cells;
    Eigen::VectorXd mult;
    Eigen::VectorXd f;
    std::vector<std::vector<std::pair<int32_t, double>>> rows;
    Eigen::VectorXd b;
};

Flattened flatten(const SdpProblem& prob) {
    Flattened fl;
    fl.n = prob.basis->n;
    fl.m = prob.basis->moments;
    fl.nc = int(prob.constraints.size());
    fl.cells = &prob.basis->cells;
    fl.mult = Eigen::VectorXd::Zero(fl.m);
    for (int32_t id : *fl.cells)
        if (id >= 0) fl.mult(id) += 1.0;
    for (int i = 0; i < fl.m; ++i)
        if (fl.mult(i) == 0.0) fl.mult(i) = 1.0;
    fl.f = prob.f;
    fl.b.resize(fl.nc);
    for (int i = 0; i < fl.nc; ++i) {
        fl.rows.push_back(prob.constraints[i].terms);
        fl.b(i) = prob.constraints[i].rhs;
    }
    return fl;
}

Eigen::VectorXd gather(const Flattened& fl, const Eigen::MatrixXd& M) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(fl.m);
    const auto& cells = *fl.cells;
    const double* md = M.data();
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i] >= 0) v(cells[i]) += md[i];
    return v;
}

void scatter(const Flattened& fl, const Eigen::VectorXd& x, Eigen::MatrixXd& M) {
    const auto& cells = *fl.cells;
    double* md = M.data();
    for (size_t i = 0; i < cells.size(); ++i) md[i] = cells[i] >= 0 ? x(cells[i]) : 0.0;
}

Eigen::VectorXd apply_A(const Flattened& fl, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(fl.nc);
    for (int i = 0; i < fl.nc; ++i) {
        double s = 0;
        for (auto [id, c] : fl.rows[i]) s += c * x(id);
        out(i) = s;
    }
    return out;
}

Eigen::VectorXd apply_AT(const Flattened& fl, const Eigen::VectorXd& y) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(fl.m);
    for (int i = 0; i < fl.nc; ++i)
        for (auto [id, c] : fl.rows[i]) out(id) += c * y(i);
    return out;
}

} // namespace

SolveResult solve(const SdpProblem& prob, const SolverOptions& opts) {
    return solve(prob, opts, Eigen::VectorXd());
}

SolveResult solve(const SdpProblem& prob, const SolverOptions& opts,
                  const Eigen::VectorXd& x0) {
    Flattened fl = flatten(prob);
    const int n = fl.n;
    double rho = opts.penalty;
    const double alpha = opts.over_relaxation;

    // K = A D^{-1} A^T, D = diag(mult); refactored only on penalty changes
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(fl.nc, fl.nc);
    for (int i = 0; i < fl.nc; ++i)
        for (int j = 0; j < fl.nc; ++j) {
            double s = 0;
            for (auto [id1, c1] : fl.rows[i])
                for (auto [id2, c2] : fl.rows[j])
                    if (id1 == id2) s += c1 * c2 / fl.mult(id1);
            K(i, j) = s;
        }
    Eigen::LLT<Eigen::MatrixXd> llt(K + 1e-13 * Eigen::MatrixXd::Identity(fl.nc, fl.nc));

    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, n);
    if (x0.size() == fl.m) scatter(fl, x0, Z);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(fl.m);
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(fl.nc);
    Eigen::MatrixXd Gx(n, n), W(n, n);
    double pr = 0, dr = 0;

    SolveResult res;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        Eigen::VectorXd t = gather(fl, Z - U);
        Eigen::VectorXd v = t - fl.f / rho;
        // lam solves K lam = A D^{-1} v - b
        Eigen::VectorXd rhs(fl.nc);
        for (int i = 0; i < fl.nc; ++i) {
            double s = 0;
            for (auto [id, c] : fl.rows[i]) s += c * v(id) / fl.mult(id);
            rhs(i) = s - fl.b(i);
        }
        lam = llt.solve(rhs);
        x = (v - apply_AT(fl, lam)).cwiseQuotient(fl.mult);
        scatter(fl, x, Gx);

        W = alpha * Gx + (1.0 - alpha) * Z + U;
        W = 0.5 * (W + W.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        Eigen::MatrixXd Zn = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();

        dr = rho * gather(fl, Zn - Z).norm();
        U += alpha * Gx + (1.0 - alpha) * Z - Zn;
        Z = Zn;
        pr = (Gx - Z).norm();

        if (opts.verbosity > 0 && it % opts.log_interval == 0)
            std::cerr << "  it " << it << " obj " << fl.f.dot(x) << " pr " << pr << " dr " << dr
                      << " rho " << rho << "\n";
        if (pr < opts.tol_primal && dr < opts.tol_dual) { ++it; break; }
        if (opts.adapt_interval > 0 && it % opts.adapt_interval == 0 && it > 0) {
            if (pr > opts.adapt_ratio * dr / rho) {
                rho *= opts.adapt_factor;
                U /= opts.adapt_factor;
            } else if (dr / rho > opts.adapt_ratio * pr) {
                rho /= opts.adapt_factor;
                U *= opts.adapt_factor;
            }
        }
    }

    res.iterations = it;
    res.x = x;
    res.objective = fl.f.dot(x);
    res.primal_residual = pr;
    res.dual_residual = dr;
    res.y = -lam;

    // dual rounding.  S0 = -rho U approximates the PSD multiplier; the
    // stationarity residual r = f - A^T y - G^T[S] is first folded into the
    // multipliers of single-moment constraint rows, the remainder is spread
    // over the Gamma cells of each moment; the PSD shift that then restores
    // S >= 0 only perturbs diagonal cells, costing |lambda_min| per row at
    // |x_i| <= 1.
    Eigen::MatrixXd S = -rho * U;
    S = 0.5 * (S + S.transpose());
    Eigen::VectorXd yr = res.y;
    Eigen::VectorXd r = fl.f - apply_AT(fl, yr) - gather(fl, S);
    std::vector<int32_t> singleton(fl.m, -1);
    for (int i = 0; i < fl.nc; ++i)
        if (fl.rows[i].size() == 1 && fl.rows[i][0].second != 0.0)
            singleton[fl.rows[i][0].first] = i;
    for (int i = 0; i < fl.m; ++i)
        if (singleton[i] >= 0 && r(i) != 0.0) {
            yr(singleton[i]) += r(i) / fl.rows[singleton[i]][0].second;
            r(i) = 0.0;
        }
    Eigen::MatrixXd Corr(n, n);
    scatter(fl, r.cwiseQuotient(fl.mult), Corr);
    S += Corr;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esS(S, Eigen::EigenvaluesOnly);
    double smin = std::min(esS.eigenvalues().minCoeff(), 0.0);
    double leftover = (fl.f - apply_AT(fl, yr) - gather(fl, S)).cwiseAbs().sum();
    res.y = yr;
    res.bound = fl.b.dot(yr) + smin * n - leftover;

    bool converged = pr < opts.tol_primal && dr < opts.tol_dual;
    if (converged) res.status = "converged";
    else if (res.y.norm() > 1e7 && pr > 100 * opts.tol_primal) res.status = "infeasible-suspected";
    else res.status = "max-iter";
    return res;
}

CgInequality extract_inequality(const SolveResult& res, const SdpProblem& prob,
                                const Behavior* scale_behavior) {
    if (prob.mode != "behavior")
        throw std::invalid_argument("extract_inequality: needs a behavior-mode problem");
    if (res.status != "converged" && res.status != "max-iter")
        throw std::invalid_argument("extract_inequality: solver did not produce a dual");
    // constraint layout from assemble_problem_behavior:
    // row 0 unit, then 12 Alice marginals, 15 Bob marginals, 180 joints
    CgInequality q;
    q.scen = Scenario{4, 5, 4, 4};
    q.bob_settings = {0, 1, 2, 3, 4};
    q.table = Eigen::MatrixXd::Zero(13, 16);
    int row = 0;
    q.table(0, 0) = res.y(row++);
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 3; ++a) q.table(1 + 3 * x + a, 0) = res.y(row++);
    for (int y = 0; y < 5; ++y)
        for (int b = 0; b < 3; ++b) q.table(0, 1 + 3 * y + b) = res.y(row++);
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 3; ++a)
            for (int y = 0; y < 5; ++y)
                for (int b = 0; b < 3; ++b) q.table(1 + 3 * x + a, 1 + 3 * y + b) = res.y(row++);

    LocalBoundResult lb = local_bound(q);
    q.table(0, 0) -= lb.value; // local bound -> 0
    q.bound = 0.0;
    if (scale_behavior) {
        double v = eval_inequality(q, *scale_behavior);
        if (std::abs(v) > 1e-12) q.table /= v;
    }
    return q;
}

} // namespace dimwit

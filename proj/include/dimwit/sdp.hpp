#pragma once

// First-order (ADMM) solver for the moment problems:
//   min f.x  s.t.  Gamma(x) >= 0,  A x = b
// with one PSD block shared-entry-structured by the moment basis.
//
// Reported bounds are certified: from the approximate dual (y, S) the PSD
// block is shifted by its most negative eigenvalue and the remaining
// stationarity residual r = f - A^T y - G^T[S] is charged at |x_i| <= 1
// (all moments of projector words lie in [-1,1]), giving
//   min f.x  >=  b.y - ||r||_1
// over every quantum-realizable moment vector.

#include "dimwit/npa.hpp"
#include "dimwit/witness.hpp"

namespace dimwit {

struct SolverOptions {
    int max_iterations = 20000;
    double tol_primal = 1e-6;
    double tol_dual = 1e-6;
    double penalty = 1.0;          // ADMM penalty, adapted by residual balancing
    double over_relaxation = 1.6;
    int adapt_interval = 50;
    double adapt_ratio = 10.0;     // rebalance when residual ratio exceeds this
    double adapt_factor = 2.0;
    uint64_t seed = 0;             // reserved; the iteration is deterministic
    int verbosity = 0;
    int log_interval = 1000;
};

struct SolveResult {
    double bound = 0.0;     // certified lower bound (dual-rounded)
    double objective = 0.0; // primal objective at x
    Eigen::VectorXd x;
    Eigen::VectorXd y;      // one multiplier per constraint row
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    std::string status;     // converged | max-iter | infeasible-suspected
    std::string to_json() const;
};

SolveResult solve(const SdpProblem& prob, const SolverOptions& opts = {});

// warm start from a feasible moment vector (e.g. an explicit model)
SolveResult solve(const SdpProblem& prob, const SolverOptions& opts,
                  const Eigen::VectorXd& x0);

// Dual multipliers of a behavior-mode problem reassembled as a Bell
// functional in Collins-Gisin layout, shifted so the deterministic local
// bound is 0 and (when scale_behavior is given) scaled so its value there
// is 1.  Guarantee: behaviors with eval >= eval(input behavior) have
// F >= result.bound.
CgInequality extract_inequality(const SolveResult& res, const SdpProblem& prob,
                                const Behavior* scale_behavior = nullptr);

} // namespace dimwit

#pragma once

// Bell functionals: CGLMP, the CHSH variants, Collins-Gisin-form linear
// inequalities and brute-force local bounds.

#include "dimwit/behavior.hpp"

#include <Eigen/Dense>

namespace dimwit {

// Collins-Gisin parametrized inequality.  table is
// (1 + nX*(nA-1)) x (1 + |bobSettings|*(nB-1)); row/column 0 hold the
// constant and the single-party marginal coefficients, rows grouped by
// Alice setting, columns by the listed Bob settings.  Orientation is
// "value <= bound" for local behaviors.
struct CgInequality {
    Scenario scen;
    std::vector<int> bob_settings;
    Eigen::MatrixXd table;
    double bound = 0.0;

    int rows() const { return 1 + scen.nX * (scen.nA - 1); }
    int cols() const { return 1 + int(bob_settings.size()) * (scen.nB - 1); }
    std::string to_json() const;
    static CgInequality from_json(const std::string& text);
};

enum class CglmpNorm { Raw, Brunner, Cy };

struct WitnessValue {
    double raw = 0.0;
    std::string normalization;
    double normalized = 0.0;
};

// Standard CGLMP functional (local bound 2, no-signaling maximum 4 in raw
// units).  Setting roles: the functional's first Alice setting to x=0,
// second to x=1; the first Bob setting to y=1, second to y=0 (calibrated so
// the Fourier-basis MES models produce the known maximal values).
// Normalizations: brunner = (raw-2)/4, cy = (raw-2)*3/8.
WitnessValue cglmp_value(const Behavior& P, int d, CglmpNorm norm);

// S_b with E_xy = sum (-1)^{a xor b} P(ab|xy);
// S_0 = -S_3 = E00+E01+E10-E11, S_1 = -S_2 = E00+E01-E10+E11
double chsh_value(const Behavior& P, int variant);

// conditional behavior of the composite y=4 outcome block: inputs (x1,x2),
// outputs (a1,a2), conditioned on Bob's outcome b
Behavior conditional_on_bsm_outcome(const Behavior& P, int b);

Eigen::MatrixXd collins_gisin_form(const Behavior& P, const std::vector<int>& bob_settings);

double eval_inequality(const CgInequality& ineq, const Behavior& P);

// full-table coefficients alpha[x][y][a][b] realizing the same functional
// on no-signaling behaviors
std::vector<double> lift_to_full_coefficients(const CgInequality& ineq);
double eval_full(const CgInequality& ineq, const std::vector<double>& alpha, const Behavior& P);

// the dimension-four certificate inequality (embedded 13x10 table,
// Bob settings {0,3,4}, local bound 0)
CgInequality certificate_inequality();

struct LocalBoundResult {
    double value = 0.0;
    std::vector<int> alice_strategy; // x -> a
    std::vector<int> bob_strategy;   // y -> b
    long long strategies = 0;
};

// exact maximum over deterministic strategies (nA^nX * nB^nY points)
LocalBoundResult local_bound(const CgInequality& ineq);

// CHSH expression S_0 as a CG inequality (local bound 2)
CgInequality chsh_as_cg();

} // namespace dimwit

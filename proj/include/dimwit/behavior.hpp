#pragma once

// Bipartite behaviors P(a,b|x,y), the quantum models that generate them,
// and exact simulation of sequential feed-forward qubit strategies.

#include "dimwit/linalg.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dimwit {

struct Scenario {
    int nX = 0, nY = 0, nA = 0, nB = 0;
    bool operator==(const Scenario&) const = default;
};

struct Behavior {
    Scenario scen;
    std::vector<double> p; // [x][y][a][b]

    Behavior() = default;
    explicit Behavior(Scenario s)
        : scen(s), p(size_t(s.nX) * s.nY * s.nA * s.nB, 0.0) {}

    double& at(int x, int y, int a, int b) {
        return p[((size_t(x) * scen.nY + y) * scen.nA + a) * scen.nB + b];
    }
    double at(int x, int y, int a, int b) const {
        return p[((size_t(x) * scen.nY + y) * scen.nA + a) * scen.nB + b];
    }

    double marginal_a(int x, int a, int y_ref = 0) const;
    double marginal_b(int y, int b, int x_ref = 0) const;

    // max deviation of slice sums from 1 and entries from [0,1]
    double normalization_residual() const;
    std::string to_json() const;
    static Behavior from_json(const std::string& text);
};

// max over parties of marginal dependence on the other party's setting
double no_signaling_residual(const Behavior& P);
bool is_no_signaling(const Behavior& P, double tol = 1e-9);

Behavior mix(const Behavior& P1, const Behavior& P2, double lambda);

struct QuantumModel {
    Mat rho;                            // on H_A (x) H_B
    std::vector<std::vector<Mat>> alice; // [x][a] projectors on H_A
    std::vector<std::vector<Mat>> bob;   // [y][b] projectors on H_B
    int dimA() const { return alice.empty() ? 0 : int(alice[0][0].rows()); }
    int dimB() const { return bob.empty() ? 0 : int(bob[0][0].rows()); }
    void validate(double tol = kBasisTol) const;
};

// Born rule for one setting pair; entries >= -1e-12, sum 1 within 1e-10
std::vector<std::vector<double>> born(const QuantumModel& m, int x, int y);

Behavior behavior_from_model(const QuantumModel& m);

// the four CHSH-maximal reference points; variant b pairs with the Bell
// expression S_b (S_0 = -S_3 = E00+E01+E10-E11, S_1 = -S_2 = E00+E01-E10+E11)
Behavior p_chsh_ref(int variant);

// product distribution with composite labels c = 2*c1 + c2 (binary factors)
Behavior product_behavior(const Behavior& P1, const Behavior& P2);

// four-outcome Fourier-basis model on the maximally entangled state:
// d outcomes, two settings per side with the given phases
QuantumModel mes_fourier_model(int d, const std::vector<double>& alphas,
                               const std::vector<double>& betas);
Behavior p_mes4();
Behavior p_mes8();

// The Bell-state-measurement behavior family.  bsm_model uses the published
// measurement table (Alice subsystem 1 aligned with z/x, Bob subsystem 1
// tilted 45 degrees; the fifth measurement projects onto the Bell basis);
// aligned_bsm_model is the locally rotated variant with Bob's first four
// measurements in product z/x form and the literal Bell basis for y=4.
// bsm_model reproduces the product/CHSH block structure exactly; the
// aligned variant is the reference model for the SWAP-operator tests.
QuantumModel bsm_model(double V);
QuantumModel aligned_bsm_model(double V);
Behavior p_bsm(double V);
Behavior p_bsm_aligned(double V);

// aligned_bsm_model with the outcome/setting relabeling matched to the
// embedded certificate inequality's index conventions
QuantumModel certificate_reference_model(double V);
Behavior p_certificate_reference(double V);

// ---- sequential feed-forward strategies ---------------------------------

// One party's strategy for R rounds of single-qubit measurements.
// bases[x][r][h] is the measurement basis (2 kets, outcome 0 listed first)
// used in round r on input x after outcome history h (bits of rounds < r,
// round 1 = least significant bit).  outcome(x, h) maps the full history to
// the final outcome label.
struct SequentialStrategy {
    int rounds = 0;
    int n_inputs = 0;
    std::vector<std::vector<std::vector<std::vector<Vec>>>> bases;
    std::function<int(int, int)> outcome;
    int n_outcomes = 0;
    void validate() const;
};

// the Fourier-basis factorization strategy: round r measures
// +-_{2^{R-r} angle + side * 2 pi h / 2^r}, final label sum_r 2^{r-1} s_r
SequentialStrategy fourier_sequential_strategy(int rounds,
                                               const std::vector<double>& setting_angles,
                                               int side);

// exact Born-rule evaluation of the feed-forward tree; sources[r] is the
// two-qubit state consumed in round r (Alice qubit first)
Behavior simulate_sequential(const SequentialStrategy& sA,
                             const SequentialStrategy& sB,
                             const std::vector<Mat>& sources);

Behavior coarse_grain(const Behavior& P, const std::vector<int>& mapA,
                      const std::vector<int>& mapB);

} // namespace dimwit

#pragma once

// SWAP-operator construction from Bob's y=0 and y=3 measurement operators,
// fidelity of the swapped-in Bell states against the fifth measurement, and
// the entanglement-swapping thought experiment.
//
// Index conventions: the swap acts on B (x) B' with B' = (B1',B2') two
// qubits; the enlarged thought-experiment space is ordered A,B,B',C,D.

#include "dimwit/behavior.hpp"

#include <optional>

namespace dimwit {

struct SwapGadget {
    Mat S;                 // on B (x) B'
    std::vector<Mat> X;    // X[2*i+j] on B
    int dimB = 0;
};

struct FactorizationReport {
    bool product_form = false; // Bob's y=0,3 satisfy the two-qubit product split
    double product_residual = 0.0;
    double factor_residual = 0.0; // || S_eq7 - (U_I V_I U_I)(U_II V_II U_II) ||_max
    bool swap_unitary = false;
};

struct SwapReport {
    double F = 0.0;
    std::array<double, 4> Ftilde{};
    std::array<double, 4> Fbar{};
    std::array<double, 4> P{};
    std::array<std::optional<double>, 4> Fi{}; // absent when P_i ~ 0
    std::string to_json() const;
};

// S_{BB'}|i,j>_{B'} = sum_{k,l} |k,l>_{B'} X_{k,l} Pi^B_{f(i,j,k,l)|0} X_{i,j}
// with f = 2(i^k)+(j^l), X_{i,j} = sum_k (-1)^{jk+i*floor(k/2)} Pi^B_{k|3}
SwapGadget build_swap(const std::vector<Mat>& bob0, const std::vector<Mat>& bob3);

FactorizationReport factorization_check(const std::vector<Mat>& bob0,
                                        const std::vector<Mat>& bob3);

// F = (1/4) sum_i Tr[ Pi^B_{i|4} S (rho_AB (x) |phi_i><phi_i|_{B'}) S^dag ]
SwapReport fidelity_F(const QuantumModel& model);

// same quantities through the explicit A,B,B',C,D thought experiment with
// auxiliary pairs |phi+>_{B1'C} (x) |phi+>_{B2'D}
SwapReport swapping_experiment(const QuantumModel& model);

// the separable five-measurement model whose swap fidelity is nevertheless 1:
// y=0, y=3 are sz(x)sz and sx(x)sx with permuted outcome labels and y=4 is
// the product measurement sz(x)sx
QuantumModel counterexample_model();

// aligned_bsm_model(1): the reference point where S is the literal double
// qubit swap and the fifth measurement is the Bell basis
QuantumModel ideal_swap_model();

// replace y=4 by a product measurement built from two single-qubit bases
QuantumModel with_product_fifth_measurement(QuantumModel m,
                                            const std::vector<Vec>& basis1,
                                            const std::vector<Vec>& basis2);

} // namespace dimwit

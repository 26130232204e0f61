#pragma once

// Dense complex linear algebra for small multi-qubit/qudit systems.
//
// Conventions used throughout:
//   * composite indices are big-endian: c = 2*c1 + c2, the FIRST tensor
//     factor carries the most significant digit (matches Eigen's
//     kroneckerProduct ordering);
//   * measurement outcome 0 <-> +1 eigenvalue for two-outcome observables.

#include <complex>
#include <vector>
#include <stdexcept>
#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace dimwit {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kNormTol = 1e-12;
constexpr double kBasisTol = 1e-10;

Mat tensor(const Mat& A, const Mat& B);
Vec tensor(const Vec& a, const Vec& b);
Mat tensor(const std::vector<Mat>& factors);

inline Mat proj(const Vec& v) { return v * v.adjoint(); }

Vec basis_state(int dim, int k);

// |+-_phi> = (|0> +- e^{i phi}|1>)/sqrt(2); index 0 = +, 1 = -
Vec pm_state(double phi, int sign);
std::vector<Vec> plus_minus_basis(double phi);

// eigenprojectors of cos(theta) sz + sin(theta) sx, outcome 0 = +1 eigenvalue
std::vector<Mat> xz_observable_projectors(double theta);

// d-outcome Fourier-type basis of Eqs-style local measurements:
//   side +1: |a> = sum_k e^{+i 2 pi a k / d} e^{i k alpha} |k> / sqrt(d)
//   side -1: |b> = sum_k e^{-i 2 pi b k / d} e^{i k beta}  |k> / sqrt(d)
std::vector<Vec> cglmp_basis(int d, int side, double phase);

// maximally entangled state sum_k |kk>/sqrt(d) on C^d (x) C^d
Vec mes(int d);

// Bell basis, labels 0:phi+, 1:phi-, 2:psi+, 3:psi-
Vec bell_state(int i);

// (V |phi+><phi+| + (1-V) I/4)^{(x)2}, ordered (A1,B1,A2,B2)
Mat werner_pair(double V);

// reorder tensor factors: position j of the result holds factor perm[j]
// of the input; dims are the input factor dimensions.
Vec permute_systems(const Vec& v, const std::vector<int>& dims, const std::vector<int>& perm);
Mat permute_systems(const Mat& m, const std::vector<int>& dims, const std::vector<int>& perm);

// trace out all factors not listed in `keep` (kept factors stay in order)
Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep);

bool is_hermitian(const Mat& m, double tol = kBasisTol);
bool is_unitary(const Mat& m, double tol = kBasisTol);
bool is_psd(const Mat& m, double tol = kBasisTol);
bool is_projector(const Mat& m, double tol = kBasisTol);

// checks pairwise orthonormality and completeness of a rank-1 basis
bool is_orthonormal_basis(const std::vector<Vec>& kets, double tol = kBasisTol);
bool is_projective_family(const std::vector<Mat>& ps, double tol = kBasisTol);

} // namespace dimwit

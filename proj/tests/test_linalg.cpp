#include <doctest.h>

#include <random>

#include "dimwit/linalg.hpp"

using namespace dimwit;

namespace {

Mat random_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Cx(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(m);
    Mat Q = qr.householderQ();
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) Q.col(i) *= R(i, i) / std::abs(R(i, i));
    return Q;
}

} // namespace

TEST_CASE("tensor products") {
    Mat I2 = Mat::Identity(2, 2);
    CHECK((tensor(I2, I2) - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    Mat p0 = proj(basis_state(2, 0)), p1 = proj(basis_state(2, 1));
    Mat p01 = tensor(p0, p1);
    // |01><01| in the c = 2c1+c2 ordering sits at index 1
    CHECK(p01(1, 1).real() == doctest::Approx(1.0));
    CHECK(p01.trace().real() == doctest::Approx(1.0));

    Vec v = tensor(bell_state(0), bell_state(0));
    // amplitudes 1/2 where A1=B1 and A2=B2 (A1B1A2B2 ordering)
    for (int idx : {0, 3, 12, 15}) CHECK(std::abs(v(idx) - Cx(0.5, 0)) < 1e-14);
    // after reordering to (A1,A2,B1,B2) the support is 0000,0101,1010,1111
    Vec w = permute_systems(v, {2, 2, 2, 2}, {0, 2, 1, 3});
    for (int idx : {0, 5, 10, 15}) CHECK(std::abs(w(idx) - Cx(0.5, 0)) < 1e-14);
    CHECK(v.norm() == doctest::Approx(1.0));
}

TEST_CASE("plus minus bases") {
    auto b0 = plus_minus_basis(0.0);
    CHECK(std::abs(b0[0](1) - Cx(1 / std::sqrt(2.0), 0)) < 1e-14);
    CHECK(std::abs(b0[1](1) + Cx(1 / std::sqrt(2.0), 0)) < 1e-14);

    auto by = plus_minus_basis(M_PI / 2);
    CHECK(std::abs(by[0](1) - Cx(0, 1 / std::sqrt(2.0))) < 1e-14);

    auto b8 = plus_minus_basis(M_PI / 8);
    CHECK(std::abs((b8[0].adjoint() * b8[1]).value()) < 1e-14);
    CHECK(is_orthonormal_basis(b8));
}

TEST_CASE("fourier-type d-outcome bases") {
    auto kets = cglmp_basis(4, +1, 0.0);
    // quaternary Fourier basis: |a> = sum_k e^{i pi a k/2}|k>/2
    for (int a = 0; a < 4; ++a)
        for (int k = 0; k < 4; ++k)
            CHECK(std::abs(kets[a](k) - std::exp(Cx(0, M_PI * a * k / 2)) / 2.0) < 1e-14);
    CHECK(is_orthonormal_basis(kets));

    // phase relabeling: alpha = pi/4 basis equals diag(e^{ik pi/4}) times alpha = 0
    auto rot = cglmp_basis(4, +1, M_PI / 4);
    Mat D = Mat::Zero(4, 4);
    for (int k = 0; k < 4; ++k) D(k, k) = std::exp(Cx(0, k * M_PI / 4));
    for (int a = 0; a < 4; ++a) CHECK((rot[a] - D * kets[a]).cwiseAbs().maxCoeff() < 1e-14);

    CHECK(is_orthonormal_basis(cglmp_basis(8, +1, 0.0)));
    CHECK(is_orthonormal_basis(cglmp_basis(8, -1, M_PI / 16)));
    CHECK_THROWS(cglmp_basis(1, +1, 0.0));
}

TEST_CASE("maximally entangled states") {
    Vec m2 = mes(2);
    CHECK((m2 - bell_state(0)).cwiseAbs().maxCoeff() < 1e-15);

    Vec m4 = mes(4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(m4(k * 4 + k) - Cx(0.5, 0)) < 1e-15);
    CHECK(mes(8).norm() == doctest::Approx(1.0));

    // U (x) conj(U) invariance
    std::mt19937_64 rng(7);
    for (int d : {2, 4}) {
        Vec phi = mes(d);
        for (int t = 0; t < 5; ++t) {
            Mat U = random_unitary(d, rng);
            Vec mapped = tensor(U, U.conjugate()) * phi;
            CHECK(std::abs(std::abs((phi.adjoint() * mapped).value()) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("ququart encoding maps mes(4) onto two qubit pairs") {
    // mes(4) lives on (A,B); the two-qubit product lives on (A1,B1,A2,B2).
    // With c = 2c1+c2 the encoding is the permutation to (A1,A2,B1,B2).
    Vec pairs = tensor(mes(2), mes(2));
    Vec reordered = permute_systems(pairs, {2, 2, 2, 2}, {0, 2, 1, 3});
    CHECK((reordered - mes(4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("bell states") {
    Vec psim = bell_state(3);
    CHECK(std::abs(psim(1) - Cx(1 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(psim(2) + Cx(1 / std::sqrt(2.0), 0)) < 1e-15);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs((bell_state(i).adjoint() * bell_state(j)).value() - (i == j ? 1.0 : 0.0)) < 1e-14);

    // the closed form sum_j (-1)^{ij} |j>|floor(i/2) xor j> reproduces the list
    for (int i = 0; i < 4; ++i) {
        Vec v = Vec::Zero(4);
        for (int j = 0; j < 2; ++j)
            v(2 * j + ((i / 2) ^ j)) = ((i * j) % 2 ? -1.0 : 1.0) / std::sqrt(2.0);
        double overlap = std::abs((bell_state(i).adjoint() * v).value());
        CHECK(overlap == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS(bell_state(4));
}

TEST_CASE("werner pairs") {
    Mat w1 = werner_pair(1.0);
    CHECK((w1 - proj(tensor(bell_state(0), bell_state(0)))).cwiseAbs().maxCoeff() < 1e-14);
    Mat w0 = werner_pair(0.0);
    CHECK((w0 - Mat::Identity(16, 16) / 16.0).cwiseAbs().maxCoeff() < 1e-14);
    Mat w = werner_pair(0.987);
    CHECK(w.trace().real() == doctest::Approx(1.0));
    CHECK(is_psd(w));
    CHECK_THROWS(werner_pair(1.1));
}

TEST_CASE("partial trace and permutation") {
    std::mt19937_64 rng(11);
    Mat U = random_unitary(4, rng);
    Mat rho = U * Eigen::Vector4cd(0.5, 0.3, 0.2, 0.0).asDiagonal() * U.adjoint();
    Mat id2 = partial_trace(tensor(rho, Mat::Identity(2, 2) / 2.0), {4, 2}, {0});
    CHECK((id2 - rho).cwiseAbs().maxCoeff() < 1e-12);
    Mat red = partial_trace(proj(bell_state(0)), {2, 2}, {1});
    CHECK((red - Mat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-14);

    Mat swapped = permute_systems(tensor(rho, Mat::Identity(2, 2)), {4, 2}, {1, 0});
    Mat back = permute_systems(swapped, {2, 4}, {1, 0});
    CHECK((back - tensor(rho, Mat::Identity(2, 2))).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("predicate checks") {
    CHECK(is_projective_family(xz_observable_projectors(0.3)));
    CHECK(is_unitary(Mat::Identity(3, 3)));
    Mat bad = Mat::Identity(2, 2);
    bad(0, 1) = 0.5;
    CHECK(!is_hermitian(bad));
}

#include "dimwit/swap.hpp"

#include <cmath>

#include <json.hpp>

namespace dimwit {

using nlohmann::json;

std::string SwapReport::to_json() const {
    json j;
    j["F"] = F;
    json per = json::array();
    for (int i = 0; i < 4; ++i) {
        json e;
        e["P"] = P[i];
        e["Fbar"] = Fbar[i];
        e["Ftilde"] = Ftilde[i];
        if (Fi[i]) e["F"] = *Fi[i]; else e["F"] = nullptr;
        per.push_back(e);
    }
    j["per_outcome"] = per;
    return j.dump();
}

SwapGadget build_swap(const std::vector<Mat>& bob0, const std::vector<Mat>& bob3) {
    if (bob0.size() != 4 || bob3.size() != 4)
        throw std::invalid_argument("build_swap: need 4-outcome families for y=0 and y=3");
    if (!is_projective_family(bob0) || !is_projective_family(bob3))
        throw std::invalid_argument("build_swap: non-projective input families");
    int dB = int(bob0[0].rows());
    SwapGadget g;
    g.dimB = dB;
    g.X.resize(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Mat X = Mat::Zero(dB, dB);
            for (int k = 0; k < 4; ++k) {
                int sign = (j * k + i * (k / 2)) % 2;
                X += (sign ? -1.0 : 1.0) * bob3[k];
            }
            g.X[2 * i + j] = X;
        }
    g.S = Mat::Zero(dB * 4, dB * 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            int col = 2 * i + j;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    int row = 2 * k + l;
                    int f = 2 * (i ^ k) + (j ^ l);
                    Mat blk = g.X[2 * k + l] * bob0[f] * g.X[2 * i + j];
                    for (int p = 0; p < dB; ++p)
                        for (int q = 0; q < dB; ++q)
                            g.S(p * 4 + row, q * 4 + col) += blk(p, q);
                }
        }
    return g;
}

namespace {

// attempt the two-qubit product split Pi_{2b1+b2|y} = Q_{b1} (x) R_{b2}
struct ProductSplit {
    bool ok = false;
    double residual = 0.0;
    std::vector<Mat> Q, R; // single-qubit projectors
};

ProductSplit split_family(const std::vector<Mat>& fam) {
    ProductSplit out;
    if (fam[0].rows() != 4) { out.residual = 1.0; return out; }
    Mat P1 = fam[0] + fam[1]; // should be Q0 (x) I
    Mat P2 = fam[0] + fam[2]; // should be I (x) R0
    Mat Q0 = partial_trace(P1, {2, 2}, {0}) / 2.0;
    Mat R0 = partial_trace(P2, {2, 2}, {1}) / 2.0;
    double res = 0.0;
    res = std::max(res, (P1 - tensor(Q0, Mat::Identity(2, 2))).cwiseAbs().maxCoeff());
    res = std::max(res, (P2 - tensor(Mat::Identity(2, 2), R0)).cwiseAbs().maxCoeff());
    Mat Q1 = Mat::Identity(2, 2) - Q0, R1 = Mat::Identity(2, 2) - R0;
    std::vector<Mat> Q{Q0, Q1}, R{R0, R1};
    for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
            res = std::max(res, (fam[2 * b1 + b2] - tensor(Q[b1], R[b2])).cwiseAbs().maxCoeff());
    for (const Mat& m : {Q0, R0})
        res = std::max(res, (m * m - m).cwiseAbs().maxCoeff());
    out.residual = res;
    out.ok = res < 1e-9;
    out.Q = Q;
    out.R = R;
    return out;
}

} // namespace

FactorizationReport factorization_check(const std::vector<Mat>& bob0,
                                        const std::vector<Mat>& bob3) {
    FactorizationReport rep;
    SwapGadget g = build_swap(bob0, bob3);
    rep.swap_unitary = is_unitary(g.S, 1e-9);

    ProductSplit s0 = split_family(bob0);
    ProductSplit s3 = split_family(bob3);
    rep.product_residual = std::max(s0.residual, s3.residual);
    rep.product_form = s0.ok && s3.ok;
    if (!rep.product_form) {
        rep.factor_residual = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }

    // U_I V_I U_I and U_II V_II U_II on B (x) B', B' ordered (B1',B2')
    Mat I2 = Mat::Identity(2, 2);
    Mat ket0 = proj(basis_state(2, 0)), ket1 = proj(basis_state(2, 1));
    Mat sx(2, 2);
    sx << 0, 1, 1, 0;
    // operators ordered (B1, B2, B1', B2')
    auto op = [&](const Mat& b1, const Mat& b2, const Mat& b1p, const Mat& b2p) {
        return tensor(tensor(b1, b2), tensor(b1p, b2p));
    };
    Mat G1 = s3.Q[0] - s3.Q[1]; // X_{1,0} factor on B1
    Mat G2 = s3.R[0] - s3.R[1]; // X_{0,1} factor on B2
    Mat UI = op(I2, I2, ket0, I2) + op(G1, I2, ket1, I2);
    Mat VI = op(s0.Q[0], I2, I2, I2) + op(s0.Q[1], I2, sx, I2);
    Mat UII = op(I2, I2, I2, ket0) + op(I2, G2, I2, ket1);
    Mat VII = op(I2, s0.R[0], I2, I2) + op(I2, s0.R[1], I2, sx);
    Mat S_fac = (UI * VI * UI) * (UII * VII * UII);

    // reorder Eq.(7) operator from (B,B') to (B1,B2,B1',B2') — already is
    rep.factor_residual = (g.S - S_fac).cwiseAbs().maxCoeff();
    return rep;
}

namespace {

SwapReport report_from(const std::array<double, 4>& Ftilde,
                       const std::array<double, 4>& Pi) {
    SwapReport rep;
    rep.Ftilde = Ftilde;
    rep.P = Pi;
    double F = 0;
    for (int i = 0; i < 4; ++i) {
        rep.Fbar[i] = Ftilde[i] / 4.0;
        F += rep.Fbar[i];
        if (Pi[i] > 1e-12) rep.Fi[i] = rep.Fbar[i] / Pi[i];
    }
    rep.F = F;
    return rep;
}

} // namespace

SwapReport fidelity_F(const QuantumModel& model) {
    if (model.bob.size() < 5) throw std::invalid_argument("fidelity_F: model lacks the fifth measurement");
    int dB = model.dimB();
    Mat rhoB = partial_trace(model.rho, {model.dimA(), dB}, {1});
    SwapGadget g = build_swap(model.bob[0], model.bob[3]);
    std::array<double, 4> Ftilde{}, Pi{};
    for (int i = 0; i < 4; ++i) {
        Mat in = tensor(rhoB, proj(bell_state(i)));
        Mat out = g.S * in * g.S.adjoint();
        Mat Pi4 = tensor(model.bob[4][i], Mat::Identity(4, 4));
        Ftilde[i] = (Pi4 * out).trace().real();
        // P_i of the thought experiment: auxiliary side reduced to I/4
        Mat inI = tensor(rhoB, Mat::Identity(4, 4) / 4.0);
        Pi[i] = (Pi4 * (g.S * inI * g.S.adjoint())).trace().real();
    }
    return report_from(Ftilde, Pi);
}

SwapReport swapping_experiment(const QuantumModel& model) {
    if (model.bob.size() < 5) throw std::invalid_argument("swapping_experiment: model lacks the fifth measurement");
    int dA = model.dimA(), dB = model.dimB();
    // spaces: A (dA), B (dB), B1' (2), B2' (2), C (2), D (2)
    Vec aux = tensor(bell_state(0), bell_state(0)); // (B1',C),(B2',D)
    Mat sigma = proj(permute_systems(aux, {2, 2, 2, 2}, {0, 2, 1, 3})); // -> (B1',B2',C,D)
    Mat state = tensor(model.rho, sigma);
    // S on (B,B'), embedded in A (x) B (x) B' (x) C (x) D
    SwapGadget g = build_swap(model.bob[0], model.bob[3]);
    Mat S_full = tensor(tensor(Mat::Identity(dA, dA), g.S), Mat::Identity(4, 4));
    Mat evolved = S_full * state * S_full.adjoint();

    std::array<double, 4> Fbar{}, Pi{}, Ftilde{};
    std::vector<int> dims{dA, dB, 2, 2, 2, 2};
    for (int i = 0; i < 4; ++i) {
        Mat Pi4 = tensor(tensor(Mat::Identity(dA, dA), model.bob[4][i]), Mat::Identity(16, 16));
        Mat rhoCD = partial_trace(Pi4 * evolved, dims, {4, 5});
        Vec phi = bell_state(i);
        Fbar[i] = (phi.adjoint() * rhoCD * phi).value().real();
        Pi[i] = rhoCD.trace().real();
        Ftilde[i] = 4.0 * Fbar[i];
    }
    SwapReport rep = report_from(Ftilde, Pi);
    // P_i from the experiment directly (overrides the reduced-form value)
    rep.P = Pi;
    for (int i = 0; i < 4; ++i) {
        rep.Fi[i].reset();
        if (Pi[i] > 1e-12) rep.Fi[i] = Fbar[i] / Pi[i];
    }
    return rep;
}

QuantumModel counterexample_model() {
    QuantumModel m;
    m.rho = permute_systems(werner_pair(1.0), {2, 2, 2, 2}, {0, 2, 1, 3});
    auto z = xz_observable_projectors(0.0);
    auto x = xz_observable_projectors(M_PI / 2);
    auto tiltp = xz_observable_projectors(M_PI / 4);
    auto tiltm = xz_observable_projectors(-M_PI / 4);
    for (int xi = 0; xi < 4; ++xi) {
        auto f1 = (xi >> 1) ? tiltm : tiltp;
        auto f2 = (xi & 1) ? tiltm : tiltp;
        std::vector<Mat> fam;
        for (int a1 = 0; a1 < 2; ++a1)
            for (int a2 = 0; a2 < 2; ++a2) fam.push_back(tensor(f1[a1], f2[a2]));
        m.alice.push_back(fam);
    }
    // y=0: sz (x) sz with outcome labels (0,0)->0,(0,1)->3,(1,0)->2,(1,1)->1
    // y=3: sx (x) sx with (0,0)->0,(0,1)->1,(1,0)->3,(1,1)->2
    const int enc0[2][2] = {{0, 3}, {2, 1}};
    const int enc3[2][2] = {{0, 1}, {3, 2}};
    std::vector<Mat> fam0(4), fam3(4);
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            fam0[enc0[s][t]] = tensor(z[s], z[t]);
            fam3[enc3[s][t]] = tensor(x[s], x[t]);
        }
    m.bob.push_back(fam0);
    // y=1, y=2 are immaterial to the swap; keep simple product families
    std::vector<Mat> fam1, fam2;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            fam1.push_back(tensor(z[s], x[t]));
            fam2.push_back(tensor(x[s], z[t]));
        }
    m.bob.push_back(fam1);
    m.bob.push_back(fam2);
    m.bob.push_back(fam3);
    // y=4: sz (x) sx, natural labels — separable, Schmidt rank 1
    std::vector<Mat> fam4;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) fam4.push_back(tensor(z[s], x[t]));
    m.bob.push_back(fam4);
    return m;
}

QuantumModel ideal_swap_model() { return aligned_bsm_model(1.0); }

QuantumModel with_product_fifth_measurement(QuantumModel m,
                                            const std::vector<Vec>& basis1,
                                            const std::vector<Vec>& basis2) {
    if (!is_orthonormal_basis(basis1) || !is_orthonormal_basis(basis2))
        throw std::invalid_argument("with_product_fifth_measurement: bad bases");
    std::vector<Mat> fam;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) fam.push_back(tensor(proj(basis1[s]), proj(basis2[t])));
    m.bob[4] = fam;
    return m;
}

} // namespace dimwit

#include "dimwit/behavior.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace dimwit {

using nlohmann::json;

double Behavior::marginal_a(int x, int a, int y_ref) const {
    double s = 0;
    for (int b = 0; b < scen.nB; ++b) s += at(x, y_ref, a, b);
    return s;
}

double Behavior::marginal_b(int y, int b, int x_ref) const {
    double s = 0;
    for (int a = 0; a < scen.nA; ++a) s += at(x_ref, y, a, b);
    return s;
}

double Behavior::normalization_residual() const {
    double worst = 0;
    for (int x = 0; x < scen.nX; ++x)
        for (int y = 0; y < scen.nY; ++y) {
            double s = 0;
            for (int a = 0; a < scen.nA; ++a)
                for (int b = 0; b < scen.nB; ++b) {
                    double v = at(x, y, a, b);
                    worst = std::max(worst, -v);
                    s += v;
                }
            worst = std::max(worst, std::abs(s - 1.0));
        }
    return worst;
}

std::string Behavior::to_json() const {
    json j;
    j["scenario"] = {{"nX", scen.nX}, {"nY", scen.nY}, {"nA", scen.nA}, {"nB", scen.nB}};
    json px = json::array();
    for (int x = 0; x < scen.nX; ++x) {
        json py = json::array();
        for (int y = 0; y < scen.nY; ++y) {
            json pa = json::array();
            for (int a = 0; a < scen.nA; ++a) {
                json pb = json::array();
                for (int b = 0; b < scen.nB; ++b) pb.push_back(at(x, y, a, b));
                pa.push_back(pb);
            }
            py.push_back(pa);
        }
        px.push_back(py);
    }
    j["p"] = px;
    return j.dump();
}

Behavior Behavior::from_json(const std::string& text) {
    json j = json::parse(text);
    Scenario s{j["scenario"]["nX"], j["scenario"]["nY"], j["scenario"]["nA"], j["scenario"]["nB"]};
    Behavior P(s);
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y)
            for (int a = 0; a < s.nA; ++a)
                for (int b = 0; b < s.nB; ++b) P.at(x, y, a, b) = j["p"][x][y][a][b];
    return P;
}

double no_signaling_residual(const Behavior& P) {
    double worst = 0;
    const Scenario& s = P.scen;
    for (int x = 0; x < s.nX; ++x)
        for (int a = 0; a < s.nA; ++a) {
            double ref = P.marginal_a(x, a, 0);
            for (int y = 1; y < s.nY; ++y) worst = std::max(worst, std::abs(P.marginal_a(x, a, y) - ref));
        }
    for (int y = 0; y < s.nY; ++y)
        for (int b = 0; b < s.nB; ++b) {
            double ref = P.marginal_b(y, b, 0);
            for (int x = 1; x < s.nX; ++x) worst = std::max(worst, std::abs(P.marginal_b(y, b, x) - ref));
        }
    return worst;
}

bool is_no_signaling(const Behavior& P, double tol) {
    return no_signaling_residual(P) <= tol;
}

Behavior mix(const Behavior& P1, const Behavior& P2, double lambda) {
    if (!(P1.scen == P2.scen)) throw std::invalid_argument("mix: scenario mismatch");
    Behavior out(P1.scen);
    for (size_t i = 0; i < out.p.size(); ++i) out.p[i] = lambda * P1.p[i] + (1 - lambda) * P2.p[i];
    return out;
}

void QuantumModel::validate(double tol) const {
    if (!is_hermitian(rho, tol)) throw std::invalid_argument("model: rho not hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol) throw std::invalid_argument("model: trace(rho) != 1");
    if (!is_psd(rho, tol)) throw std::invalid_argument("model: rho not PSD");
    for (const auto& fam : alice)
        if (!is_projective_family(fam, tol)) throw std::invalid_argument("model: bad Alice family");
    for (const auto& fam : bob)
        if (!is_projective_family(fam, tol)) throw std::invalid_argument("model: bad Bob family");
}

std::vector<std::vector<double>> born(const QuantumModel& m, int x, int y) {
    int nA = int(m.alice[x].size()), nB = int(m.bob[y].size());
    if (m.rho.rows() != m.dimA() * m.dimB())
        throw std::invalid_argument("born: rho dimension does not match projectors");
    std::vector<std::vector<double>> out(nA, std::vector<double>(nB, 0.0));
    double sum = 0;
    for (int a = 0; a < nA; ++a)
        for (int b = 0; b < nB; ++b) {
            Cx v = (m.rho * tensor(m.alice[x][a], m.bob[y][b])).trace();
            out[a][b] = v.real();
            if (out[a][b] < -1e-12) throw std::runtime_error("born: negative probability");
            sum += out[a][b];
        }
    if (std::abs(sum - 1.0) > 1e-10) throw std::runtime_error("born: unnormalized table");
    return out;
}

Behavior behavior_from_model(const QuantumModel& m) {
    Scenario s{int(m.alice.size()), int(m.bob.size()), int(m.alice[0].size()), int(m.bob[0].size())};
    Behavior P(s);
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y) {
            auto t = born(m, x, y);
            for (int a = 0; a < s.nA; ++a)
                for (int b = 0; b < s.nB; ++b) P.at(x, y, a, b) = t[a][b];
        }
    return P;
}

Behavior p_chsh_ref(int variant) {
    if (variant < 0 || variant > 3) throw std::invalid_argument("p_chsh_ref: variant");
    Behavior P(Scenario{2, 2, 2, 2});
    const double r = 1.0 / std::sqrt(2.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    // S_b-maximal sign patterns; variants 1,2 carry the
                    // x(y^1) product (the transpose of the a-priori guess
                    // (x^1)y, fixed by requiring S_b(P_b) = 2 sqrt 2)
                    int f;
                    switch (variant) {
                        case 0: f = (a ^ b) + x * y; break;
                        case 1: f = (a ^ b) + x * (y ^ 1); break;
                        case 2: f = (a ^ b) + x * (y ^ 1) + 1; break;
                        default: f = (a ^ b) + x * y + 1; break;
                    }
                    P.at(x, y, a, b) = (1.0 + (f % 2 == 0 ? r : -r)) / 4.0;
                }
    return P;
}

Behavior product_behavior(const Behavior& P1, const Behavior& P2) {
    Scenario s1 = P1.scen, s2 = P2.scen;
    Scenario s{s1.nX * s2.nX, s1.nY * s2.nY, s1.nA * s2.nA, s1.nB * s2.nB};
    if (s.nA > 64 || s.nB > 64 || s.nX > 64 || s.nY > 64)
        throw std::invalid_argument("product_behavior: composite alphabet too large");
    Behavior P(s);
    for (int x1 = 0; x1 < s1.nX; ++x1)
        for (int x2 = 0; x2 < s2.nX; ++x2)
            for (int y1 = 0; y1 < s1.nY; ++y1)
                for (int y2 = 0; y2 < s2.nY; ++y2)
                    for (int a1 = 0; a1 < s1.nA; ++a1)
                        for (int a2 = 0; a2 < s2.nA; ++a2)
                            for (int b1 = 0; b1 < s1.nB; ++b1)
                                for (int b2 = 0; b2 < s2.nB; ++b2)
                                    P.at(x1 * s2.nX + x2, y1 * s2.nY + y2,
                                         a1 * s2.nA + a2, b1 * s2.nB + b2) =
                                        P1.at(x1, y1, a1, b1) * P2.at(x2, y2, a2, b2);
    return P;
}

QuantumModel mes_fourier_model(int d, const std::vector<double>& alphas,
                               const std::vector<double>& betas) {
    QuantumModel m;
    m.rho = proj(mes(d));
    for (double al : alphas) {
        auto kets = cglmp_basis(d, +1, al);
        std::vector<Mat> fam;
        for (auto& k : kets) fam.push_back(proj(k));
        m.alice.push_back(fam);
    }
    for (double be : betas) {
        auto kets = cglmp_basis(d, -1, be);
        std::vector<Mat> fam;
        for (auto& k : kets) fam.push_back(proj(k));
        m.bob.push_back(fam);
    }
    return m;
}

Behavior p_mes4() {
    return behavior_from_model(
        mes_fourier_model(4, {0.0, M_PI / 4}, {-M_PI / 8, M_PI / 8}));
}

Behavior p_mes8() {
    return behavior_from_model(
        mes_fourier_model(8, {0.0, M_PI / 8}, {-M_PI / 16, M_PI / 16}));
}

namespace {

// two-qubit product family, label c = 2*c1 + c2
std::vector<Mat> product_family(const std::vector<Mat>& f1, const std::vector<Mat>& f2) {
    std::vector<Mat> fam;
    for (int c1 = 0; c1 < 2; ++c1)
        for (int c2 = 0; c2 < 2; ++c2) fam.push_back(tensor(f1[c1], f2[c2]));
    return fam;
}

const double kTiltPlus = M_PI / 4;   // (sz+sx)/sqrt2
const double kTiltMinus = -M_PI / 4; // (sz-sx)/sqrt2

std::vector<Mat> zx_family(int which) { // 0: sz, 1: sx
    return xz_observable_projectors(which == 0 ? 0.0 : M_PI / 2);
}

std::vector<Mat> tilt_family(int which) {
    return xz_observable_projectors(which == 0 ? kTiltPlus : kTiltMinus);
}

Mat state_pairs_to_AB(const Mat& rho_pairs) {
    // (A1,B1,A2,B2) -> (A1,A2,B1,B2)
    return permute_systems(rho_pairs, {2, 2, 2, 2}, {0, 2, 1, 3});
}

} // namespace

QuantumModel bsm_model(double V) {
    QuantumModel m;
    m.rho = state_pairs_to_AB(werner_pair(V));
    for (int x = 0; x < 4; ++x)
        m.alice.push_back(product_family(zx_family(x >> 1), tilt_family(x & 1)));
    for (int y = 0; y < 4; ++y)
        m.bob.push_back(product_family(tilt_family(y >> 1), zx_family(y & 1)));
    std::vector<Mat> bsm;
    for (int b = 0; b < 4; ++b) bsm.push_back(proj(bell_state(b)));
    m.bob.push_back(bsm);
    return m;
}

QuantumModel aligned_bsm_model(double V) {
    QuantumModel m;
    m.rho = state_pairs_to_AB(werner_pair(V));
    for (int x = 0; x < 4; ++x)
        m.alice.push_back(product_family(tilt_family(x >> 1), tilt_family(x & 1)));
    for (int y = 0; y < 4; ++y)
        m.bob.push_back(product_family(zx_family(y >> 1), zx_family(y & 1)));
    std::vector<Mat> bsm;
    for (int b = 0; b < 4; ++b) bsm.push_back(proj(bell_state(b)));
    m.bob.push_back(bsm);
    return m;
}

QuantumModel certificate_reference_model(double V) {
    // aligned model relabeled to the certificate's index conventions:
    // subsystem bits of x, a, b read least-significant-first and Bob's
    // first-four setting bits complemented
    QuantumModel al = aligned_bsm_model(V);
    QuantumModel m;
    m.rho = al.rho;
    auto bitswap = [](int c) { return ((c & 1) << 1) | (c >> 1); };
    m.alice.resize(4);
    m.bob.resize(5);
    for (int x = 0; x < 4; ++x) {
        m.alice[x].resize(4);
        for (int a = 0; a < 4; ++a) m.alice[x][a] = al.alice[bitswap(x)][bitswap(a)];
    }
    for (int y = 0; y < 4; ++y) {
        m.bob[y].resize(4);
        for (int b = 0; b < 4; ++b) m.bob[y][b] = al.bob[3 - y][bitswap(b)];
    }
    m.bob[4].resize(4);
    for (int b = 0; b < 4; ++b) m.bob[4][b] = al.bob[4][bitswap(b)];
    return m;
}

Behavior p_bsm(double V) { return behavior_from_model(bsm_model(V)); }
Behavior p_bsm_aligned(double V) { return behavior_from_model(aligned_bsm_model(V)); }
Behavior p_certificate_reference(double V) {
    return behavior_from_model(certificate_reference_model(V));
}

void SequentialStrategy::validate() const {
    if (rounds <= 0 || n_inputs <= 0) throw std::invalid_argument("strategy: empty");
    if (int(bases.size()) != n_inputs) throw std::invalid_argument("strategy: bases/input mismatch");
    for (const auto& per_input : bases) {
        if (int(per_input.size()) != rounds) throw std::invalid_argument("strategy: round count");
        for (int r = 0; r < rounds; ++r) {
            if (int(per_input[r].size()) != (1 << r))
                throw std::invalid_argument("strategy: incomplete decision tree");
            for (const auto& basis : per_input[r])
                if (basis.size() != 2 || !is_orthonormal_basis(basis))
                    throw std::invalid_argument("strategy: invalid qubit basis");
        }
    }
    if (!outcome) throw std::invalid_argument("strategy: missing outcome map");
}

SequentialStrategy fourier_sequential_strategy(int rounds,
                                               const std::vector<double>& setting_angles,
                                               int side) {
    SequentialStrategy s;
    s.rounds = rounds;
    s.n_inputs = int(setting_angles.size());
    s.n_outcomes = 1 << rounds;
    s.bases.resize(s.n_inputs);
    for (int x = 0; x < s.n_inputs; ++x) {
        s.bases[x].resize(rounds);
        for (int r = 1; r <= rounds; ++r) {
            s.bases[x][r - 1].resize(1 << (r - 1));
            for (int h = 0; h < (1 << (r - 1)); ++h) {
                double angle = std::ldexp(setting_angles[x], rounds - r) +
                               side * 2.0 * M_PI * h / (1 << r);
                s.bases[x][r - 1][h] = plus_minus_basis(angle);
            }
        }
    }
    s.outcome = [](int /*x*/, int history) { return history; };
    return s;
}

Behavior simulate_sequential(const SequentialStrategy& sA, const SequentialStrategy& sB,
                             const std::vector<Mat>& sources) {
    sA.validate();
    sB.validate();
    if (sA.rounds != sB.rounds || int(sources.size()) != sA.rounds)
        throw std::invalid_argument("simulate_sequential: source/round mismatch");
    for (const auto& src : sources)
        if (src.rows() != 4) throw std::invalid_argument("simulate_sequential: sources are two-qubit states");

    int R = sA.rounds;
    Scenario scen{sA.n_inputs, sB.n_inputs, sA.n_outcomes, sB.n_outcomes};
    Behavior P(scen);
    for (int x = 0; x < scen.nX; ++x)
        for (int y = 0; y < scen.nY; ++y)
            for (int hA = 0; hA < (1 << R); ++hA)
                for (int hB = 0; hB < (1 << R); ++hB) {
                    double pr = 1.0;
                    for (int r = 0; r < R; ++r) {
                        int prevA = hA & ((1 << r) - 1);
                        int prevB = hB & ((1 << r) - 1);
                        int sAr = (hA >> r) & 1, sBr = (hB >> r) & 1;
                        const Vec& ka = sA.bases[x][r][prevA][sAr];
                        const Vec& kb = sB.bases[y][r][prevB][sBr];
                        Mat pi = tensor(proj(ka), proj(kb));
                        pr *= (sources[r] * pi).trace().real();
                        if (pr <= 0) { pr = std::max(pr, 0.0); break; }
                    }
                    P.at(x, y, sA.outcome(x, hA), sB.outcome(y, hB)) += pr;
                }
    return P;
}

Behavior coarse_grain(const Behavior& P, const std::vector<int>& mapA,
                      const std::vector<int>& mapB) {
    if (int(mapA.size()) != P.scen.nA || int(mapB.size()) != P.scen.nB)
        throw std::invalid_argument("coarse_grain: map must be total on the outcome alphabet");
    int nA = 1 + *std::max_element(mapA.begin(), mapA.end());
    int nB = 1 + *std::max_element(mapB.begin(), mapB.end());
    Behavior out(Scenario{P.scen.nX, P.scen.nY, nA, nB});
    for (int x = 0; x < P.scen.nX; ++x)
        for (int y = 0; y < P.scen.nY; ++y)
            for (int a = 0; a < P.scen.nA; ++a)
                for (int b = 0; b < P.scen.nB; ++b)
                    out.at(x, y, mapA[a], mapB[b]) += P.at(x, y, a, b);
    return out;
}

} // namespace dimwit

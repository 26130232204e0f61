#include "dimwit/witness.hpp"

#include <cmath>

#include <json.hpp>

namespace dimwit {

using nlohmann::json;

std::string CgInequality::to_json() const {
    json j;
    j["scenario"] = {{"nX", scen.nX}, {"nY", scen.nY}, {"nA", scen.nA}, {"nB", scen.nB}};
    j["bobSettings"] = bob_settings;
    json rowsj = json::array();
    for (int r = 0; r < table.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < table.cols(); ++c) row.push_back(table(r, c));
        rowsj.push_back(row);
    }
    j["table"] = rowsj;
    j["bound"] = bound;
    return j.dump();
}

CgInequality CgInequality::from_json(const std::string& text) {
    json j = json::parse(text);
    CgInequality q;
    q.scen = Scenario{j["scenario"]["nX"], j["scenario"]["nY"], j["scenario"]["nA"], j["scenario"]["nB"]};
    q.bob_settings = j["bobSettings"].get<std::vector<int>>();
    auto rowsj = j["table"];
    q.table.resize(rowsj.size(), rowsj[0].size());
    for (int r = 0; r < q.table.rows(); ++r)
        for (int c = 0; c < q.table.cols(); ++c) q.table(r, c) = rowsj[r][c];
    q.bound = j["bound"];
    if (q.table.rows() != q.rows() || q.table.cols() != q.cols())
        throw std::invalid_argument("CgInequality: table shape mismatch");
    return q;
}

namespace {

// sum of P(a,b|x,y) over pairs with (b - a) mod d == m
double prob_shift(const Behavior& P, int x, int y, int m) {
    int d = P.scen.nA;
    double s = 0;
    for (int a = 0; a < d; ++a) s += P.at(x, y, a, (a + m % d + d) % d);
    return s;
}

} // namespace

WitnessValue cglmp_value(const Behavior& P, int d, CglmpNorm norm) {
    if (P.scen.nX != 2 || P.scen.nY != 2 || P.scen.nA != d || P.scen.nB != d)
        throw std::invalid_argument("cglmp_value: behavior shape mismatch");
    // setting roles (see header): A1 -> x=0, A2 -> x=1, B1 -> y=1, B2 -> y=0
    const int xA1 = 0, xA2 = 1, yB1 = 1, yB2 = 0;
    double raw = 0;
    for (int k = 0; k < d / 2; ++k) {
        double coeff = 1.0 - 2.0 * k / (d - 1);
        double plus = prob_shift(P, xA1, yB1, -k)        // A1 = B1 + k
                    + prob_shift(P, xA2, yB1, k + 1)     // B1 = A2 + k + 1
                    + prob_shift(P, xA2, yB2, -k)        // A2 = B2 + k
                    + prob_shift(P, xA1, yB2, k);        // B2 = A1 + k
        double minus = prob_shift(P, xA1, yB1, k + 1)    // A1 = B1 - k - 1
                     + prob_shift(P, xA2, yB1, -k)       // B1 = A2 - k
                     + prob_shift(P, xA2, yB2, k + 1)    // A2 = B2 - k - 1
                     + prob_shift(P, xA1, yB2, -k - 1);  // B2 = A1 - k - 1
        raw += coeff * (plus - minus);
    }
    WitnessValue v;
    v.raw = raw;
    switch (norm) {
        case CglmpNorm::Raw: v.normalization = "raw"; v.normalized = raw; break;
        case CglmpNorm::Brunner: v.normalization = "brunner"; v.normalized = (raw - 2.0) / 4.0; break;
        case CglmpNorm::Cy: v.normalization = "cy"; v.normalized = (raw - 2.0) * 3.0 / 8.0; break;
    }
    return v;
}

double chsh_value(const Behavior& P, int variant) {
    if (P.scen.nX != 2 || P.scen.nY != 2 || P.scen.nA != 2 || P.scen.nB != 2)
        throw std::invalid_argument("chsh_value: behavior is not 2x2x2x2");
    if (variant < 0 || variant > 3) throw std::invalid_argument("chsh_value: variant");
    double E[2][2];
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double e = 0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) e += ((a ^ b) ? -1.0 : 1.0) * P.at(x, y, a, b);
            E[x][y] = e;
        }
    double s0 = E[0][0] + E[0][1] + E[1][0] - E[1][1];
    double s1 = E[0][0] + E[0][1] - E[1][0] + E[1][1];
    switch (variant) {
        case 0: return s0;
        case 1: return s1;
        case 2: return -s1;
        default: return -s0;
    }
}

Behavior conditional_on_bsm_outcome(const Behavior& P, int b) {
    if (P.scen.nX != 4 || P.scen.nY < 5 || P.scen.nA != 4)
        throw std::invalid_argument("conditional_on_bsm_outcome: need the 4x5 scenario");
    double pb = 0;
    for (int a = 0; a < 4; ++a) pb += P.at(0, 4, a, b);
    Behavior Q(Scenario{2, 2, 2, 2});
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 4; ++a)
            Q.at(x >> 1, x & 1, a >> 1, a & 1) = P.at(x, 4, a, b) / pb;
    return Q;
}

Eigen::MatrixXd collins_gisin_form(const Behavior& P, const std::vector<int>& bob_settings) {
    int nA = P.scen.nA, nX = P.scen.nX, nB = P.scen.nB;
    int rows = 1 + nX * (nA - 1), cols = 1 + int(bob_settings.size()) * (nB - 1);
    Eigen::MatrixXd cg = Eigen::MatrixXd::Zero(rows, cols);
    cg(0, 0) = 1.0;
    for (int x = 0; x < nX; ++x)
        for (int a = 0; a < nA - 1; ++a) cg(1 + (nA - 1) * x + a, 0) = P.marginal_a(x, a, bob_settings[0]);
    for (size_t jy = 0; jy < bob_settings.size(); ++jy)
        for (int b = 0; b < nB - 1; ++b) cg(0, 1 + int((nB - 1) * jy) + b) = P.marginal_b(bob_settings[jy], b, 0);
    for (int x = 0; x < nX; ++x)
        for (int a = 0; a < nA - 1; ++a)
            for (size_t jy = 0; jy < bob_settings.size(); ++jy)
                for (int b = 0; b < nB - 1; ++b)
                    cg(1 + (nA - 1) * x + a, 1 + int((nB - 1) * jy) + b) = P.at(x, bob_settings[jy], a, b);
    return cg;
}

double eval_inequality(const CgInequality& ineq, const Behavior& P) {
    if (!(P.scen == ineq.scen)) throw std::invalid_argument("eval_inequality: scenario mismatch");
    Eigen::MatrixXd cg = collins_gisin_form(P, ineq.bob_settings);
    return (ineq.table.array() * cg.array()).sum();
}

std::vector<double> lift_to_full_coefficients(const CgInequality& ineq) {
    const Scenario& s = ineq.scen;
    auto idx = [&](int x, int y, int a, int b) {
        return ((size_t(x) * s.nY + y) * s.nA + a) * s.nB + b;
    };
    std::vector<double> alpha(size_t(s.nX) * s.nY * s.nA * s.nB, 0.0);
    int y0 = ineq.bob_settings[0], x0 = 0, m = s.nA - 1, n = s.nB - 1;
    // constant via normalization of the (x0, y0) slice
    for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b) alpha[idx(x0, y0, a, b)] += ineq.table(0, 0);
    // Alice marginals referenced at y0, Bob at x0
    for (int x = 0; x < s.nX; ++x)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < s.nB; ++b) alpha[idx(x, y0, a, b)] += ineq.table(1 + m * x + a, 0);
    for (size_t jy = 0; jy < ineq.bob_settings.size(); ++jy)
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < s.nA; ++a)
                alpha[idx(x0, ineq.bob_settings[jy], a, b)] += ineq.table(0, 1 + int(n * jy) + b);
    for (int x = 0; x < s.nX; ++x)
        for (int a = 0; a < m; ++a)
            for (size_t jy = 0; jy < ineq.bob_settings.size(); ++jy)
                for (int b = 0; b < n; ++b)
                    alpha[idx(x, ineq.bob_settings[jy], a, b)] += ineq.table(1 + m * x + a, 1 + int(n * jy) + b);
    return alpha;
}

double eval_full(const CgInequality& ineq, const std::vector<double>& alpha, const Behavior& P) {
    double v = 0;
    for (size_t i = 0; i < alpha.size(); ++i) v += alpha[i] * P.p[i];
    return v;
}

CgInequality certificate_inequality() {
    static const double t[13][10] = {
        {-3.2291, -0.0541, 0.2518, 0.2518, -11.6034, -3.5924, -3.5924, 1.6345, 0.0831, 1.6588},
        {-5.7609, 6.4226, 3.3537, 3.3537, 5.8055, 2.8521, 2.8521, -0.1087, -0.2512, -0.0683},
        {-0.7976, 3.2625, 1.6663, -1.1834, 3.2034, 1.9221, -0.9452, -1.7480, -1.0715, -0.8582},
        {-0.7976, 3.2625, -1.1834, 1.6663, 3.2034, -0.9452, 1.9221, -1.7480, -1.0715, -0.8582},
        {-2.8990, 0.0000, 2.8490, -2.8491, 5.7978, 2.8988, 2.8988, -0.0001, -0.0001, -0.0000},
        {-3.3050, 3.2064, 4.5539, 1.7050, 2.8989, 1.7012, -1.0498, 0.0481, 0.9004, -0.8496},
        {-0.2630, -3.2983, 1.1714, -1.6775, 2.8989, -1.2426, 1.9254, 0.1998, 0.9062, -0.8330},
        {-2.8990, 0.0000, -2.8491, 2.8490, 5.7978, 2.8988, 2.8988, -0.0001, -0.0001, -0.0000},
        {-0.2630, -3.2983, -1.6775, 1.1714, 2.8989, 1.9254, -1.2426, 0.1998, 0.9062, -0.8330},
        {-3.3050, 3.2064, 1.7050, 4.5539, 2.8989, -1.0498, 1.7012, 0.0481, 0.9004, -0.8496},
        {-0.0463, -6.4220, -3.3526, -3.3526, 5.8056, 2.9531, 2.9531, 0.1092, 0.2516, 0.0687},
        {2.3600, -3.1590, -4.5358, -1.6862, 2.6020, 1.6719, -1.1955, -1.6392, -0.8202, -0.7897},
        {2.3600, -3.1590, -1.6862, -4.5358, 2.6020, -1.1955, 1.6719, -1.6392, -0.8202, -0.7897}};
    CgInequality q;
    q.scen = Scenario{4, 5, 4, 4};
    q.bob_settings = {0, 3, 4};
    q.table.resize(13, 10);
    for (int r = 0; r < 13; ++r)
        for (int c = 0; c < 10; ++c) q.table(r, c) = t[r][c];
    q.bound = 0.0;
    return q;
}

LocalBoundResult local_bound(const CgInequality& ineq) {
    const Scenario& s = ineq.scen;
    int m = s.nA - 1, n = s.nB - 1;
    long long nAl = 1, nBo = 1;
    for (int x = 0; x < s.nX; ++x) nAl *= s.nA;
    for (int y = 0; y < s.nY; ++y) nBo *= s.nB;
    if (nAl * nBo > 20000000LL) throw std::invalid_argument("local_bound: scenario too large");

    LocalBoundResult best;
    best.value = -std::numeric_limits<double>::infinity();
    best.strategies = nAl * nBo;

    std::vector<int> af(s.nX), bf(s.nY);
    for (long long ai = 0; ai < nAl; ++ai) {
        long long t = ai;
        for (int x = 0; x < s.nX; ++x) { af[x] = int(t % s.nA); t /= s.nA; }
        double abase = ineq.table(0, 0);
        for (int x = 0; x < s.nX; ++x)
            if (af[x] < m) abase += ineq.table(1 + m * x + af[x], 0);
        for (long long bi = 0; bi < nBo; ++bi) {
            t = bi;
            for (int y = 0; y < s.nY; ++y) { bf[y] = int(t % s.nB); t /= s.nB; }
            double v = abase;
            for (size_t jy = 0; jy < ineq.bob_settings.size(); ++jy) {
                int b = bf[ineq.bob_settings[jy]];
                if (b >= n) continue;
                v += ineq.table(0, 1 + int(n * jy) + b);
                for (int x = 0; x < s.nX; ++x)
                    if (af[x] < m) v += ineq.table(1 + m * x + af[x], 1 + int(n * jy) + b);
            }
            if (v > best.value) {
                best.value = v;
                best.alice_strategy = af;
                best.bob_strategy = bf;
            }
        }
    }
    return best;
}

CgInequality chsh_as_cg() {
    // S_0 = E00+E01+E10-E11 with E_xy = 4 P(00|xy) - 2 P_A(0|x) - 2 P_B(0|y) + 1
    CgInequality q;
    q.scen = Scenario{2, 2, 2, 2};
    q.bob_settings = {0, 1};
    q.table = Eigen::MatrixXd::Zero(3, 3);
    const double sgn[2][2] = {{1, 1}, {1, -1}};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            q.table(0, 0) += sgn[x][y];
            q.table(1 + x, 0) += -2 * sgn[x][y];
            q.table(0, 1 + y) += -2 * sgn[x][y];
            q.table(1 + x, 1 + y) += 4 * sgn[x][y];
        }
    q.bound = 2.0;
    return q;
}

} // namespace dimwit

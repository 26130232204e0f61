#include "dimwit/linalg.hpp"

#include <cmath>
#include <numeric>

namespace dimwit {

Mat tensor(const Mat& A, const Mat& B) {
    return Eigen::kroneckerProduct(A, B).eval();
}

Vec tensor(const Vec& a, const Vec& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Mat tensor(const std::vector<Mat>& factors) {
    if (factors.empty()) throw std::invalid_argument("tensor: empty factor list");
    Mat out = factors[0];
    for (size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
    return out;
}

Vec basis_state(int dim, int k) {
    if (k < 0 || k >= dim) throw std::out_of_range("basis_state: index");
    Vec v = Vec::Zero(dim);
    v(k) = 1.0;
    return v;
}

Vec pm_state(double phi, int sign) {
    Vec v(2);
    double s = sign == 0 ? 1.0 : -1.0;
    v(0) = 1.0 / std::sqrt(2.0);
    v(1) = s * std::exp(Cx(0, phi)) / std::sqrt(2.0);
    return v;
}

std::vector<Vec> plus_minus_basis(double phi) {
    return {pm_state(phi, 0), pm_state(phi, 1)};
}

std::vector<Mat> xz_observable_projectors(double theta) {
    // eigenvectors of cos(theta) sz + sin(theta) sx are real
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Vec plus(2), minus(2);
    plus << c, s;
    minus << -s, c;
    return {proj(plus), proj(minus)};
}

std::vector<Vec> cglmp_basis(int d, int side, double phase) {
    if (d < 2) throw std::invalid_argument("cglmp_basis: d must be >= 2");
    if (side != +1 && side != -1) throw std::invalid_argument("cglmp_basis: side is +1 or -1");
    std::vector<Vec> kets;
    kets.reserve(d);
    const double w = 2.0 * M_PI / d;
    for (int a = 0; a < d; ++a) {
        Vec v(d);
        for (int k = 0; k < d; ++k)
            v(k) = std::exp(Cx(0, side * w * a * k + phase * k)) / std::sqrt(double(d));
        kets.push_back(v);
    }
    return kets;
}

Vec mes(int d) {
    if (d < 2) throw std::invalid_argument("mes: d must be >= 2");
    Vec v = Vec::Zero(d * d);
    for (int k = 0; k < d; ++k) v(k * d + k) = 1.0 / std::sqrt(double(d));
    return v;
}

Vec bell_state(int i) {
    if (i < 0 || i > 3) throw std::out_of_range("bell_state: index");
    Vec v = Vec::Zero(4);
    double r = 1.0 / std::sqrt(2.0);
    switch (i) {
        case 0: v(0) = r; v(3) = r; break;
        case 1: v(0) = r; v(3) = -r; break;
        case 2: v(1) = r; v(2) = r; break;
        case 3: v(1) = r; v(2) = -r; break;
    }
    return v;
}

Mat werner_pair(double V) {
    if (V < 0.0 || V > 1.0) throw std::invalid_argument("werner_pair: V out of [0,1]");
    Mat w = V * proj(bell_state(0)) + (1.0 - V) * Mat::Identity(4, 4) / 4.0;
    return tensor(w, w);
}

namespace {

std::vector<int> strides_of(const std::vector<int>& dims) {
    std::vector<int> st(dims.size());
    int acc = 1;
    for (int i = int(dims.size()) - 1; i >= 0; --i) {
        st[i] = acc;
        acc *= dims[i];
    }
    return st;
}

// maps output index -> input index for the factor permutation
std::vector<int> perm_index_map(const std::vector<int>& dims, const std::vector<int>& perm) {
    if (perm.size() != dims.size()) throw std::invalid_argument("permute_systems: size mismatch");
    int total = 1;
    for (int d : dims) total *= d;
    std::vector<int> odims(dims.size());
    for (size_t j = 0; j < perm.size(); ++j) odims[j] = dims[perm[j]];
    auto ist = strides_of(dims);
    auto ost = strides_of(odims);
    std::vector<int> map(total);
    for (int out = 0; out < total; ++out) {
        int rem = out, in = 0;
        for (size_t j = 0; j < perm.size(); ++j) {
            int digit = rem / ost[j];
            rem %= ost[j];
            in += digit * ist[perm[j]];
        }
        map[out] = in;
    }
    return map;
}

} // namespace

Vec permute_systems(const Vec& v, const std::vector<int>& dims, const std::vector<int>& perm) {
    auto map = perm_index_map(dims, perm);
    Vec out(v.size());
    for (int i = 0; i < v.size(); ++i) out(i) = v(map[i]);
    return out;
}

Mat permute_systems(const Mat& m, const std::vector<int>& dims, const std::vector<int>& perm) {
    auto map = perm_index_map(dims, perm);
    Mat out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out(r, c) = m(map[r], map[c]);
    return out;
}

Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
    int n = int(dims.size());
    std::vector<int> drop;
    for (int i = 0; i < n; ++i)
        if (std::find(keep.begin(), keep.end(), i) == keep.end()) drop.push_back(i);
    auto st = strides_of(dims);
    int dk = 1, dd = 1;
    for (int i : keep) dk *= dims[i];
    for (int i : drop) dd *= dims[i];
    auto unpack = [&](const std::vector<int>& sys, int idx) {
        // composite index over `sys` (big-endian in listed order) -> full offset
        int off = 0;
        for (int j = int(sys.size()) - 1; j >= 0; --j) {
            off += (idx % dims[sys[j]]) * st[sys[j]];
            idx /= dims[sys[j]];
        }
        return off;
    };
    Mat out = Mat::Zero(dk, dk);
    for (int r = 0; r < dk; ++r)
        for (int c = 0; c < dk; ++c) {
            Cx acc = 0;
            for (int t = 0; t < dd; ++t) {
                int off = unpack(drop, t);
                acc += m(unpack(keep, r) + off, unpack(keep, c) + off);
            }
            out(r, c) = acc;
        }
    return out;
}

bool is_hermitian(const Mat& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

bool is_unitary(const Mat& m, double tol) {
    Mat d = m.adjoint() * m - Mat::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() < tol;
}

bool is_psd(const Mat& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    return es.eigenvalues().minCoeff() > -tol;
}

bool is_projector(const Mat& m, double tol) {
    return is_hermitian(m, tol) && (m * m - m).cwiseAbs().maxCoeff() < tol;
}

bool is_orthonormal_basis(const std::vector<Vec>& kets, double tol) {
    for (size_t i = 0; i < kets.size(); ++i)
        for (size_t j = 0; j < kets.size(); ++j) {
            Cx g = kets[i].adjoint() * kets[j];
            double want = i == j ? 1.0 : 0.0;
            if (std::abs(g - want) > tol) return false;
        }
    return true;
}

bool is_projective_family(const std::vector<Mat>& ps, double tol) {
    if (ps.empty()) return false;
    Mat sum = Mat::Zero(ps[0].rows(), ps[0].cols());
    for (const auto& p : ps) {
        if (!is_projector(p, tol)) return false;
        sum += p;
    }
    if ((sum - Mat::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() > tol) return false;
    for (size_t i = 0; i < ps.size(); ++i)
        for (size_t j = i + 1; j < ps.size(); ++j)
            if ((ps[i] * ps[j]).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

} // namespace dimwit

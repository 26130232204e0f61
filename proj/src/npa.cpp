#include "dimwit/npa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace dimwit {

using nlohmann::json;

namespace {

constexpr int kAliceSettings = 4;
constexpr int kBobSettings = 5;

void check_letter(const Letter& l) {
    if (l.party > 1) throw std::invalid_argument("letter: bad party");
    int maxs = l.party == 0 ? kAliceSettings : kBobSettings;
    if (l.setting >= maxs) throw std::invalid_argument("letter: bad setting");
    if (l.outcome > 2) throw std::invalid_argument("letter: outcome outside Collins-Gisin range");
}

// adjacent projector reduction of a single-party segment
bool reduce_segment(std::vector<Letter>& seg) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Letter> out;
        out.reserve(seg.size());
        for (const Letter& l : seg) {
            if (!out.empty() && out.back() == l) { changed = true; continue; }
            if (!out.empty() && out.back().setting == l.setting && out.back().outcome != l.outcome)
                return false; // orthogonal projectors -> zero
            out.push_back(l);
        }
        seg.swap(out);
    }
    return true;
}

} // namespace

std::string word_to_string(const Word& w) {
    if (w.empty()) return "1";
    std::ostringstream os;
    for (const Letter& l : w)
        os << (l.party == 0 ? "A" : "B") << int(l.outcome) << "|" << int(l.setting) << ";";
    return os.str();
}

Word word_from_string(const std::string& s) {
    Word w;
    if (s == "1") return w;
    size_t i = 0;
    while (i < s.size()) {
        Letter l;
        l.party = s[i] == 'A' ? 0 : 1;
        size_t bar = s.find('|', i);
        size_t semi = s.find(';', i);
        l.outcome = uint8_t(std::stoi(s.substr(i + 1, bar - i - 1)));
        l.setting = uint8_t(std::stoi(s.substr(bar + 1, semi - bar - 1)));
        w.push_back(l);
        i = semi + 1;
    }
    return w;
}

std::optional<Word> canonicalize(const Word& w) {
    std::vector<Letter> A, B;
    for (const Letter& l : w) {
        check_letter(l);
        (l.party == 0 ? A : B).push_back(l);
    }
    if (!reduce_segment(A) || !reduce_segment(B)) return std::nullopt;
    Word out;
    out.reserve(A.size() + B.size());
    out.insert(out.end(), A.begin(), A.end());
    out.insert(out.end(), B.begin(), B.end());
    return out;
}

Word moment_key(const Word& canonical) {
    Word rev(canonical.rbegin(), canonical.rend());
    auto r = canonicalize(rev); // reversal can break the A-first layout
    return std::min(canonical, *r);
}

std::vector<Word> default_operator_set() {
    // Bob factor: identity, the 15 first-degree projectors, and the 14
    // higher-degree words of the published generating list (settings
    // rebased to 0..4, outcomes already in Collins-Gisin range)
    auto L = [](int setting, int outcome) {
        return Letter{1, uint8_t(setting), uint8_t(outcome)};
    };
    std::vector<Word> bob;
    bob.push_back({});
    for (int y = 0; y < kBobSettings; ++y)
        for (int b = 0; b < 3; ++b) bob.push_back({L(y, b)});
    const std::vector<Word> listed = {
        {L(0, 0), L(3, 0)},
        {L(3, 1), L(0, 1)},
        {L(4, 2), L(3, 1)},
        {L(3, 0), L(0, 2), L(3, 2)},
        {L(3, 2), L(0, 1), L(3, 1)},
        {L(4, 0), L(0, 1), L(3, 0)},
        {L(4, 1), L(0, 2), L(3, 1)},
        {L(4, 1), L(3, 0), L(0, 2)},
        {L(4, 2), L(3, 2), L(0, 0)},
        {L(4, 0), L(3, 1), L(0, 0), L(3, 1)},
        {L(4, 0), L(3, 2), L(0, 2), L(3, 1)},
        {L(4, 1), L(3, 1), L(0, 0), L(3, 2)},
        {L(4, 1), L(3, 2), L(0, 2), L(3, 2)},
        {L(4, 2), L(3, 1), L(0, 1), L(3, 0)},
    };
    bob.insert(bob.end(), listed.begin(), listed.end());

    std::vector<Word> alice;
    alice.push_back({});
    for (int x = 0; x < kAliceSettings; ++x)
        for (int a = 0; a < 3; ++a) alice.push_back({Letter{0, uint8_t(x), uint8_t(a)}});

    std::vector<Word> gens;
    gens.reserve(alice.size() * bob.size());
    for (const Word& aw : alice)
        for (const Word& bw : bob) {
            Word g = aw;
            g.insert(g.end(), bw.begin(), bw.end());
            gens.push_back(g);
        }
    return gens;
}

std::vector<Word> fallback_operator_set() {
    std::vector<Word> gens;
    gens.push_back({});
    for (int x = 0; x < kAliceSettings; ++x)
        for (int a = 0; a < 3; ++a) gens.push_back({Letter{0, uint8_t(x), uint8_t(a)}});
    for (int y = 0; y < kBobSettings; ++y)
        for (int b = 0; b < 3; ++b) gens.push_back({Letter{1, uint8_t(y), uint8_t(b)}});
    for (int x = 0; x < kAliceSettings; ++x)
        for (int a = 0; a < 3; ++a)
            for (int y = 0; y < kBobSettings; ++y)
                for (int b = 0; b < 3; ++b)
                    gens.push_back({Letter{0, uint8_t(x), uint8_t(a)}, Letter{1, uint8_t(y), uint8_t(b)}});
    return gens;
}

int32_t MomentBasis::id_of(const Word& key) const {
    auto it = index.find(word_to_string(key));
    return it == index.end() ? -1 : it->second;
}

MomentBasis build_moment_structure(std::vector<Word> generators) {
    MomentBasis mb;
    mb.generators = std::move(generators);
    mb.n = int(mb.generators.size());
    mb.cells.assign(size_t(mb.n) * mb.n, -1);

    auto intern = [&](const Word& key) {
        std::string s = word_to_string(key);
        auto it = mb.index.find(s);
        if (it != mb.index.end()) return it->second;
        int32_t id = int32_t(mb.words.size());
        mb.index.emplace(std::move(s), id);
        mb.words.push_back(key);
        return id;
    };
    intern(Word{}); // unit moment gets id 0

    std::vector<Word> adjoints(mb.n);
    for (int i = 0; i < mb.n; ++i)
        adjoints[i] = Word(mb.generators[i].rbegin(), mb.generators[i].rend());

    for (int r = 0; r < mb.n; ++r) {
        for (int c = r; c < mb.n; ++c) {
            Word prod = adjoints[r];
            prod.insert(prod.end(), mb.generators[c].begin(), mb.generators[c].end());
            auto canon = canonicalize(prod);
            int32_t id = -1;
            if (canon) id = intern(moment_key(*canon));
            mb.cells[size_t(r) * mb.n + c] = id;
            mb.cells[size_t(c) * mb.n + r] = id;
        }
    }
    mb.moments = int(mb.words.size());
    mb.multiplicity.assign(mb.moments, 0);
    for (int32_t id : mb.cells)
        if (id >= 0) mb.multiplicity[id]++;
    return mb;
}

std::vector<Word> host_words(std::vector<Word> generators, const std::vector<Word>& needed) {
    // membership structures for fast "is hosted" checks
    auto key_of = [](const Word& w) { return word_to_string(w); };
    std::unordered_map<std::string, int> have;
    for (size_t i = 0; i < generators.size(); ++i) have.emplace(key_of(generators[i]), int(i));

    auto gen_present = [&](const Word& w) { return have.count(key_of(w)) > 0; };
    auto add_gen = [&](const Word& w) {
        if (!gen_present(w)) {
            have.emplace(key_of(w), int(generators.size()));
            generators.push_back(w);
        }
    };

    for (const Word& w : needed) {
        // hosted if w = canon(u^dag v) for some generators u, v; rather than
        // scanning all pairs, try all split points and look for the halves
        bool hosted = false;
        for (size_t cut = 0; cut <= w.size() && !hosted; ++cut) {
            Word L(w.begin(), w.begin() + cut), R(w.begin() + cut, w.end());
            Word Lrev(L.rbegin(), L.rend());
            if (gen_present(Lrev) && gen_present(R)) hosted = true;
        }
        if (hosted) continue;
        size_t cut = w.size() / 2;
        Word L(w.begin(), w.begin() + cut), R(w.begin() + cut, w.end());
        Word Lrev(L.rbegin(), L.rend());
        add_gen(Lrev);
        add_gen(R);
    }
    return generators;
}

namespace {

struct Term {
    double c;
    Word w;
};

// X_{i,j} = sum_k (-1)^{jk + i floor(k/2)} Pi_{k|3}, outcome 3 eliminated
std::vector<Term> x_terms(int i, int j) {
    auto eta = [&](int k) { return ((j * k + i * (k / 2)) % 2) ? -1.0 : 1.0; };
    std::vector<Term> t;
    t.push_back({eta(3), {}});
    for (int k = 0; k < 3; ++k) {
        double d = eta(k) - eta(3);
        if (d != 0.0) t.push_back({d, {Letter{1, 3, uint8_t(k)}}});
    }
    return t;
}

std::vector<Term> proj_terms(int setting, int outcome) {
    if (outcome < 3) return {{1.0, {Letter{1, uint8_t(setting), uint8_t(outcome)}}}};
    std::vector<Term> t{{1.0, {}}};
    for (int k = 0; k < 3; ++k) t.push_back({-1.0, {Letter{1, uint8_t(setting), uint8_t(k)}}});
    return t;
}

} // namespace

WordPoly objective_poly() {
    WordPoly poly;
    std::array<Eigen::Vector4d, 4> amp;
    for (int i = 0; i < 4; ++i) amp[i] = bell_state(i).real();

    for (int i = 0; i < 4; ++i) {
        for (int ij = 0; ij < 4; ++ij) {
            if (std::abs(amp[i](ij)) < 1e-15) continue;
            for (int i2j2 = 0; i2j2 < 4; ++i2j2) {
                if (std::abs(amp[i](i2j2)) < 1e-15) continue;
                double c0 = 0.25 * amp[i](ij) * amp[i](i2j2);
                int i1 = ij >> 1, j1 = ij & 1;
                int i2 = i2j2 >> 1, j2 = i2j2 & 1;
                for (int kl = 0; kl < 4; ++kl) {
                    int k = kl >> 1, l = kl & 1;
                    int f1 = 2 * (i2 ^ k) + (j2 ^ l);
                    int f2 = 2 * (i1 ^ k) + (j1 ^ l);
                    // <psi| X_{i2j2} Pi_{f1|0} X_{kl} Pi_{i|4} X_{kl} Pi_{f2|0} X_{i1j1} |psi>
                    for (const Term& t1 : x_terms(i2, j2))
                        for (const Term& t2 : proj_terms(0, f1))
                            for (const Term& t3 : x_terms(k, l))
                                for (const Term& t4 : proj_terms(4, i))
                                    for (const Term& t5 : x_terms(k, l))
                                        for (const Term& t6 : proj_terms(0, f2))
                                            for (const Term& t7 : x_terms(i1, j1)) {
                                                Word w;
                                                for (const Term* t :
                                                     {&t1, &t2, &t3, &t4, &t5, &t6, &t7})
                                                    w.insert(w.end(), t->w.begin(), t->w.end());
                                                auto canon = canonicalize(w);
                                                if (!canon) continue;
                                                double cc = c0 * t1.c * t2.c * t3.c * t4.c *
                                                            t5.c * t6.c * t7.c;
                                                poly[moment_key(*canon)] += cc;
                                            }
                }
            }
        }
    }
    std::erase_if(poly, [](const auto& kv) { return std::abs(kv.second) < 1e-12; });
    return poly;
}

Eigen::VectorXd objective_from_F(const MomentBasis& basis) {
    WordPoly poly = objective_poly();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(basis.moments);
    for (const auto& [w, c] : poly) {
        int32_t id = basis.id_of(w);
        if (id < 0)
            throw std::runtime_error("objective_from_F: moment basis cannot represent word " +
                                     word_to_string(w));
        f(id) += c;
    }
    return f;
}

namespace {

Mat word_operator(const Word& w, const QuantumModel& m) {
    Mat A = Mat::Identity(m.dimA(), m.dimA());
    Mat B = Mat::Identity(m.dimB(), m.dimB());
    for (const Letter& l : w) {
        if (l.party == 0) A = A * m.alice[l.setting][l.outcome];
        else B = B * m.bob[l.setting][l.outcome];
    }
    return tensor(A, B);
}

double word_moment(const Word& w, const QuantumModel& m) {
    return (m.rho * word_operator(w, m)).trace().real();
}

} // namespace

double eval_poly_on_model(const WordPoly& poly, const QuantumModel& m) {
    double s = 0;
    for (const auto& [w, c] : poly) s += c * word_moment(w, m);
    return s;
}

Eigen::VectorXd model_moments(const QuantumModel& m, const MomentBasis& basis) {
    Eigen::VectorXd x(basis.moments);
    for (int i = 0; i < basis.moments; ++i) x(i) = word_moment(basis.words[i], m);
    return x;
}

Eigen::MatrixXd assemble_gamma(const MomentBasis& basis, const Eigen::VectorXd& x) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(basis.n, basis.n);
    for (int r = 0; r < basis.n; ++r)
        for (int c = 0; c < basis.n; ++c) {
            int32_t id = basis.cell(r, c);
            if (id >= 0) G(r, c) = x(id);
        }
    return G;
}

namespace {

int32_t require_id(const MomentBasis& basis, const Word& w) {
    int32_t id = basis.id_of(moment_key(*canonicalize(w)));
    if (id < 0)
        throw std::runtime_error("constraint map: missing moment " + word_to_string(w));
    return id;
}

} // namespace

std::vector<ConstraintRow> behavior_constraint_map(const MomentBasis& basis, const Behavior& P) {
    std::vector<ConstraintRow> rows;
    auto widA = [&](int x, int a) { return require_id(basis, {Letter{0, uint8_t(x), uint8_t(a)}}); };
    auto widB = [&](int y, int b) { return require_id(basis, {Letter{1, uint8_t(y), uint8_t(b)}}); };
    auto widAB = [&](int x, int a, int y, int b) {
        return require_id(basis, {Letter{0, uint8_t(x), uint8_t(a)}, Letter{1, uint8_t(y), uint8_t(b)}});
    };
    for (int x = 0; x < P.scen.nX; ++x)
        for (int y = 0; y < P.scen.nY; ++y)
            for (int a = 0; a < P.scen.nA; ++a)
                for (int b = 0; b < P.scen.nB; ++b) {
                    ConstraintRow row;
                    row.rhs = P.at(x, y, a, b);
                    if (a < 3 && b < 3) {
                        row.terms = {{widAB(x, a, y, b), 1.0}};
                    } else if (a == 3 && b < 3) {
                        row.terms.push_back({widB(y, b), 1.0});
                        for (int ap = 0; ap < 3; ++ap) row.terms.push_back({widAB(x, ap, y, b), -1.0});
                    } else if (a < 3 && b == 3) {
                        row.terms.push_back({widA(x, a), 1.0});
                        for (int bp = 0; bp < 3; ++bp) row.terms.push_back({widAB(x, a, y, bp), -1.0});
                    } else {
                        row.terms.push_back({0, 1.0}); // unit moment
                        for (int ap = 0; ap < 3; ++ap) row.terms.push_back({widA(x, ap), -1.0});
                        for (int bp = 0; bp < 3; ++bp) row.terms.push_back({widB(y, bp), -1.0});
                        for (int ap = 0; ap < 3; ++ap)
                            for (int bp = 0; bp < 3; ++bp) row.terms.push_back({widAB(x, ap, y, bp), 1.0});
                    }
                    rows.push_back(std::move(row));
                }
    return rows;
}

double eval_row(const ConstraintRow& row, const Eigen::VectorXd& x) {
    double s = 0;
    for (auto [id, c] : row.terms) s += c * x(id);
    return s;
}

std::string SdpProblem::to_json() const {
    json j;
    j["mode"] = mode;
    j["generators"] = json::array();
    for (const Word& g : basis->generators) j["generators"].push_back(word_to_string(g));
    j["moments"] = basis->moments;
    json fj = json::array();
    for (int i = 0; i < f.size(); ++i)
        if (f(i) != 0.0) fj.push_back({{"moment", word_to_string(basis->words[i])}, {"coeff", f(i)}});
    j["objective"] = fj;
    json cj = json::array();
    for (const auto& row : constraints) {
        json r;
        r["rhs"] = row.rhs;
        json terms = json::array();
        for (auto [id, c] : row.terms)
            terms.push_back({{"moment", word_to_string(basis->words[id])}, {"coeff", c}});
        r["terms"] = terms;
        cj.push_back(r);
    }
    j["constraints"] = cj;
    json cellj = json::array();
    for (int r = 0; r < basis->n; ++r)
        for (int c = r; c < basis->n; ++c)
            if (basis->cell(r, c) >= 0)
                cellj.push_back({r, c, basis->cell(r, c)});
    j["gamma_cells"] = cellj;
    return j.dump();
}

namespace {

std::shared_ptr<MomentBasis> hosted_basis(std::vector<Word> generators) {
    WordPoly poly = objective_poly();
    std::vector<Word> needed;
    needed.reserve(poly.size());
    for (const auto& [w, c] : poly) needed.push_back(w);
    return std::make_shared<MomentBasis>(build_moment_structure(host_words(std::move(generators), needed)));
}

ConstraintRow unit_row() {
    ConstraintRow r;
    r.terms = {{0, 1.0}};
    r.rhs = 1.0;
    return r;
}

} // namespace

SdpProblem assemble_problem_behavior(const Behavior& P, std::vector<Word> generators) {
    if (P.scen.nX != 4 || P.scen.nY != 5 || P.scen.nA != 4 || P.scen.nB != 4)
        throw std::invalid_argument("assemble_problem_behavior: scenario must be 4x5 with 4 outcomes");
    SdpProblem prob;
    prob.mode = "behavior";
    prob.basis = hosted_basis(std::move(generators));
    prob.f = objective_from_F(*prob.basis);
    prob.constraints.push_back(unit_row());
    // independent subset: marginals + Collins-Gisin joints
    auto& basis = *prob.basis;
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 3; ++a) {
            ConstraintRow r;
            r.terms = {{require_id(basis, {Letter{0, uint8_t(x), uint8_t(a)}}), 1.0}};
            r.rhs = P.marginal_a(x, a, 0);
            prob.constraints.push_back(r);
        }
    for (int y = 0; y < 5; ++y)
        for (int b = 0; b < 3; ++b) {
            ConstraintRow r;
            r.terms = {{require_id(basis, {Letter{1, uint8_t(y), uint8_t(b)}}), 1.0}};
            r.rhs = P.marginal_b(y, b, 0);
            prob.constraints.push_back(r);
        }
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 3; ++a)
            for (int y = 0; y < 5; ++y)
                for (int b = 0; b < 3; ++b) {
                    ConstraintRow r;
                    r.terms = {{require_id(basis, {Letter{0, uint8_t(x), uint8_t(a)},
                                                   Letter{1, uint8_t(y), uint8_t(b)}}), 1.0}};
                    r.rhs = P.at(x, y, a, b);
                    prob.constraints.push_back(r);
                }
    return prob;
}

SdpProblem assemble_problem_inequality(const CgInequality& ineq, double v,
                                       std::vector<Word> generators) {
    SdpProblem prob;
    prob.mode = "inequality";
    prob.basis = hosted_basis(std::move(generators));
    prob.f = objective_from_F(*prob.basis);
    prob.constraints.push_back(unit_row());
    auto& basis = *prob.basis;
    const int m = ineq.scen.nA - 1, n = ineq.scen.nB - 1;
    ConstraintRow r;
    std::map<int32_t, double> acc;
    acc[0] += ineq.table(0, 0);
    for (int x = 0; x < ineq.scen.nX; ++x)
        for (int a = 0; a < m; ++a) {
            double c = ineq.table(1 + m * x + a, 0);
            if (c != 0.0) acc[require_id(basis, {Letter{0, uint8_t(x), uint8_t(a)}})] += c;
        }
    for (size_t jy = 0; jy < ineq.bob_settings.size(); ++jy)
        for (int b = 0; b < n; ++b) {
            double c = ineq.table(0, 1 + int(n * jy) + b);
            if (c != 0.0)
                acc[require_id(basis, {Letter{1, uint8_t(ineq.bob_settings[jy]), uint8_t(b)}})] += c;
        }
    for (int x = 0; x < ineq.scen.nX; ++x)
        for (int a = 0; a < m; ++a)
            for (size_t jy = 0; jy < ineq.bob_settings.size(); ++jy)
                for (int b = 0; b < n; ++b) {
                    double c = ineq.table(1 + m * x + a, 1 + int(n * jy) + b);
                    if (c != 0.0)
                        acc[require_id(basis, {Letter{0, uint8_t(x), uint8_t(a)},
                                               Letter{1, uint8_t(ineq.bob_settings[jy]), uint8_t(b)}})] += c;
                }
    for (auto [id, c] : acc) r.terms.push_back({id, c});
    r.rhs = v;
    prob.constraints.push_back(std::move(r));
    return prob;
}

} // namespace dimwit

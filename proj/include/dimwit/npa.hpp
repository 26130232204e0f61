#pragma once

// Projector-word algebra, canonical moment indexing, moment-matrix
// structure, behavior constraints and the swap-fidelity objective expanded
// into moments.
//
// Scenario: Alice 4 settings, Bob 5 settings, 4 outcomes each; words use
// Collins-Gisin outcomes {0,1,2} (the last outcome is eliminated through
// completeness).  Letters of different parties commute; the canonical form
// puts Alice letters first.  Moments are real: <w> and <w^dag> share one
// variable (any complex feasible point can be replaced by its real part
// without changing objective or constraints).

#include "dimwit/behavior.hpp"
#include "dimwit/witness.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>

namespace dimwit {

struct Letter {
    uint8_t party;   // 0 = A, 1 = B
    uint8_t setting; // A: 0..3, B: 0..4
    uint8_t outcome; // 0..2 (Collins-Gisin range)
    auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>; // empty word = identity

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

// canonical form or nullopt for the zero operator
std::optional<Word> canonicalize(const Word& w);

// key identifying <w> with <w^dag>
Word moment_key(const Word& canonical);

// the printed 390-operator generating set
std::vector<Word> default_operator_set();

// small set for fast runs: {I, Pi^A} (x) {I, Pi^B}
std::vector<Word> fallback_operator_set();

// linear combination of canonical words
using WordPoly = std::map<Word, double>;

// product of two letter sequences expanded over Collins-Gisin range
// (letters with outcome 3 are not representable; see expand helpers in npa.cpp)

struct MomentBasis {
    std::vector<Word> generators;
    std::unordered_map<std::string, int32_t> index; // moment_key string -> id
    std::vector<Word> words;                        // id -> key word
    std::vector<int32_t> cells;                     // N*N, -1 = zero cell
    std::vector<int32_t> multiplicity;              // cells per moment id
    int n = 0;                                      // generator count
    int moments = 0;                                // distinct moment count
    int32_t cell(int r, int c) const { return cells[size_t(r) * n + c]; }
    int32_t id_of(const Word& canonical_key) const;
};

// builds the Gamma structure; cell (u,v) holds the moment of canon(u^dag v)
MomentBasis build_moment_structure(std::vector<Word> generators);

// generators extended so that every word of `needed` appears as some
// u^dag v; returns the extended set (pure-Bob wing words are appended)
std::vector<Word> host_words(std::vector<Word> generators, const std::vector<Word>& needed);

// the swap-fidelity objective as a polynomial in canonical words
WordPoly objective_poly();

// objective mapped onto a moment basis; throws listing a missing word
Eigen::VectorXd objective_from_F(const MomentBasis& basis);

// explicit-model valuation of a word polynomial (independent of any basis)
double eval_poly_on_model(const WordPoly& poly, const QuantumModel& m);

// moment vector of an explicit model
Eigen::VectorXd model_moments(const QuantumModel& m, const MomentBasis& basis);

// numeric Gamma from a moment vector
Eigen::MatrixXd assemble_gamma(const MomentBasis& basis, const Eigen::VectorXd& x);

// h-map: for every (a,b,x,y) of the full 4x5x4x4 table, the linear
// functional over moments reproducing P(a,b|x,y)
struct ConstraintRow {
    std::vector<std::pair<int32_t, double>> terms;
    double rhs = 0.0;
};
std::vector<ConstraintRow> behavior_constraint_map(const MomentBasis& basis, const Behavior& P);

// evaluate an h-row on a moment vector
double eval_row(const ConstraintRow& row, const Eigen::VectorXd& x);

struct SdpProblem {
    std::shared_ptr<MomentBasis> basis;
    Eigen::VectorXd f;
    std::vector<ConstraintRow> constraints; // includes <1> = 1
    std::string mode;                       // "behavior" or "inequality"
    std::string to_json() const;            // sparse, human-auditable
};

// first form: moments compatible with the full behavior
SdpProblem assemble_problem_behavior(const Behavior& P, std::vector<Word> generators);

// second form: a single linear constraint fixing the inequality value
SdpProblem assemble_problem_inequality(const CgInequality& ineq, double v,
                                       std::vector<Word> generators);

} // namespace dimwit

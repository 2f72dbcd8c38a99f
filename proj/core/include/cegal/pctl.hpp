#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cegal/types.hpp"

namespace cegal {
namespace pctl {

enum class Comparison { LessEq, GreaterEq, Less, Greater };

struct StateFormula;
using StateFormulaPtr = std::shared_ptr<const StateFormula>;

/// Path formula: either `X phi` or `phi1 U phi2` with an optional step bound.
struct PathFormula {
    enum class Kind { Next, Until };
    Kind kind;
    StateFormulaPtr left;           // unused for Next
    StateFormulaPtr right;          // operand of Next, or the until target
    std::optional<int> bound;       // until step bound; empty = unbounded
};

/// State formula over atomic labels, with the probability operator embedding
/// a path formula. Only `Prob` at the top level is checkable; the rest of the
/// grammar is representable so formulas print and round-trip faithfully.
struct StateFormula {
    enum class Kind { True, Atom, Not, And, Prob };
    Kind kind = Kind::True;

    std::string label;                       // Atom
    StateFormulaPtr child;                   // Not
    StateFormulaPtr lhs, rhs;                // And
    Comparison cmp = Comparison::LessEq;     // Prob
    double threshold = 0.0;                  // Prob
    std::shared_ptr<const PathFormula> path; // Prob
};

StateFormulaPtr make_true();
StateFormulaPtr make_atom(std::string label);
StateFormulaPtr make_not(StateFormulaPtr f);
StateFormulaPtr make_and(StateFormulaPtr l, StateFormulaPtr r);
StateFormulaPtr make_prob(Comparison cmp, double threshold,
                          std::shared_ptr<const PathFormula> path);
std::shared_ptr<const PathFormula> make_until(StateFormulaPtr left, StateFormulaPtr right,
                                              std::optional<int> bound);
std::shared_ptr<const PathFormula> make_next(StateFormulaPtr operand);

bool equal(const StateFormula& a, const StateFormula& b);

/// Parses the property grammar
///   P{<=|>=|<|>}<p> [ <state> U[<=t] <state> ]   or   P.. [ X <state> ]
/// with state formulas built from `true`, quoted labels, `!`, `&` and
/// parentheses. `&` binds tighter than `U`; `!` binds tighter than `&`.
/// Throws ParseError with a byte offset on malformed input.
StateFormulaPtr parse(const std::string& text);

/// Canonical printing; parse(to_string(f)) reproduces f exactly.
std::string to_string(const StateFormula& f);

/// Convenience shorthand for the safety shape P<=p [ true U<=t "label" ].
StateFormulaPtr bounded_reach_bound(double p_star, int bound, const std::string& label);

/// Evaluates a probability-free state formula on every state of the chain.
/// Throws UnknownLabel if an atom is not defined by the model and
/// UnsupportedFormula if a nested probability operator occurs.
std::vector<char> evaluate_states(const StateFormula& f, const Dtmc& chain);

} // namespace pctl

/// Library-wide name for a parsed property.
using PctlFormula = pctl::StateFormulaPtr;

} // namespace cegal

#pragma once

// N-barbed observation and a bounded barbed-bisimulation check over
// explored reduction graphs.

#include <span>
#include <string>
#include <vector>

#include "rhocomb/reduction.hpp"

namespace rhocomb {

/// Members of `observables` on which `form` has a top-level output (a message
/// in the combinator calculi, an output or lift in π and ρ). Restricted
/// channels never match. Result keeps the order of `observables`.
std::vector<Name> barbs(Calculus c, const CanonicalForm& form, std::span<const Name> observables);
std::vector<Name> barbs(Calculus c, const Term& t, std::span<const Name> observables);

struct WeakBarbs {
  std::vector<Name> barbs;
  bool truncated = false;  // exploration stopped early; more barbs may exist
};

/// Barbs of any state reachable from t within the budget.
WeakBarbs weak_barbs(Calculus c, const Term& t, std::span<const Name> observables, const Budget& budget = {});

/// Per-state strong and weak barb sets of a graph, as indices into `observables`.
struct GraphBarbs {
  std::vector<std::vector<std::size_t>> strong;
  std::vector<std::vector<std::size_t>> weak;
};
GraphBarbs graph_barbs(const ReductionGraph& g, std::span<const Name> observables);

struct BisimOptions {
  Budget left_budget;
  Budget right_budget;
  bool strict = false;  // match single steps with single steps and compare strong barbs
};

struct WitnessStep {
  bool left_side;  // the move was made by the left process
  std::size_t from;
  std::size_t to;
  Redex redex;
};

struct BisimVerdict {
  bool related = false;
  bool bounded = false;  // some state was not fully explored and was related optimistically
  ReductionGraph left;
  ReductionGraph right;
  std::size_t relation_pairs = 0;
  // When unrelated: moves from the root pair to a pair whose barbs differ.
  std::vector<WitnessStep> witness;
  std::size_t witness_left = 0;
  std::size_t witness_right = 0;
  std::vector<Name> only_left;   // left observable names with no right counterpart there
  std::vector<Name> only_right;  // right observable names with no left counterpart there
  std::string reason;
};

/// Barbs are observed on `observables` for the left process and on
/// `right_observables` (same length, position-wise renaming) for the right;
/// pass an empty span to observe the same names on both sides.
BisimVerdict bounded_bisim(Calculus lc, const Term& l, Calculus rc, const Term& r, std::span<const Name> observables,
                           std::span<const Name> right_observables = {}, const BisimOptions& opts = {});

}  // namespace rhocomb

#pragma once

// One-step rewriting, deterministic traces and bounded exhaustive
// exploration for the four calculi.
//
// Rules always match on canonical forms. A canonical term is opened into a
// "soup": the names restricted at top level plus the list of active
// parallel components. Redex indices refer to positions in that list, which
// is deterministic for a given canonical form.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rhocomb/congruence.hpp"
#include "rhocomb/term.hpp"

namespace rhocomb {

enum class Rule : std::uint8_t {
  Dup,     // d(a,b,c) | m(a,x) -> m(b,x) | m(c,x)
  Kill,    // k(a) | m(a,x) -> 0
  Fwd,     // fw(a,b) | m(a,x) -> m(b,x)
  BindR,   // br(a,b) | m(a,x) -> fw(b,x)
  BindL,   // bl(a,b) | m(a,x) -> fw(x,b)
  Sync,    // s(a,b,c) | m(a,x) -> fw(b,c)
  Drop,    // *(a) | m(a,P) -> P
  Unfold,  // *P -> P | *P
  Comm,    // for(y <- x)P | x!(v) -> P{v/y}
};

std::string_view to_string(Rule r);

struct Soup {
  std::vector<std::string> restricted;  // atoms bound by the enclosing restrictions
  std::vector<Term> parts;
};

/// Opens a canonical term. Restricted names become `%s<block>_<level>`.
Soup open_soup(const CanonicalForm& form);
/// Restricts every restricted name over the parts and canonicalizes.
CanonicalForm close_soup(Calculus c, const Soup& soup);

struct Redex {
  Rule rule;
  std::vector<std::size_t> indices;  // agent (or input, or a drop referent's components) first, message last
  std::vector<Digest> participants;  // digests of the parts at those indices
  std::optional<Name> channel;       // the matched channel, absent for Unfold
};

bool operator<(const Redex& a, const Redex& b);

std::vector<Redex> find_redexes(Calculus c, const Term& t);
std::vector<Redex> find_redexes(Calculus c, const CanonicalForm& form, const Soup& soup);

/// Applies `r` and returns the canonical result. Throws SemanticError on a
/// stale redex.
CanonicalForm step(Calculus c, const Term& t, const Redex& r);
CanonicalForm step(Calculus c, const CanonicalForm& form, const Soup& soup, const Redex& r);

/// The rule's contractum alone, before it is put back in parallel with the
/// untouched components.
Term contractum(Calculus c, const Soup& soup, const Redex& r);

struct Budget {
  std::size_t max_steps = 8;
  std::size_t max_unfolds = 2;   // per path
  std::size_t max_states = 5000;
  // explore() only: when a non-unfold redex shares no component with any
  // other enabled redex and its channel is not observable, fire it alone.
  // Such a step commutes with everything else, so weak barbs are unchanged.
  bool reduce_confluent = false;
  std::vector<Name> observables;
};

struct TraceStep {
  CanonicalForm state;
  Redex redex;
};

struct Trace {
  Calculus calculus;
  std::vector<TraceStep> steps;
  CanonicalForm final_state;
  bool truncated = false;  // stopped by a budget while redexes remained
};

/// Repeatedly fires the least redex (by index tuple, then rule).
Trace reduce_deterministic(Calculus c, const Term& t, const Budget& budget = {});

struct GraphState {
  CanonicalForm form;
  std::size_t depth = 0;    // BFS distance from the root
  std::size_t unfolds = 0;  // unfolds on the discovering path
  bool complete = false;    // every enabled redex was explored
};

struct GraphEdge {
  std::size_t from;
  std::size_t to;
  Redex redex;
};

struct ReductionGraph {
  Calculus calculus;
  std::vector<GraphState> states;  // states[0] is the root
  std::vector<GraphEdge> edges;
  std::unordered_map<Digest, std::size_t> index;
  bool truncated = false;

  std::vector<std::vector<std::size_t>> successors() const;
  std::optional<std::size_t> find(Digest d) const;
};

/// Breadth-first exploration of every redex up to the budget (see
/// Budget::reduce_confluent for the one exception).
ReductionGraph explore(Calculus c, const Term& t, const Budget& budget = {});

enum class Polarity : std::uint8_t { Plus, Minus, Both };

std::string_view to_string(Polarity p);

struct PolarityOccurrence {
  Name name;
  Polarity polarity;
  Kind atom;
  std::size_t position;
};

struct PolarityReport {
  std::vector<PolarityOccurrence> occurrences;  // in traversal order
  // per-name polarity multiset, keyed by canonical name digest
  struct Entry {
    Name name;
    std::vector<Polarity> polarities;
  };
  std::vector<Entry> names;
  bool consistent = true;
  std::string diagnostic;

  const Entry* lookup(Calculus c, const Name& n) const;
};

/// Fixed polarity of argument `position` of combinator `k`.
Polarity signature_polarity(Kind k, std::size_t position);

/// Polarities of every name occurrence in combinator atoms of a Yoshida or
/// RHO-combinator term. Message payload processes are data and are not
/// entered.
PolarityReport check_polarities(Calculus c, const Term& t);

}  // namespace rhocomb

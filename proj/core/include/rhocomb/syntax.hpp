#pragma once

// ASCII concrete syntax shared by the four calculi; docs/grammar.ebnf has
// the full grammar.
//
//   0   P | Q   (P)   (new x y)P   *P (replication, π and Yoshida)
//   for(y <- x)P   x!(v)   @(P) / @0   *(x) or *x (drop, ρ and RHO combinators)
//   m(a,b)  d(a,b,c)  k(a)  fw(a,b)  bl(a,b)  br(a,b)  s(a,b,c)
//
// In ρ, `x!(y)` with a bare name payload abbreviates x!(*y); likewise a bare
// name as the payload of a RHO-combinator message abbreviates m(a,*y).

#include <string>
#include <string_view>

#include "rhocomb/term.hpp"

namespace rhocomb {

/// Throws ParseError (with 1-based line/column) on malformed text and
/// SemanticError when the term falls outside the calculus's grammar.
Term parse(Calculus c, std::string_view text);
Name parse_name(Calculus c, std::string_view text);

struct PrintOptions {
  // Quotes nested deeper than this print as @{digest}; -1 prints everything.
  int quote_depth = -1;
};

std::string print(const Term& t, const PrintOptions& opts = {});
std::string print(const Name& n, const PrintOptions& opts = {});

}  // namespace rhocomb

#pragma once

// Free names, substitution, alpha-equivalence, name equivalence and the
// decidable fragment of structural congruence for all four calculi.
//
// Structural congruence is decided by comparing canonical forms. The
// canonical form of a process
//   * flattens parallel composition and drops 0 units,
//   * rewrites *(@P) to P (ρ and RHO combinators),
//   * rewrites the name @(*x) to x (ρ only, Quote-drop),
//   * pulls every restriction to the smallest connected group of components
//     that mentions it (π and Yoshida scope laws),
//   * names each binder after its nesting level ("#0", "#1", ...),
//   * sorts components by (constructor, digest).
// The recursion law *P = P|*P is deliberately left to reduction.

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rhocomb/term.hpp"

namespace rhocomb {

struct CanonicalForm {
  Calculus calculus;
  Term term;
  Digest digest;
};

CanonicalForm canonicalize(Calculus c, const Term& t);
bool struct_congruent(Calculus c, const Term& a, const Term& b);

/// Name in canonical spelling: quoted processes canonicalized, plus
/// Quote-drop for ρ (and π, whose names are ρ names).
Name canonical_name(Calculus c, const Name& n);
bool name_equiv(Calculus c, const Name& a, const Name& b);

/// Free names per the calculus's recursive table. Quoted names count as
/// single names; duplicates under name equivalence are collapsed. Sorted by
/// canonical digest.
std::vector<Name> free_names(Calculus c, const Term& t);
bool occurs_free(Calculus c, const Name& x, const Term& t);

/// Every name occurring anywhere in `t`, binders and names nested inside
/// quotes included; structurally deduplicated.
std::vector<Name> names_in(const Term& t);

using SubstValue = std::variant<Name, Term>;

struct SubstEntry {
  Name key;
  SubstValue value;
};

/// Capture-avoiding simultaneous substitution. Bound names that would capture
/// a substituted name are renamed by priming (b -> b'). Substitution reaches
/// into quoted names. A process value is rejected with SemanticError: every
/// position a key can occupy is a name position.
Term substitute(Calculus c, const Term& t, std::span<const SubstEntry> subst);
Term substitute(Calculus c, const Term& t, const Name& key, const Name& value);

/// Equality up to consistent renaming of bound names. For RHO combinators,
/// which have no binders, this is syntactic identity.
bool alpha_equiv(Calculus c, const Term& a, const Term& b);

/// Replaces free occurrences of atom `from` with atom `to`, reaching into
/// quotes. The caller guarantees `to` is not bound anywhere in `t`.
Term rename_free_atom(const Term& t, const std::string& from, const std::string& to);

/// Identifier reserved for level-named binders in canonical forms.
bool is_level_binder(std::string_view id);
/// A process-unique atom that can never be produced by the parser.
std::string fresh_internal_atom();

}  // namespace rhocomb

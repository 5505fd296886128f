#pragma once

// Translations between the calculi:
//   pi_to_yoshida      input-prefix elimination into Yoshida's combinators
//   yoshida_to_rhocomb new/replication elimination by reflection
//   pi_to_rho          restriction as allocation over a memory channel
//   pi_to_rhocomb      pi_to_yoshida then yoshida_to_rhocomb

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhocomb/reduction.hpp"
#include "rhocomb/term.hpp"

namespace rhocomb {

struct AllocatorPair {
  Name n;  // memory shape
  Name p;  // access channel
};

struct FreshnessEntry {
  std::string rule;  // "I", "V", "X", ... or "repl" / "new"
  Name name;
  Term fresh_for;    // the subterm the name must not occur free in
};

using FreshnessLedger = std::vector<FreshnessEntry>;

/// x^l and x^r for a target calculus (Rho or RhoComb).
Name left_name(Calculus target, const Name& x);
Name right_name(Calculus target, const Name& x);
/// Applies the constructors along `path` ("l", "r", "ll", "lr", ...) left to right.
Name derive_name(Calculus target, const Name& x, std::string_view path);

/// D(x,v,w) = d(x,v,w) | fw(v,x) | *(w)
Term replicator(const Name& x, const Name& v, const Name& w);
/// m(x, D(x,v,w) | P) | D(x,v,w)
Term replicate(const Term& p, const Name& x, const Name& v, const Name& w);
struct ReplicationReplay {
  Term start;        // *_(x,v,w) P
  Term expected;     // *_(x,v,w) P | P
  Trace trace;       // three deterministic steps from `start`
  bool matches = false;  // final state is canonically equal to `expected`
};

/// Replays the unfolding of *_(x,v,w) P: d, then fw, then drop.
ReplicationReplay replay_replication(const Term& p, const Name& x, const Name& v, const Name& w);

/// ρ fixed point D(x) = for(y <- x)(x!(*y) | *y)
Term rho_replicator(const Name& x);

/// Atom-to-quote injection used when composing: a |-> @(k(a)).
Name inject_atom(const Name& a);

AllocatorPair default_rhocomb_allocator(const Term& rhocomb_or_yoshida, Calculus c);
AllocatorPair default_rho_allocator(const Term& pi_term);

Term pi_to_yoshida(const Term& pi);

/// ⟦p(x).body⟧₄(n,q). `body` is a RHO-combinator term; `x` is the bound name.
Term prefix_eliminate(const Name& p, const Name& x, const Term& body, const Name& n, const Name& q,
                      FreshnessLedger* ledger = nullptr);

/// ⟦*P⟧₂(n,p) for a Yoshida body P.
Term replication_package(const Term& yoshida_body, const Name& n, const Name& p, FreshnessLedger* ledger = nullptr);

/// ⟦t⟧₂(n,p). With no allocator the default for FN(t) is used. Throws
/// SemanticError when the allocator collides with FN(t), or when a bound
/// name occurs where no prefix-elimination rule reaches it.
Term yoshida_to_rhocomb(const Term& yoshida, const std::optional<AllocatorPair>& alloc = std::nullopt,
                        FreshnessLedger* ledger = nullptr);

Term pi_to_rho(const Term& pi, const std::optional<AllocatorPair>& alloc = std::nullopt);

/// Free atoms of the Yoshida image are injected with inject_atom before the
/// second stage.
Term pi_to_rhocomb(const Term& pi, FreshnessLedger* ledger = nullptr);

}  // namespace rhocomb

#pragma once

// Term representation shared by the four calculi.
//
// A single immutable node type covers every constructor; which
// constructors are legal is decided per calculus by check_well_formed().
// Nodes are reference counted and never mutated after construction, so
// subterms are freely shared between terms and across threads.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rhocomb {

enum class Calculus : std::uint8_t { Pi, Yoshida, Rho, RhoComb };

std::string_view to_string(Calculus c);
std::optional<Calculus> parse_calculus(std::string_view text);

/// Calculus whose processes appear inside quoted names of `c`.
/// π names quote ρ processes; Yoshida names quote RHO-combinator processes.
Calculus quoted_calculus(Calculus c);

// The enumerator order is the primary key of the total term order used to
// sort parallel components.
enum class Kind : std::uint8_t {
  Zero,
  Msg,    // m(a, b) with a name payload, or m(a, P) with a process payload
  Dup,    // d(a, b, c)
  Kill,   // k(a)
  Fwd,    // fw(a, b)
  BindR,  // br(a, b)
  BindL,  // bl(a, b)
  Sync,   // s(a, b, c)
  Drop,   // *(x)
  Output, // x!(y)
  Lift,   // x!(P)
  Input,  // for(y <- x)P
  New,    // (new x)P
  Repl,   // *P
  Par,
};

std::string_view to_string(Kind k);
bool is_combinator(Kind k);
/// Number of name arguments a combinator atom takes (m counts its channel only).
std::size_t combinator_arity(Kind k);

using Digest = std::uint64_t;

std::string digest_hex(Digest d);
Digest mix_digest(Digest seed, Digest value);
Digest hash_bytes(std::string_view bytes);

class Node;
using Term = std::shared_ptr<const Node>;

class Name {
 public:
  static Name atom(std::string id);
  static Name quote(Term process);

  bool is_atom() const { return !quoted_; }
  bool is_quote() const { return static_cast<bool>(quoted_); }
  const std::string& id() const { return id_; }
  const Term& process() const { return quoted_; }

  /// Structural digest; equal digests mean syntactically identical names.
  Digest digest() const { return digest_; }

  friend bool operator==(const Name& a, const Name& b) { return a.digest_ == b.digest_; }

 private:
  Name() = default;
  std::string id_;
  Term quoted_;
  Digest digest_ = 0;
};

Name atom(std::string id);
Name quote(Term process);

struct CanonCacheEntry {
  Calculus calculus;
  int depth;  // -1 when the cached node has no binders
  Term result;
};

class Node {
 public:
  Kind kind() const { return kind_; }
  std::span<const Name> names() const { return names_; }
  std::span<const Term> children() const { return children_; }
  const Name& name(std::size_t i) const { return names_.at(i); }
  const Term& child(std::size_t i) const { return children_.at(i); }

  Digest digest() const { return digest_; }
  /// Tree size with quotes expanded; saturates, since encodings share subterms heavily.
  std::size_t size() const { return size_; }
  bool has_binders() const { return has_binders_; }
  /// Bit (1 << Kind) is set for every kind occurring below this node, quotes included.
  std::uint32_t kinds() const { return kinds_; }
  /// Every atom id occurring anywhere below this node, quotes included; sorted.
  const std::vector<std::string>& atoms() const { return *atoms_; }
  bool mentions_atom(std::string_view id) const;
  /// Atoms with an occurrence not bound by an enclosing New or Input; sorted.
  const std::vector<std::string>& free_atoms() const { return *free_atoms_; }
  bool has_free_atom(std::string_view id) const;

  // Memo slot for canonicalize(); results are pure functions of the node,
  // so the cache is invisible to callers.
  std::optional<Term> cached_canon(Calculus c, int depth) const;
  void store_canon(Calculus c, int depth, Term t) const;
  // Binder-free canonical results are marked instead of caching themselves.
  bool known_canonical(Calculus c) const;
  void mark_canonical(Calculus c) const;

  Node(Kind k, std::vector<Name> names, std::vector<Term> children);
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

 private:
  Kind kind_;
  std::vector<Name> names_;
  std::vector<Term> children_;
  Digest digest_ = 0;
  std::size_t size_ = 1;
  bool has_binders_ = false;
  std::uint32_t kinds_ = 0;
  // Shared between nodes with equal sets.
  std::shared_ptr<const std::vector<std::string>> atoms_;
  std::shared_ptr<const std::vector<std::string>> free_atoms_;

  mutable std::mutex cache_mu_;
  mutable std::vector<CanonCacheEntry> cache_;
  mutable std::atomic<std::uint8_t> canonical_mask_{0};
};

// Constructors. Layout of names()/children() per kind:
//   Msg      names [a, payload] (name payload) or names [a], children [P]
//   Dup/Sync names [a, b, c]; Kill [a]; Fwd/BindR/BindL [a, b]
//   Drop     names [x]
//   Output   names [channel, payload]
//   Lift     names [channel], children [P]
//   Input    names [binder, channel], children [body]
//   New      names [binder], children [body]
//   Repl     children [body]
//   Par      children [P1, ..., Pn], n >= 2
Term zero();
Term par(std::vector<Term> parts);  // 0 parts -> 0, 1 part -> that part
Term par(Term a, Term b);
Term nu(Name binder, Term body);
Term repl(Term body);
Term input(Name binder, Name channel, Term body);
Term output(Name channel, Name payload);
Term lift(Name channel, Term payload);
Term drop(Name x);
Term msg(Name channel, Name payload);
Term msg(Name channel, Term payload);
Term dup(Name a, Name b, Name c);
Term kill(Name a);
Term fwd(Name a, Name b);
Term bind_r(Name a, Name b);
Term bind_l(Name a, Name b);
Term sync(Name a, Name b, Name c);
/// Generic combinator constructor over name arguments (not for process-payload m).
Term combinator(Kind k, std::vector<Name> args);

/// Builds a node of kind `k` with the given layout (see above).
Term make_node(Kind k, std::vector<Name> names, std::vector<Term> children);

bool msg_has_process_payload(const Node& n);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Violations of a grammar, precondition or translation side condition.
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// Throws SemanticError when `t` uses a constructor outside `c`'s grammar.
void check_well_formed(Calculus c, const Term& t);

/// True when a `k` node occurs anywhere in `t`, inside quoted names included.
bool contains_kind(const Term& t, Kind k);

}  // namespace rhocomb

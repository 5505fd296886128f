#include "rhocomb/term.hpp"

#include <algorithm>
#include <limits>
#include <cstdio>
#include <iterator>
#include <unordered_set>
#include <utility>

namespace rhocomb {

std::string_view to_string(Calculus c) {
  switch (c) {
    case Calculus::Pi: return "pi";
    case Calculus::Yoshida: return "yoshida";
    case Calculus::Rho: return "rho";
    case Calculus::RhoComb: return "rhocomb";
  }
  return "?";
}

std::optional<Calculus> parse_calculus(std::string_view text) {
  if (text == "pi") return Calculus::Pi;
  if (text == "yoshida") return Calculus::Yoshida;
  if (text == "rho") return Calculus::Rho;
  if (text == "rhocomb") return Calculus::RhoComb;
  return std::nullopt;
}

Calculus quoted_calculus(Calculus c) {
  switch (c) {
    case Calculus::Pi:
    case Calculus::Rho: return Calculus::Rho;
    case Calculus::Yoshida:
    case Calculus::RhoComb: return Calculus::RhoComb;
  }
  return c;
}

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::Zero: return "0";
    case Kind::Msg: return "m";
    case Kind::Dup: return "d";
    case Kind::Kill: return "k";
    case Kind::Fwd: return "fw";
    case Kind::BindR: return "br";
    case Kind::BindL: return "bl";
    case Kind::Sync: return "s";
    case Kind::Drop: return "drop";
    case Kind::Output: return "output";
    case Kind::Lift: return "lift";
    case Kind::Input: return "for";
    case Kind::New: return "new";
    case Kind::Repl: return "repl";
    case Kind::Par: return "par";
  }
  return "?";
}

bool is_combinator(Kind k) {
  switch (k) {
    case Kind::Msg:
    case Kind::Dup:
    case Kind::Kill:
    case Kind::Fwd:
    case Kind::BindR:
    case Kind::BindL:
    case Kind::Sync: return true;
    default: return false;
  }
}

std::size_t combinator_arity(Kind k) {
  switch (k) {
    case Kind::Kill:
    case Kind::Drop: return 1;
    case Kind::Msg:
    case Kind::Fwd:
    case Kind::BindR:
    case Kind::BindL: return 2;
    case Kind::Dup:
    case Kind::Sync: return 3;
    default: return 0;
  }
}

std::string digest_hex(Digest d) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
  return buf;
}

Digest mix_digest(Digest seed, Digest value) {
  // splitmix64 finalizer over the combined word
  Digest z = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Digest hash_bytes(std::string_view bytes) {
  Digest h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return mix_digest(h, bytes.size());
}

namespace {
constexpr Digest kAtomTag = 0xa7a7a7a7a7a7a7a7ULL;
constexpr Digest kQuoteTag = 0x5151515151515151ULL;
}  // namespace

Name Name::atom(std::string id) {
  Name n;
  n.digest_ = mix_digest(kAtomTag, hash_bytes(id));
  n.id_ = std::move(id);
  return n;
}

Name Name::quote(Term process) {
  if (!process) throw SemanticError("cannot quote a null process");
  Name n;
  n.digest_ = mix_digest(kQuoteTag, process->digest());
  n.quoted_ = std::move(process);
  return n;
}

Name atom(std::string id) { return Name::atom(std::move(id)); }
Name quote(Term process) { return Name::quote(std::move(process)); }

namespace {

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max() : a + b;
}

}  // namespace

namespace {

using AtomSet = std::shared_ptr<const std::vector<std::string>>;

const AtomSet& empty_atoms() {
  static const AtomSet empty = std::make_shared<const std::vector<std::string>>();
  return empty;
}

// Sorted union of sorted sets. Sets are shared between nodes, so identical
// inputs are skipped by pointer and a union equal to one input reuses it.
AtomSet union_of(std::vector<AtomSet> sets) {
  std::erase_if(sets, [](const AtomSet& s) { return s->empty(); });
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  if (sets.empty()) return empty_atoms();
  if (sets.size() == 1) return sets[0];
  std::vector<std::string> out;
  if (sets.size() <= 8) {
    for (const auto& l : sets) {
      std::vector<std::string> merged;
      merged.reserve(out.size() + l->size());
      std::set_union(out.begin(), out.end(), l->begin(), l->end(), std::back_inserter(merged));
      out = std::move(merged);
    }
  } else {
    std::unordered_set<std::string_view> seen;
    std::vector<std::string_view> uniq;
    for (const auto& l : sets)
      for (const auto& a : *l)
        if (seen.insert(a).second) uniq.push_back(a);
    std::sort(uniq.begin(), uniq.end());
    out.assign(uniq.begin(), uniq.end());
  }
  for (const auto& l : sets)
    if (l->size() == out.size()) return l;
  return std::make_shared<const std::vector<std::string>>(std::move(out));
}

AtomSet sorted_set(std::vector<std::string> v) {
  if (v.empty()) return empty_atoms();
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return std::make_shared<const std::vector<std::string>>(std::move(v));
}

}  // namespace

Node::Node(Kind k, std::vector<Name> names, std::vector<Term> children)
    : kind_(k), names_(std::move(names)), children_(std::move(children)) {
  Digest h = mix_digest(0x1234567u, static_cast<Digest>(kind_));
  kinds_ = 1u << static_cast<unsigned>(kind_);
  has_binders_ = kind_ == Kind::New || kind_ == Kind::Input;
  // names_[0] of New and of an Input with an atomic binder binds in the children
  const bool binds = (kind_ == Kind::New || kind_ == Kind::Input) && !names_.empty() && names_[0].is_atom();
  std::vector<std::string> own, own_free;
  std::vector<AtomSet> all, free_here, free_below;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const Name& n = names_[i];
    h = mix_digest(h, n.digest());
    if (n.is_atom()) {
      own.push_back(n.id());
      if (!(binds && i == 0)) own_free.push_back(n.id());
    } else {
      const Node& q = *n.process();
      size_ = saturating_add(size_, q.size());
      kinds_ |= q.kinds();
      has_binders_ = has_binders_ || q.has_binders();
      all.push_back(q.atoms_);
      free_here.push_back(q.free_atoms_);
    }
  }
  all.push_back(sorted_set(std::move(own)));
  free_here.push_back(sorted_set(std::move(own_free)));
  h = mix_digest(h, 0xffu);
  for (const auto& c : children_) {
    if (!c) throw SemanticError("null subterm");
    h = mix_digest(h, c->digest());
    size_ = saturating_add(size_, c->size());
    kinds_ |= c->kinds();
    has_binders_ = has_binders_ || c->has_binders();
    all.push_back(c->atoms_);
    free_below.push_back(c->free_atoms_);
  }
  atoms_ = union_of(std::move(all));
  AtomSet below = union_of(std::move(free_below));
  if (binds && std::binary_search(below->begin(), below->end(), names_[0].id())) {
    std::vector<std::string> trimmed = *below;
    std::erase(trimmed, names_[0].id());
    below = sorted_set(std::move(trimmed));
  }
  free_here.push_back(std::move(below));
  free_atoms_ = union_of(std::move(free_here));
  digest_ = h;
}

bool Node::has_free_atom(std::string_view id) const {
  return std::binary_search(free_atoms_->begin(), free_atoms_->end(), id,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

bool Node::mentions_atom(std::string_view id) const {
  return std::binary_search(atoms_->begin(), atoms_->end(), id,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

std::optional<Term> Node::cached_canon(Calculus c, int depth) const {
  std::lock_guard lock(cache_mu_);
  for (const auto& e : cache_)
    if (e.calculus == c && e.depth == depth) return e.result;
  return std::nullopt;
}

bool Node::known_canonical(Calculus c) const {
  return canonical_mask_.load(std::memory_order_acquire) & (1u << static_cast<unsigned>(c));
}

void Node::mark_canonical(Calculus c) const {
  canonical_mask_.fetch_or(static_cast<std::uint8_t>(1u << static_cast<unsigned>(c)), std::memory_order_acq_rel);
}

void Node::store_canon(Calculus c, int depth, Term t) const {
  std::lock_guard lock(cache_mu_);
  for (const auto& e : cache_)
    if (e.calculus == c && e.depth == depth) return;
  cache_.push_back({c, depth, std::move(t)});
}

namespace {
Term make(Kind k, std::vector<Name> names, std::vector<Term> children = {}) {
  return std::make_shared<const Node>(k, std::move(names), std::move(children));
}
}  // namespace

Term zero() {
  static const Term z = make(Kind::Zero, {});
  return z;
}

Term par(std::vector<Term> parts) {
  if (parts.empty()) return zero();
  if (parts.size() == 1) return std::move(parts.front());
  return make(Kind::Par, {}, std::move(parts));
}

Term par(Term a, Term b) { return par(std::vector<Term>{std::move(a), std::move(b)}); }

Term nu(Name binder, Term body) {
  if (!binder.is_atom()) throw SemanticError("restriction binder must be an atomic name");
  return make(Kind::New, {std::move(binder)}, {std::move(body)});
}

Term repl(Term body) { return make(Kind::Repl, {}, {std::move(body)}); }

Term input(Name binder, Name channel, Term body) {
  return make(Kind::Input, {std::move(binder), std::move(channel)}, {std::move(body)});
}

Term output(Name channel, Name payload) { return make(Kind::Output, {std::move(channel), std::move(payload)}); }
Term lift(Name channel, Term payload) { return make(Kind::Lift, {std::move(channel)}, {std::move(payload)}); }
Term drop(Name x) { return make(Kind::Drop, {std::move(x)}); }
Term msg(Name channel, Name payload) { return make(Kind::Msg, {std::move(channel), std::move(payload)}); }
Term msg(Name channel, Term payload) { return make(Kind::Msg, {std::move(channel)}, {std::move(payload)}); }
Term dup(Name a, Name b, Name c) { return make(Kind::Dup, {std::move(a), std::move(b), std::move(c)}); }
Term kill(Name a) { return make(Kind::Kill, {std::move(a)}); }
Term fwd(Name a, Name b) { return make(Kind::Fwd, {std::move(a), std::move(b)}); }
Term bind_r(Name a, Name b) { return make(Kind::BindR, {std::move(a), std::move(b)}); }
Term bind_l(Name a, Name b) { return make(Kind::BindL, {std::move(a), std::move(b)}); }
Term sync(Name a, Name b, Name c) { return make(Kind::Sync, {std::move(a), std::move(b), std::move(c)}); }

Term combinator(Kind k, std::vector<Name> args) {
  if (k == Kind::Drop) {
    if (args.size() != 1) throw SemanticError("drop takes one name");
    return drop(std::move(args[0]));
  }
  if (!is_combinator(k)) throw SemanticError("not a combinator: " + std::string(to_string(k)));
  if (args.size() != combinator_arity(k))
    throw SemanticError("combinator " + std::string(to_string(k)) + " expects " +
                        std::to_string(combinator_arity(k)) + " names, got " + std::to_string(args.size()));
  return make(k, std::move(args));
}

Term make_node(Kind k, std::vector<Name> names, std::vector<Term> children) {
  if (k == Kind::Par) return par(std::move(children));
  if (k == Kind::New) return nu(std::move(names.at(0)), std::move(children.at(0)));
  return make(k, std::move(names), std::move(children));
}

bool msg_has_process_payload(const Node& n) { return n.kind() == Kind::Msg && n.children().size() == 1; }

namespace {

struct VisitHash {
  std::size_t operator()(const std::pair<Calculus, const Node*>& k) const {
    return std::hash<const Node*>{}(k.second) ^ static_cast<std::size_t>(k.first);
  }
};

// Generated terms share subterms heavily; each (calculus, node) is checked once.
using Visited = std::unordered_set<std::pair<Calculus, const Node*>, VisitHash>;

void check_name(Calculus c, const Name& n, Visited& seen);

void check(Calculus c, const Term& t, Visited& seen) {
  if (!seen.insert({c, t.get()}).second) return;
  const Node& n = *t;
  auto fail = [&](const std::string& why) {
    throw SemanticError(std::string(to_string(n.kind())) + " is not allowed in " + std::string(to_string(c)) +
                        ": " + why);
  };
  switch (n.kind()) {
    case Kind::Zero: break;
    case Kind::Par:
      if (n.children().size() < 2) fail("parallel composition needs two components");
      break;
    case Kind::New:
    case Kind::Repl:
      if (c != Calculus::Pi && c != Calculus::Yoshida) fail("no restriction or replication here");
      break;
    case Kind::Input:
      if (c != Calculus::Pi && c != Calculus::Rho) fail("no input prefix here");
      if (c == Calculus::Pi && !n.name(0).is_atom()) fail("input binder must be atomic");
      break;
    case Kind::Output:
      if (c != Calculus::Pi) fail("name-payload output belongs to pi");
      break;
    case Kind::Lift:
      if (c != Calculus::Rho) fail("process-payload output belongs to rho");
      break;
    case Kind::Drop:
      if (c != Calculus::Rho && c != Calculus::RhoComb) fail("drop belongs to rho and rhocomb");
      break;
    case Kind::Msg:
      if (c == Calculus::Yoshida && msg_has_process_payload(n)) fail("Yoshida messages carry names");
      if (c == Calculus::RhoComb && !msg_has_process_payload(n)) fail("RHO-combinator messages carry processes");
      [[fallthrough]];
    default:
      if (is_combinator(n.kind()) && c != Calculus::Yoshida && c != Calculus::RhoComb)
        fail("combinator atoms belong to yoshida and rhocomb");
      break;
  }
  for (const auto& nm : n.names()) check_name(c, nm, seen);
  for (const auto& ch : n.children()) check(c, ch, seen);
}

void check_name(Calculus c, const Name& n, Visited& seen) {
  if (n.is_atom()) {
    if (n.id().empty()) throw SemanticError("empty atom name");
    return;
  }
  check(quoted_calculus(c), n.process(), seen);
}

}  // namespace

void check_well_formed(Calculus c, const Term& t) {
  Visited seen;
  check(c, t, seen);
}

bool contains_kind(const Term& t, Kind k) { return (t->kinds() >> static_cast<unsigned>(k)) & 1u; }

}  // namespace rhocomb

#include "rhocomb/congruence.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace rhocomb {

namespace {

using Env = std::map<std::string, int, std::less<>>;

std::string level_id(int level) { return "#" + std::to_string(level); }

bool drops_quotes(Calculus c) { return c == Calculus::Rho || c == Calculus::Pi; }

bool env_touches(const Env& env, const Node& n) {
  if (env.empty()) return false;
  const auto& as = n.atoms();
  if (env.size() < as.size()) {
    for (const auto& [k, _] : env)
      if (n.mentions_atom(k)) return true;
    return false;
  }
  for (const auto& a : as)
    if (env.count(a)) return true;
  return false;
}

bool component_less(const Term& a, const Term& b) {
  if (a->kind() != b->kind()) return a->kind() < b->kind();
  return a->digest() < b->digest();
}

Term proc(const Term& t, Calculus c, const Env& env, int depth);

Name canon_name(const Name& n, Calculus c, const Env& env, int depth) {
  if (n.is_atom()) {
    auto it = env.find(n.id());
    return it == env.end() ? n : atom(level_id(it->second));
  }
  Term q = proc(n.process(), quoted_calculus(c), env, depth);
  if (drops_quotes(c) && q->kind() == Kind::Drop) return q->name(0);
  return quote(std::move(q));
}

void open(const Term& t, std::vector<std::string>& binders, std::vector<Term>& parts) {
  switch (t->kind()) {
    case Kind::Zero: return;
    case Kind::Par:
      for (const auto& ch : t->children()) open(ch, binders, parts);
      return;
    case Kind::New: {
      std::string fresh = fresh_internal_atom();
      Term body = rename_free_atom(t->child(0), t->name(0).id(), fresh);
      binders.push_back(std::move(fresh));
      open(body, binders, parts);
      return;
    }
    case Kind::Drop:
      if (t->name(0).is_quote()) {
        open(t->name(0).process(), binders, parts);
        return;
      }
      break;
    default: break;
  }
  parts.push_back(t);
}

// Canonical form of a part that open() left alone.
Term atomic(const Term& t, Calculus c, const Env& env, int depth) {
  const Node& n = *t;
  if (!n.has_binders() && n.known_canonical(c) && !env_touches(env, n)) return t;
  auto nm = [&](std::size_t i) { return canon_name(n.name(i), c, env, depth); };
  switch (n.kind()) {
    case Kind::Input: {
      Term body = n.child(0);
      std::string bound;
      if (n.name(0).is_atom()) {
        bound = n.name(0).id();
      } else {
        bound = fresh_internal_atom();
        body = substitute(c, body, n.name(0), atom(bound));
      }
      Env inner = env;
      inner[bound] = depth;
      return input(atom(level_id(depth)), nm(1), proc(body, c, inner, depth + 1));
    }
    case Kind::Repl: return repl(proc(n.child(0), c, env, depth));
    case Kind::Lift: return lift(nm(0), proc(n.child(0), c, env, depth));
    case Kind::Msg:
      if (msg_has_process_payload(n)) return msg(nm(0), proc(n.child(0), c, env, depth));
      return msg(nm(0), nm(1));
    default: {
      std::vector<Name> names;
      names.reserve(n.names().size());
      for (std::size_t i = 0; i < n.names().size(); ++i) names.push_back(nm(i));
      return make_node(n.kind(), std::move(names), {});
    }
  }
}

Term close_group(const std::vector<std::string>& bs, const std::vector<std::size_t>& order,
                 const std::vector<Term>& parts, Calculus c, const Env& env, int depth) {
  const int k = static_cast<int>(bs.size());
  Env e = env;
  for (int i = 0; i < k; ++i) e[bs[order[i]]] = depth + i;
  std::vector<Term> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(atomic(p, c, e, depth + k));
  std::sort(out.begin(), out.end(), component_less);
  Term body = par(std::move(out));
  for (int i = k - 1; i >= 0; --i) body = nu(atom(level_id(depth + i)), body);
  return body;
}

// Restricted group: binders bs, all connected through parts. Binder order is
// fixed by a renaming-invariant signature; ties are broken by trying every
// order within a tie class and keeping the least digest.
Term canon_group(const std::vector<std::string>& bs, const std::vector<Term>& parts, Calculus c, const Env& env,
                 int depth) {
  const int k = static_cast<int>(bs.size());
  std::vector<std::vector<Digest>> sig(k);
  if (k > 1) {
    for (int i = 0; i < k; ++i) {
      Env e = env;
      for (const auto& b : bs) e[b] = depth + k;
      e[bs[i]] = depth + k + 1;
      for (const auto& p : parts)
        if (p->mentions_atom(bs[i])) sig[i].push_back(atomic(p, c, e, depth + k + 2)->digest());
      std::sort(sig[i].begin(), sig[i].end());
    }
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });

  std::vector<std::pair<std::size_t, std::size_t>> classes;  // [begin, end) in order
  std::size_t combos = 1;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && sig[order[j]] == sig[order[i]]) ++j;
    if (j - i > 1) {
      classes.emplace_back(i, j);
      for (std::size_t f = 2; f <= j - i && combos <= 720; ++f) combos *= f;
    }
    i = j;
  }
  if (classes.empty() || combos > 720) return close_group(bs, order, parts, c, env, depth);

  for (auto [b, e] : classes) std::sort(order.begin() + b, order.begin() + e);
  Term best;
  while (true) {
    Term cand = close_group(bs, order, parts, c, env, depth);
    if (!best || cand->digest() < best->digest()) best = cand;
    // odometer over the tie classes
    std::size_t ci = 0;
    for (; ci < classes.size(); ++ci) {
      auto [b, e] = classes[ci];
      if (std::next_permutation(order.begin() + b, order.begin() + e)) break;
    }
    if (ci == classes.size()) break;
  }
  return best;
}

std::size_t find_root(std::vector<std::size_t>& uf, std::size_t x) {
  while (uf[x] != x) x = uf[x] = uf[uf[x]];
  return x;
}

Term proc(const Term& t, Calculus c, const Env& env, int depth) {
  const bool clean = !env_touches(env, *t);
  const int key = t->has_binders() ? depth : -1;
  if (clean) {
    if (key == -1 && t->known_canonical(c)) return t;
    if (auto hit = t->cached_canon(c, key)) return *hit;
  }

  std::vector<std::string> binders;
  std::vector<Term> parts;
  open(t, binders, parts);

  std::vector<Term> out;
  if (binders.empty()) {
    for (const auto& p : parts) out.push_back(atomic(p, c, env, depth));
  } else {
    // union-find over binders + parts: node i < B is binder i, B + j is part j
    const std::size_t B = binders.size();
    std::vector<std::size_t> uf(B + parts.size());
    std::iota(uf.begin(), uf.end(), 0);
    std::vector<bool> used(B, false);
    for (std::size_t j = 0; j < parts.size(); ++j)
      for (std::size_t i = 0; i < B; ++i)
        if (parts[j]->mentions_atom(binders[i])) {
          used[i] = true;
          uf[find_root(uf, B + j)] = find_root(uf, i);
        }
    std::map<std::size_t, std::pair<std::vector<std::string>, std::vector<Term>>> groups;
    for (std::size_t i = 0; i < B; ++i)
      if (used[i]) groups[find_root(uf, i)].first.push_back(binders[i]);
    for (std::size_t j = 0; j < parts.size(); ++j) {
      std::size_t r = find_root(uf, B + j);
      if (r == B + j) {
        out.push_back(atomic(parts[j], c, env, depth));
      } else {
        groups[r].second.push_back(parts[j]);
      }
    }
    for (const auto& [_, g] : groups) out.push_back(canon_group(g.first, g.second, c, env, depth));
  }
  std::sort(out.begin(), out.end(), component_less);
  if (clean)
    for (const auto& part : out)
      if (!part->has_binders()) part->mark_canonical(c);
  Term result = par(std::move(out));
  if (clean) {
    if (key == -1) result->mark_canonical(c);
    if (result.get() != t.get()) t->store_canon(c, key, result);
  }
  return result;
}

// ---------------------------------------------------------------------------

void add_unique(std::vector<Name>& into, std::unordered_set<Digest>& seen, const Name& n) {
  if (seen.insert(n.digest()).second) into.push_back(n);
}

void collect_fn(Calculus c, const Term& t, std::vector<Name>& out, std::unordered_set<Digest>& seen) {
  const Node& n = *t;
  auto bound = [&](const Name& binder, const Term& body) {
    std::vector<Name> inner;
    std::unordered_set<Digest> inner_seen;
    collect_fn(c, body, inner, inner_seen);
    const Digest b = canonical_name(c, binder).digest();
    for (const auto& x : inner)
      if (x.digest() != b) add_unique(out, seen, x);
  };
  switch (n.kind()) {
    case Kind::Zero: return;
    case Kind::New: bound(n.name(0), n.child(0)); return;
    case Kind::Input:
      add_unique(out, seen, canonical_name(c, n.name(1)));
      bound(n.name(0), n.child(0));
      return;
    case Kind::Drop:
      // *(@P) ≡ P, so the drop contributes P's free names
      if (n.name(0).is_quote() && (c == Calculus::Rho || c == Calculus::RhoComb)) {
        collect_fn(c, n.name(0).process(), out, seen);
        return;
      }
      [[fallthrough]];
    default:
      for (const auto& nm : n.names()) add_unique(out, seen, canonical_name(c, nm));
      for (const auto& ch : n.children()) collect_fn(c, ch, out, seen);
      return;
  }
}

void collect_names(const Term& t, std::vector<Name>& out, std::unordered_set<Digest>& seen) {
  for (const auto& nm : t->names()) {
    add_unique(out, seen, nm);
    if (nm.is_quote()) collect_names(nm.process(), out, seen);
  }
  for (const auto& ch : t->children()) collect_names(ch, out, seen);
}

std::string prime_until_fresh(std::string b, const std::vector<std::string>& avoid_sorted, const Node& body) {
  do {
    b += '\'';
  } while (body.mentions_atom(b) || std::binary_search(avoid_sorted.begin(), avoid_sorted.end(), b));
  return b;
}

struct Subst {
  Calculus calc;
  std::vector<std::pair<Digest, Name>> entries;  // canonical key digest -> value
  std::vector<std::string> value_atoms;          // sorted, atoms of values and keys
  // Terms are DAGs with heavy sharing inside quotes; results are memoized
  // per node for this substitution.
  mutable std::unordered_map<const Node*, Term> memo;
  mutable std::unique_ptr<Subst> quoted;
  // When every key is an atom, subterms without a free occurrence of one
  // are left alone.
  std::optional<std::vector<std::string>> key_atoms;

  bool untouched(const Node& n) const {
    if (!key_atoms) return false;
    return std::none_of(key_atoms->begin(), key_atoms->end(), [&](const auto& k) { return n.has_free_atom(k); });
  }
};

Term subst(const Term& t, const Subst& s);

Name subst_name(const Name& n, const Subst& s) {
  const Digest d = canonical_name(s.calc, n).digest();
  for (const auto& [k, v] : s.entries)
    if (k == d) return v;
  if (n.is_atom() || s.untouched(*n.process())) return n;
  if (!s.quoted) {
    // quote-drop agrees between c and its quoted calculus
    s.quoted = std::make_unique<Subst>(Subst{quoted_calculus(s.calc), s.entries, s.value_atoms, {}, {}, s.key_atoms});
  }
  return quote(subst(n.process(), *s.quoted));
}

Term subst_binder(const Term& t, const Subst& s) {
  const Node& n = *t;
  const Name& b = n.name(0);
  const Digest bd = canonical_name(s.calc, b).digest();
  Subst inner{s.calc, s.entries, s.value_atoms, {}, {}, s.key_atoms};
  inner.entries.erase(std::remove_if(inner.entries.begin(), inner.entries.end(),
                                     [&](const auto& e) { return e.first == bd; }),
                      inner.entries.end());
  Name binder = b;
  Term body = n.child(0);
  if (!inner.entries.empty()) {
    if (b.is_atom()) {
      if (std::binary_search(s.value_atoms.begin(), s.value_atoms.end(), b.id())) {
        std::string fresh = prime_until_fresh(b.id(), s.value_atoms, *body);
        body = rename_free_atom(body, b.id(), fresh);
        binder = atom(fresh);
      }
    } else {
      for (const auto& [_, v] : inner.entries)
        if (canonical_name(s.calc, v).digest() == bd)
          throw SemanticError("substitution would be captured by a quoted binder");
    }
  }
  Term new_body = inner.entries.empty() ? body : subst(body, inner);
  if (n.kind() == Kind::New) return nu(binder, new_body);
  return input(binder, subst_name(n.name(1), s), new_body);
}

Term subst(const Term& t, const Subst& s) {
  const Node& n = *t;
  if (n.kind() == Kind::Zero || s.untouched(n)) return t;
  if (auto hit = s.memo.find(&n); hit != s.memo.end()) return hit->second;
  Term out;
  if (n.kind() == Kind::New || n.kind() == Kind::Input) {
    out = subst_binder(t, s);
  } else {
    std::vector<Name> names;
    names.reserve(n.names().size());
    for (const auto& nm : n.names()) names.push_back(subst_name(nm, s));
    std::vector<Term> children;
    children.reserve(n.children().size());
    for (const auto& ch : n.children()) children.push_back(subst(ch, s));
    out = make_node(n.kind(), std::move(names), std::move(children));
  }
  s.memo.emplace(&n, out);
  return out;
}

// Renames binders to levels in place, keeping component order.
Term levelize(const Term& t, Calculus c, const Env& env, int depth);

Name levelize_name(const Name& n, Calculus c, const Env& env, int depth) {
  if (n.is_atom()) {
    auto it = env.find(n.id());
    return it == env.end() ? n : atom(level_id(it->second));
  }
  return quote(levelize(n.process(), quoted_calculus(c), env, depth));
}

Term levelize(const Term& t, Calculus c, const Env& env, int depth) {
  const Node& n = *t;
  if (!n.has_binders() && !env_touches(env, n)) return t;
  switch (n.kind()) {
    case Kind::New: {
      Env inner = env;
      inner[n.name(0).id()] = depth;
      return nu(atom(level_id(depth)), levelize(n.child(0), c, inner, depth + 1));
    }
    case Kind::Input: {
      Name ch = levelize_name(n.name(1), c, env, depth);
      if (!n.name(0).is_atom())
        return input(levelize_name(n.name(0), c, env, depth), ch, levelize(n.child(0), c, env, depth));
      Env inner = env;
      inner[n.name(0).id()] = depth;
      return input(atom(level_id(depth)), ch, levelize(n.child(0), c, inner, depth + 1));
    }
    default: break;
  }
  std::vector<Name> names;
  for (const auto& nm : n.names()) names.push_back(levelize_name(nm, c, env, depth));
  std::vector<Term> children;
  for (const auto& ch : n.children()) children.push_back(levelize(ch, c, env, depth));
  return make_node(n.kind(), std::move(names), std::move(children));
}

}  // namespace

CanonicalForm canonicalize(Calculus c, const Term& t) {
  Term r = proc(t, c, {}, 0);
  return {c, r, r->digest()};
}

bool struct_congruent(Calculus c, const Term& a, const Term& b) {
  if (a->digest() == b->digest()) return true;
  return canonicalize(c, a).digest == canonicalize(c, b).digest;
}

Name canonical_name(Calculus c, const Name& n) { return canon_name(n, c, {}, 0); }

bool name_equiv(Calculus c, const Name& a, const Name& b) {
  if (a.digest() == b.digest()) return true;
  return canonical_name(c, a).digest() == canonical_name(c, b).digest();
}

std::vector<Name> free_names(Calculus c, const Term& t) {
  std::vector<Name> out;
  std::unordered_set<Digest> seen;
  collect_fn(c, t, out, seen);
  std::sort(out.begin(), out.end(), [](const Name& a, const Name& b) { return a.digest() < b.digest(); });
  return out;
}

bool occurs_free(Calculus c, const Name& x, const Term& t) {
  const Digest d = canonical_name(c, x).digest();
  for (const auto& n : free_names(c, t))
    if (n.digest() == d) return true;
  return false;
}

std::vector<Name> names_in(const Term& t) {
  std::vector<Name> out;
  std::unordered_set<Digest> seen;
  collect_names(t, out, seen);
  return out;
}

Term substitute(Calculus c, const Term& t, std::span<const SubstEntry> entries) {
  Subst s{c, {}, {}, {}, {}, std::vector<std::string>{}};
  std::vector<std::string> atoms;
  for (const auto& e : entries) {
    const Name* v = std::get_if<Name>(&e.value);
    if (!v) throw SemanticError("only names can be substituted for names");
    const Name key = canonical_name(c, e.key);
    s.entries.emplace_back(key.digest(), *v);
    if (key.is_atom() && s.key_atoms) {
      s.key_atoms->push_back(key.id());
    } else {
      s.key_atoms.reset();
    }
    for (const Name* n : {v, &e.key}) {
      if (n->is_atom()) {
        atoms.push_back(n->id());
      } else {
        const auto& qa = n->process()->atoms();
        atoms.insert(atoms.end(), qa.begin(), qa.end());
      }
    }
  }
  if (s.entries.empty()) return t;
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  s.value_atoms = std::move(atoms);
  return subst(t, s);
}

Term substitute(Calculus c, const Term& t, const Name& key, const Name& value) {
  SubstEntry e{key, value};
  return substitute(c, t, std::span<const SubstEntry>(&e, 1));
}

bool alpha_equiv(Calculus c, const Term& a, const Term& b) {
  if (a->digest() == b->digest()) return true;
  if (c == Calculus::RhoComb) return false;
  return levelize(a, c, {}, 0)->digest() == levelize(b, c, {}, 0)->digest();
}

namespace {

struct Renamer {
  const std::string& from;
  const std::string& to;
  std::unordered_map<const Node*, Term> memo;

  Name name(const Name& n) {
    if (n.is_atom()) return n.id() == from ? atom(to) : n;
    if (!n.process()->has_free_atom(from)) return n;
    return quote(term(n.process()));
  }

  Term term(const Term& t) {
    const Node& n = *t;
    if (!n.has_free_atom(from)) return t;
    if (auto hit = memo.find(&n); hit != memo.end()) return hit->second;
    Term out;
    if (n.kind() == Kind::New) {
      out = n.name(0).id() == from ? t : nu(n.name(0), term(n.child(0)));
    } else if (n.kind() == Kind::Input && n.name(0).is_atom() && n.name(0).id() == from) {
      out = input(n.name(0), name(n.name(1)), n.child(0));
    } else {
      std::vector<Name> names;
      names.reserve(n.names().size());
      for (const auto& nm : n.names()) names.push_back(name(nm));
      std::vector<Term> children;
      children.reserve(n.children().size());
      for (const auto& ch : n.children()) children.push_back(term(ch));
      out = make_node(n.kind(), std::move(names), std::move(children));
    }
    memo.emplace(&n, out);
    return out;
  }
};

}  // namespace

Term rename_free_atom(const Term& t, const std::string& from, const std::string& to) {
  Renamer r{from, to, {}};
  return r.term(t);
}

bool is_level_binder(std::string_view id) {
  if (id.size() < 2 || id[0] != '#') return false;
  return std::all_of(id.begin() + 1, id.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

std::string fresh_internal_atom() {
  static std::atomic<std::uint64_t> counter{0};
  return "%g" + std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
}

}  // namespace rhocomb

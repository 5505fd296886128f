#include "rhocomb/encodings.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>

#include "rhocomb/congruence.hpp"
#include "rhocomb/reduction.hpp"
#include "rhocomb/syntax.hpp"

namespace rhocomb {

Name left_name(Calculus target, const Name& x) {
  if (target == Calculus::Rho) return quote(lift(x, drop(x)));
  return quote(bind_l(x, quote(msg(x, drop(x)))));
}

Name right_name(Calculus target, const Name& x) {
  if (target == Calculus::Rho) return quote(input(x, x, zero()));
  return quote(bind_r(x, quote(msg(x, drop(x)))));
}

Name derive_name(Calculus target, const Name& x, std::string_view path) {
  Name out = x;
  for (char ch : path) {
    if (ch == 'l') {
      out = left_name(target, out);
    } else if (ch == 'r') {
      out = right_name(target, out);
    } else {
      throw SemanticError(std::string("name constructor path may only contain l and r, got '") + ch + "'");
    }
  }
  return out;
}

Term replicator(const Name& x, const Name& v, const Name& w) { return par({dup(x, v, w), fwd(v, x), drop(w)}); }

Term replicate(const Term& p, const Name& x, const Name& v, const Name& w) {
  Term d = replicator(x, v, w);
  return par(msg(x, par(d, p)), d);
}

ReplicationReplay replay_replication(const Term& p, const Name& x, const Name& v, const Name& w) {
  ReplicationReplay out;
  out.start = replicate(p, x, v, w);
  out.expected = par(out.start, p);
  out.trace = reduce_deterministic(Calculus::RhoComb, out.start, Budget{3, 0, 4, false, {}});
  out.matches = out.trace.steps.size() == 3 &&
                out.trace.final_state.digest == canonicalize(Calculus::RhoComb, out.expected).digest;
  return out;
}

Term rho_replicator(const Name& x) {
  std::string y = "y";
  const Node* q = x.is_quote() ? x.process().get() : nullptr;
  while ((x.is_atom() && x.id() == y) || (q && q->mentions_atom(y))) y += '\'';
  return input(atom(y), x, par(lift(x, drop(atom(y))), drop(atom(y))));
}

Name inject_atom(const Name& a) {
  if (!a.is_atom()) throw SemanticError("inject_atom expects an atomic name");
  return quote(kill(a));
}

namespace {

// Diagnostics only: generated terms can be far too large to print whole.
template <class T>
std::string brief(const T& v) {
  std::string s = print(v, PrintOptions{2});
  if (s.size() > 240) s = s.substr(0, 240) + "...";
  return s;
}

void flatten_into(const Term& t, std::vector<Term>& out, bool expand_drops) {
  switch (t->kind()) {
    case Kind::Zero: return;
    case Kind::Par:
      for (const auto& ch : t->children()) flatten_into(ch, out, expand_drops);
      return;
    case Kind::Drop:
      if (expand_drops && t->name(0).is_quote()) {
        flatten_into(t->name(0).process(), out, expand_drops);
        return;
      }
      break;
    default: break;
  }
  out.push_back(t);
}

std::vector<Term> flatten(const Term& t, bool expand_drops) {
  std::vector<Term> out;
  flatten_into(t, out, expand_drops);
  return out;
}

class FreshAtoms {
 public:
  void reserve(const Term& t) {
    for (const auto& a : t->atoms()) used_.insert(a);
  }
  void reserve(const Name& n) {
    if (n.is_atom()) {
      used_.insert(n.id());
    } else {
      reserve(n.process());
    }
  }
  std::string numbered(const std::string& base) {
    std::string s;
    do {
      s = base + std::to_string(++counter_);
    } while (used_.count(s));
    used_.insert(s);
    return s;
  }
  std::string primed(std::string base) {
    while (used_.count(base)) base += '\'';
    used_.insert(base);
    return base;
  }

 private:
  std::set<std::string> used_;
  int counter_ = 0;
};

bool same_name(const Name& a, const Name& x) {
  if (a.digest() == x.digest()) return true;
  if (a.is_atom() != x.is_atom()) return x.is_quote() && name_equiv(Calculus::RhoComb, a, x);
  if (a.is_atom()) return false;
  return name_equiv(Calculus::RhoComb, a, x);
}

Term with_arg(const Node& atom_node, std::size_t i, const Name& replacement) {
  std::vector<Name> args(atom_node.names().begin(), atom_node.names().end());
  args.at(i) = replacement;
  std::vector<Term> children(atom_node.children().begin(), atom_node.children().end());
  return make_node(atom_node.kind(), std::move(args), std::move(children));
}

// ---------------------------------------------------------------------------
// π -> Yoshida

using Measure = std::tuple<std::size_t, std::size_t, std::size_t>;

std::size_t count_binders(const Term& t) {
  std::size_t k = (t->kind() == Kind::New || t->kind() == Kind::Repl) ? 1 : 0;
  for (const auto& ch : t->children()) k += count_binders(ch);
  return k;
}

bool yoshida_base_shape(const Node& a, const Name& x) {
  if (a.kind() == Kind::Msg) return a.name(1) == x && !(a.name(0) == x);
  if (a.kind() == Kind::Fwd) return (a.name(0) == x) != (a.name(1) == x);
  return false;
}

std::size_t uncovered_weight(const Term& t, const Name& x) {
  const Node& n = *t;
  if (n.kind() == Kind::Par || n.kind() == Kind::New || n.kind() == Kind::Repl) {
    std::size_t w = 0;
    for (const auto& ch : n.children()) w += uncovered_weight(ch, x);
    return w;
  }
  if (!is_combinator(n.kind()) || yoshida_base_shape(n, x)) return 0;
  std::size_t w = 0;
  for (std::size_t i = 0; i < n.names().size(); ++i) {
    if (!(n.name(i) == x)) continue;
    if (n.kind() == Kind::BindR && i == 1) {
      w += 3;
    } else if (n.kind() == Kind::Sync && i == 1) {
      w += 2;
    } else {
      w += 1;
    }
  }
  return w;
}

class PiToYoshida {
 public:
  explicit PiToYoshida(const Term& source) { fresh_.reserve(source); }

  Term tr(const Term& t) {
    const Node& n = *t;
    for (const auto& nm : n.names())
      if (nm.is_quote()) throw SemanticError("pi_to_yoshida expects atomic names, got " + brief(nm));
    switch (n.kind()) {
      case Kind::Zero: return t;
      case Kind::Output: return msg(n.name(0), n.name(1));
      case Kind::Input: return for_star(n.name(0), n.name(1), tr(n.child(0)), std::nullopt);
      case Kind::New: return nu(n.name(0), tr(n.child(0)));
      case Kind::Repl: return repl(tr(n.child(0)));
      case Kind::Par: {
        std::vector<Term> parts;
        for (const auto& ch : n.children()) parts.push_back(tr(ch));
        return par(std::move(parts));
      }
      default: break;
    }
    throw SemanticError(std::string(to_string(n.kind())) + " is not a pi constructor");
  }

 private:
  FreshAtoms fresh_;

  Name fresh() { return atom(fresh_.numbered("c")); }

  Term for_star(const Name& x, const Name& a, const Term& body, std::optional<Measure> parent) {
    const Measure m{count_binders(body), uncovered_weight(body, x), body->size()};
    if (parent && !(m < *parent))
      throw SemanticError("prefix elimination measure did not decrease at " + brief(body));
    const Node& b = *body;
    switch (b.kind()) {
      case Kind::Zero: return kill(a);  // III
      case Kind::Par: {                 // I
        Name c1 = fresh(), c2 = fresh();
        std::vector<Term> rest(b.children().begin() + 1, b.children().end());
        Term inner = par({dup(a, c1, c2), for_star(x, c1, b.child(0), m), for_star(x, c2, par(std::move(rest)), m)});
        return nu(c1, nu(c2, inner));
      }
      case Kind::New: {  // II
        Name c = fresh();
        Term renamed = rename_free_atom(b.child(0), b.name(0).id(), c.id());
        return nu(c, for_star(x, a, renamed, m));
      }
      case Kind::Repl: {  // IV
        Name c = fresh();
        Term unfolded = par(b.child(0), msg(c, x));
        return nu(c, par(fwd(a, c), repl(for_star(x, c, unfolded, m))));
      }
      default: break;
    }
    if (!is_combinator(b.kind())) throw SemanticError("unexpected " + std::string(to_string(b.kind())) + " in for*");
    const auto args = b.names();
    std::vector<std::size_t> occ;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i] == x) occ.push_back(i);
    if (occ.empty()) {
      Name c = fresh();
      if (signature_polarity(b.kind(), 0) == Polarity::Plus)  // V
        return nu(c, par(sync(a, c, args[0]), with_arg(b, 0, c)));
      return nu(c, par(sync(a, args[0], c), with_arg(b, 0, c)));  // VI
    }
    if (b.kind() == Kind::Msg && occ.size() == 1 && occ[0] == 1) return fwd(a, args[0]);  // VII
    if (b.kind() == Kind::Fwd && occ.size() == 1) {
      if (occ[0] == 0) return bind_l(a, args[1]);  // VIII
      return bind_r(a, args[0]);                   // IX
    }
    const std::size_t i = occ[0];
    const Polarity pol = signature_polarity(b.kind(), i);
    if (i == 0 && pol == Polarity::Minus) {  // XI
      Name c = fresh();
      return nu(c, for_star(x, a, par(fwd(x, c), with_arg(b, 0, c)), m));
    }
    if (pol != Polarity::Minus) {  // X
      Name c = fresh();
      return nu(c, for_star(x, a, par(fwd(c, x), with_arg(b, i, c)), m));
    }
    if (b.kind() == Kind::BindR && i == 1) {  // XII
      Name c1 = fresh(), c2 = fresh(), c3 = fresh();
      Term inner = par({dup(args[0], c1, c2), sync(c1, x, c3), bind_r(c2, c3)});
      return nu(c1, nu(c2, nu(c3, for_star(x, a, inner, m))));
    }
    if (b.kind() == Kind::Sync && i == 1) {  // XIII
      Name c1 = fresh(), c2 = fresh();
      Term inner = par({sync(args[0], c1, c2), msg(c1, x), bind_l(c2, args[2])});
      return nu(c1, nu(c2, for_star(x, a, inner, m)));
    }
    throw SemanticError("no prefix-elimination rule covers " + brief(body) + " for bound name " + brief(x));
  }
};

// ---------------------------------------------------------------------------
// ⟦−⟧₄

bool mentions_unquoted(const Term& t, const Name& x) {
  for (const auto& nm : t->names())
    if (nm.is_atom() && same_name(nm, x)) return true;
  for (const auto& ch : t->children())
    if (mentions_unquoted(ch, x)) return true;
  return false;
}

class Eliminator {
 public:
  explicit Eliminator(FreshnessLedger* ledger) : ledger_(ledger) {}

  FreshnessLedger* swap_ledger(FreshnessLedger* l) { return std::exchange(ledger_, l); }

  Term run(const Name& p, const Name& x, const Term& body, const Name& n, const Name& q) {
    std::vector<Term> parts = flatten(body, true);
    if (parts.empty()) return kill(p);
    if (parts.size() >= 2) return parallel(p, x, parts, n, q);
    return single(p, x, parts[0], n, q);
  }

 private:
  FreshnessLedger* ledger_;

  void note(const char* rule, const Name& name, const Term& fresh_for) {
    if (ledger_) ledger_->push_back({rule, name, fresh_for});
  }

  Term parallel(const Name& p, const Name& x, const std::vector<Term>& parts, const Name& n, const Name& q) {
    // Any binary split is an instance of the rule; halving keeps the quoted
    // names (each carries its whole body) at O(k log k) total size.
    const Term pq = par(parts);
    const auto mid = parts.begin() + static_cast<std::ptrdiff_t>(parts.size() / 2);
    const Term first = par(std::vector<Term>(parts.begin(), mid));
    const Term rest = par(std::vector<Term>(mid, parts.end()));
    std::vector<Term> lv{bind_l(q, n)}, rv{bind_r(q, n)};
    lv.insert(lv.end(), parts.begin(), parts.end());
    rv.insert(rv.end(), parts.begin(), parts.end());
    const Name v = quote(msg(q, par(lv)));
    const Name w = quote(msg(q, par(rv)));
    const Term mvw = msg(q, msg(v, drop(w)));
    const Name n1 = quote(par(bind_l(v, w), mvw));
    const Name n2 = quote(par(bind_r(v, w), mvw));
    const Name q1 = quote(par(bind_l(n1, n2), mvw));
    const Name q2 = quote(par(bind_r(n1, n2), mvw));
    for (const Name* nm : {&v, &w, &n1, &n2, &q1, &q2}) note("I", *nm, pq);
    return par({dup(p, v, w), run(v, x, first, n1, q1), run(w, x, rest, n2, q2)});
  }

  [[noreturn]] void uncovered(const Term& a, const Name& x) {
    throw SemanticError("no prefix-elimination rule covers " + brief(a) + " for bound name " + brief(x));
  }

  Term single(const Name& p, const Name& x, const Term& a, const Name& n, const Name& q) {
    const Node& b = *a;
    const Term mqn = msg(q, drop(n));
    auto fresh_a = [&](const char* rule) {
      Name nm = quote(par(mqn, a));
      note(rule, nm, a);
      return nm;
    };
    auto next_n = [&](const Name& an, const char* rule) {
      Name nm = quote(msg(an, mqn));
      note(rule, nm, a);
      return nm;
    };

    if (b.kind() == Kind::Msg) {
      if (!msg_has_process_payload(b)) throw SemanticError("prefix elimination expects RHO-combinator messages");
      const Term& payload = b.child(0);
      const bool chan = same_name(b.name(0), x);
      const bool direct = payload->kind() == Kind::Drop && same_name(payload->name(0), x);
      if (!direct && mentions_unquoted(payload, x)) uncovered(a, x);
      if (!chan && !direct) {  // V
        Name an = fresh_a("V");
        return par(sync(p, an, b.name(0)), msg(an, payload));
      }
      if (!chan) return fwd(p, b.name(0));  // VII
      Name an = fresh_a("X");               // X at the channel position
      Name n2 = next_n(an, "X");
      return run(p, x, par(fwd(an, x), msg(an, payload)), n2, q);
    }
    if (!is_combinator(b.kind()) && b.kind() != Kind::Drop)
      throw SemanticError("prefix elimination expects combinator form, got " + brief(a));

    const auto args = b.names();
    std::vector<std::size_t> occ;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (same_name(args[i], x)) occ.push_back(i);
    if (occ.empty()) {  // VI: every remaining atom starts with an input position
      Name an = fresh_a("VI");
      return par(sync(p, args[0], an), with_arg(b, 0, an));
    }
    if (b.kind() == Kind::Fwd && occ.size() == 1) {
      if (occ[0] == 0) return bind_l(p, args[1]);  // VIII
      return bind_r(p, args[0]);                   // IX
    }
    const std::size_t i = occ[0];
    const Polarity pol = signature_polarity(b.kind(), i);
    if (i == 0 && pol == Polarity::Minus) {  // XI
      Name an = fresh_a("XI");
      Name n2 = next_n(an, "XI");
      return run(p, x, par(fwd(x, an), with_arg(b, 0, an)), n2, q);
    }
    if (pol != Polarity::Minus) {  // X
      Name an = fresh_a("X");
      Name n2 = next_n(an, "X");
      return run(p, x, par(fwd(an, x), with_arg(b, i, an)), n2, q);
    }
    if (b.kind() == Kind::BindR && i == 1) {  // XII
      const Name& v = args[0];
      Name w1 = quote(par(bind_l(q, n), msg(q, a)));
      Name w2 = quote(par(bind_r(q, n), msg(q, a)));
      Name w3 = quote(par(bind_l(p, v), msg(w1, drop(w2))));
      Name n2 = quote(sync(w1, w2, w3));
      for (const Name* nm : {&w1, &w2, &w3, &n2}) note("XII", *nm, a);
      return run(p, x, par({dup(v, w1, w2), sync(w1, x, w3), bind_r(w2, w3)}), n2, q);
    }
    if (b.kind() == Kind::Sync && i == 1) {  // XIII
      const Name& v = args[0];
      Name w1 = quote(par(bind_l(q, n), a));
      Name w2 = quote(par(bind_r(q, n), a));
      Name n2 = quote(msg(w1, drop(w2)));
      for (const Name* nm : {&w1, &w2, &n2}) note("XIII", *nm, a);
      return run(p, x, par({sync(v, w1, w2), msg(w1, drop(x)), bind_l(w2, args[2])}), n2, q);
    }
    uncovered(a, x);
  }
};

// ---------------------------------------------------------------------------
// Yoshida -> RHO combinators

void check_allocator(Calculus c, const Term& t, const AllocatorPair& alloc) {
  if (name_equiv(c, alloc.n, alloc.p)) throw SemanticError("allocator names n and p must differ");
  for (const auto& f : free_names(c, t)) {
    if (name_equiv(c, f, alloc.n) || name_equiv(c, f, alloc.p))
      throw SemanticError("allocator name collides with free name " + brief(f));
  }
}

class YoshidaToRho {
 public:
  YoshidaToRho(const Term& source, const AllocatorPair& alloc, FreshnessLedger* ledger)
      : ledger_(ledger), elim_(ledger) {
    fresh_.reserve(source);
    fresh_.reserve(alloc.n);
    fresh_.reserve(alloc.p);
  }

  Term tr(const Term& t, const Name& n, const Name& p) {
    const Node& node = *t;
    switch (node.kind()) {
      case Kind::Zero: return t;
      case Kind::Msg:
        if (msg_has_process_payload(node)) return msg(node.name(0), tr(node.child(0), n, p));
        return msg(node.name(0), drop(node.name(1)));
      case Kind::Par: {
        std::vector<Term> rest(node.children().begin() + 1, node.children().end());
        const Name nl = left_name(Calculus::RhoComb, n), pl = left_name(Calculus::RhoComb, p);
        const Name nr = right_name(Calculus::RhoComb, n), pr = right_name(Calculus::RhoComb, p);
        return par(tr(node.child(0), nl, pl), tr(par(std::move(rest)), nr, pr));
      }
      case Kind::New: {
        const Name nl = left_name(Calculus::RhoComb, n), pl = left_name(Calculus::RhoComb, p);
        Term body = tr(node.child(0), nl, pl);
        return par(elim_.run(p, node.name(0), body, n, p), msg(p, drop(n)));
      }
      case Kind::Repl: return package(node.child(0), n, p);
      default:
        if (is_combinator(node.kind())) return t;
        break;
    }
    throw SemanticError(std::string(to_string(node.kind())) + " is not a Yoshida constructor");
  }

  Term package(const Term& body, const Name& n, const Name& p) {
    // This translation only names the package; its fresh names never run.
    FreshnessLedger* saved = std::exchange(ledger_, nullptr);
    elim_.swap_ledger(nullptr);
    const Name y = quote(tr(body, n, p));
    ledger_ = saved;
    elim_.swap_ledger(saved);
    const Name x = derive_name(Calculus::RhoComb, y, "ll");
    const Name v = derive_name(Calculus::RhoComb, y, "lr");
    const Name w = derive_name(Calculus::RhoComb, y, "rr");
    if (ledger_) {
      for (const Name* nm : {&x, &v, &w}) ledger_->push_back({"repl", *nm, y.process()});
    }
    const Name nl = left_name(Calculus::RhoComb, n), pl = left_name(Calculus::RhoComb, p);
    const Name nr = right_name(Calculus::RhoComb, n), pr = right_name(Calculus::RhoComb, p);
    return par({msg(x, third(body, nr, pr, x, v, w)), replicator(x, v, w), msg(nr, drop(nl)), msg(pr, drop(pl))});
  }

 private:
  FreshnessLedger* ledger_;
  Eliminator elim_;
  FreshAtoms fresh_;

  // ⟦P⟧₃(n,p): receive a fresh allocator, run P on it and re-arm.
  Term third(const Term& body, const Name& n, const Name& p, const Name& x, const Name& v, const Name& w) {
    const Name n1 = atom(fresh_.primed("n'"));
    const Name p1 = atom(fresh_.primed("p'"));
    Term inner = par({tr(body, n1, p1), replicator(x, v, w), msg(n, drop(left_name(Calculus::RhoComb, n1))),
                      msg(p, drop(left_name(Calculus::RhoComb, p1)))});
    Term after_p = elim_.run(p, p1, inner, n, p);
    return elim_.run(n, n1, after_p, n, p);
  }
};

// ---------------------------------------------------------------------------
// π -> ρ

class PiToRho {
 public:
  PiToRho(const Term& source, const AllocatorPair& alloc) {
    fresh_.reserve(source);
    fresh_.reserve(alloc.n);
    fresh_.reserve(alloc.p);
  }

  Term tr(const Term& t, const Name& n, const Name& p) {
    const Node& node = *t;
    switch (node.kind()) {
      case Kind::Zero: return t;
      case Kind::Output: return lift(node.name(0), drop(node.name(1)));
      case Kind::Input: return input(node.name(0), node.name(1), tr(node.child(0), n, p));
      case Kind::Par: {
        std::vector<Term> rest(node.children().begin() + 1, node.children().end());
        return par(tr(node.child(0), left(n), left(p)), tr(par(std::move(rest)), right(n), right(p)));
      }
      case Kind::New:
        return par(input(node.name(0), p, tr(node.child(0), left(n), left(p))), lift(p, drop(n)));
      case Kind::Repl: {
        const Name y = quote(tr(node.child(0), n, p));
        const Name x = derive_name(Calculus::Rho, y, "ll");
        return par({lift(x, third(node.child(0), right(n), right(p), x)), rho_replicator(x),
                    lift(right(n), drop(left(n))), lift(right(p), drop(left(p)))});
      }
      default: break;
    }
    throw SemanticError(std::string(to_string(node.kind())) + " is not a pi constructor");
  }

 private:
  FreshAtoms fresh_;

  static Name left(const Name& x) { return left_name(Calculus::Rho, x); }
  static Name right(const Name& x) { return right_name(Calculus::Rho, x); }

  Term third(const Term& body, const Name& n2, const Name& p2, const Name& x) {
    const Name nb = atom(fresh_.primed("n"));
    const Name pb = atom(fresh_.primed("p"));
    Term inner = par({tr(body, nb, pb), rho_replicator(x), lift(n2, drop(left(nb))), lift(p2, drop(left(pb)))});
    return input(nb, n2, input(pb, p2, inner));
  }
};

}  // namespace

AllocatorPair default_rhocomb_allocator(const Term& t, Calculus c) {
  std::vector<Term> ns{msg(quote(zero()), zero())};
  std::vector<Term> ps{kill(quote(zero()))};
  for (const auto& f : free_names(c, t)) {
    ns.push_back(msg(f, zero()));
    ps.push_back(kill(f));
  }
  return {quote(par(std::move(ns))), quote(par(std::move(ps)))};
}

AllocatorPair default_rho_allocator(const Term& pi_term) {
  const auto fn = free_names(Calculus::Pi, pi_term);
  if (fn.empty()) return {quote(lift(quote(zero()), zero())), quote(input(quote(zero()), quote(zero()), zero()))};
  std::vector<Term> ns, ps;
  for (const auto& f : fn) {
    ns.push_back(lift(f, drop(quote(zero()))));
    ps.push_back(input(quote(zero()), f, zero()));
  }
  return {quote(par(std::move(ns))), quote(par(std::move(ps)))};
}

Term pi_to_yoshida(const Term& pi) {
  check_well_formed(Calculus::Pi, pi);
  return PiToYoshida(pi).tr(pi);
}

Term prefix_eliminate(const Name& p, const Name& x, const Term& body, const Name& n, const Name& q,
                      FreshnessLedger* ledger) {
  return Eliminator(ledger).run(p, x, body, n, q);
}

Term replication_package(const Term& yoshida_body, const Name& n, const Name& p, FreshnessLedger* ledger) {
  YoshidaToRho tr(yoshida_body, {n, p}, ledger);
  return tr.package(yoshida_body, n, p);
}

Term yoshida_to_rhocomb(const Term& yoshida, const std::optional<AllocatorPair>& alloc, FreshnessLedger* ledger) {
  check_well_formed(Calculus::Yoshida, yoshida);
  const AllocatorPair a = alloc ? *alloc : default_rhocomb_allocator(yoshida, Calculus::Yoshida);
  check_allocator(Calculus::Yoshida, yoshida, a);
  YoshidaToRho tr(yoshida, a, ledger);
  return tr.tr(yoshida, a.n, a.p);
}

Term pi_to_rho(const Term& pi, const std::optional<AllocatorPair>& alloc) {
  check_well_formed(Calculus::Pi, pi);
  const AllocatorPair a = alloc ? *alloc : default_rho_allocator(pi);
  check_allocator(Calculus::Pi, pi, a);
  return PiToRho(pi, a).tr(pi, a.n, a.p);
}

Term pi_to_rhocomb(const Term& pi, FreshnessLedger* ledger) {
  Term y = pi_to_yoshida(pi);
  std::vector<SubstEntry> inj;
  for (const auto& f : free_names(Calculus::Yoshida, y)) inj.push_back({f, inject_atom(f)});
  Term instantiated = substitute(Calculus::Yoshida, y, inj);
  return yoshida_to_rhocomb(instantiated, std::nullopt, ledger);
}

}  // namespace rhocomb

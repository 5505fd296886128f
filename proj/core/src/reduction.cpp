#include "rhocomb/reduction.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace rhocomb {

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Dup: return "d";
    case Rule::Kill: return "k";
    case Rule::Fwd: return "fw";
    case Rule::BindR: return "br";
    case Rule::BindL: return "bl";
    case Rule::Sync: return "s";
    case Rule::Drop: return "drop";
    case Rule::Unfold: return "unfold";
    case Rule::Comm: return "comm";
  }
  return "?";
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Plus: return "+";
    case Polarity::Minus: return "-";
    case Polarity::Both: return "+-";
  }
  return "?";
}

namespace {

std::vector<Term> components(const Term& t) {
  if (t->kind() == Kind::Zero) return {};
  if (t->kind() == Kind::Par) return {t->children().begin(), t->children().end()};
  return {t};
}

std::optional<Rule> agent_rule(Kind k) {
  switch (k) {
    case Kind::Dup: return Rule::Dup;
    case Kind::Kill: return Rule::Kill;
    case Kind::Fwd: return Rule::Fwd;
    case Kind::BindR: return Rule::BindR;
    case Kind::BindL: return Rule::BindL;
    case Kind::Sync: return Rule::Sync;
    case Kind::Drop: return Rule::Drop;
    default: return std::nullopt;
  }
}

bool has_replication(Calculus c) { return c == Calculus::Pi || c == Calculus::Yoshida; }

// Message kind an input of calculus c consumes.
Kind message_kind(Calculus c) {
  switch (c) {
    case Calculus::Pi: return Kind::Output;
    case Calculus::Rho: return Kind::Lift;
    default: return Kind::Msg;
  }
}

// *(@Q) is congruent to Q, so a drop agent on a quoted channel is the
// referent's components themselves. The message m(@Q,R) fires when those
// components are all present beside it; the referent is consumed.
void quoted_drop(const std::vector<Term>& ps, const std::unordered_map<Digest, std::vector<std::size_t>>& by_digest,
                 std::size_t msg_index, std::vector<Redex>& out) {
  const Term& q = ps[msg_index]->name(0).process();
  std::vector<std::size_t> idx;
  for (const auto& w : components(q)) {
    if (w->kind() == Kind::New) return;
    auto it = by_digest.find(w->digest());
    if (it == by_digest.end()) return;
    auto pick = std::find_if(it->second.begin(), it->second.end(), [&](std::size_t k) {
      return k != msg_index && std::find(idx.begin(), idx.end(), k) == idx.end();
    });
    if (pick == it->second.end()) return;
    idx.push_back(*pick);
  }
  std::sort(idx.begin(), idx.end());
  idx.push_back(msg_index);
  Redex r{Rule::Drop, idx, {}, ps[msg_index]->name(0)};
  for (auto k : idx) r.participants.push_back(ps[k]->digest());
  out.push_back(std::move(r));
}

}  // namespace

Soup open_soup(const CanonicalForm& form) {
  Soup s;
  const auto top = components(form.term);
  for (std::size_t b = 0; b < top.size(); ++b) {
    Term t = top[b];
    if (t->kind() != Kind::New) {
      s.parts.push_back(t);
      continue;
    }
    std::vector<std::string> levels;
    while (t->kind() == Kind::New) {
      levels.push_back(t->name(0).id());
      t = t->child(0);
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      std::string fresh = "%s" + std::to_string(b) + "_" + std::to_string(i);
      t = rename_free_atom(t, levels[i], fresh);
      s.restricted.push_back(std::move(fresh));
    }
    for (auto& p : components(t)) s.parts.push_back(std::move(p));
  }
  return s;
}

CanonicalForm close_soup(Calculus c, const Soup& soup) {
  Term t = par(soup.parts);
  for (auto it = soup.restricted.rbegin(); it != soup.restricted.rend(); ++it) t = nu(atom(*it), t);
  return canonicalize(c, t);
}

bool operator<(const Redex& a, const Redex& b) {
  if (a.indices != b.indices) return a.indices < b.indices;
  return a.rule < b.rule;
}

std::vector<Redex> find_redexes(Calculus c, const CanonicalForm&, const Soup& soup) {
  std::vector<Redex> out;
  const auto& ps = soup.parts;
  const Kind mk = message_kind(c);
  std::unordered_map<Digest, std::vector<std::size_t>> by_channel;
  for (std::size_t j = 0; j < ps.size(); ++j)
    if (ps[j]->kind() == mk) by_channel[ps[j]->name(0).digest()].push_back(j);
  std::unordered_map<Digest, std::vector<std::size_t>> by_digest;  // built on first quoted-channel message
  auto pair_with_messages = [&](std::size_t i, Rule rule, const Name& ch) {
    auto it = by_channel.find(ch.digest());
    if (it == by_channel.end()) return;
    for (auto j : it->second) {
      if (j == i) continue;
      out.push_back({rule, {i, j}, {ps[i]->digest(), ps[j]->digest()}, ch});
    }
  };
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Node& n = *ps[i];
    switch (n.kind()) {
      case Kind::Repl:
        if (has_replication(c)) out.push_back({Rule::Unfold, {i}, {n.digest()}, std::nullopt});
        break;
      case Kind::Input:
        if (c == Calculus::Pi || c == Calculus::Rho) pair_with_messages(i, Rule::Comm, n.name(1));
        break;
      case Kind::Drop:
        if (c == Calculus::RhoComb) pair_with_messages(i, Rule::Drop, n.name(0));
        break;
      case Kind::Msg:
        if (c == Calculus::RhoComb && n.name(0).is_quote()) {
          if (by_digest.empty())
            for (std::size_t k = 0; k < ps.size(); ++k) by_digest[ps[k]->digest()].push_back(k);
          quoted_drop(ps, by_digest, i, out);
        }
        break;
      default:
        if (auto rule = agent_rule(n.kind()); rule && (c == Calculus::Yoshida || c == Calculus::RhoComb))
          pair_with_messages(i, *rule, n.name(0));
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Redex> find_redexes(Calculus c, const Term& t) {
  CanonicalForm f = canonicalize(c, t);
  return find_redexes(c, f, open_soup(f));
}

Term contractum(Calculus c, const Soup& soup, const Redex& r) {
  const Node& a = *soup.parts.at(r.indices.at(0));
  if (r.rule == Rule::Unfold) return par(a.child(0), soup.parts[r.indices[0]]);
  const Node& m = *soup.parts.at(r.indices.back());
  if (r.rule == Rule::Comm) {
    if (c == Calculus::Pi) return substitute(c, a.child(0), a.name(0), m.name(1));
    return substitute(c, a.child(0), a.name(0), quote(m.child(0)));
  }
  const bool process_payload = msg_has_process_payload(m);
  auto send = [&](const Name& ch) { return process_payload ? msg(ch, m.child(0)) : msg(ch, m.name(1)); };
  const Name payload = process_payload ? quote(m.child(0)) : m.name(1);
  switch (r.rule) {
    case Rule::Dup: return par(send(a.name(1)), send(a.name(2)));
    case Rule::Kill: return zero();
    case Rule::Fwd: return send(a.name(1));
    case Rule::BindR: return fwd(a.name(1), payload);
    case Rule::BindL: return fwd(payload, a.name(1));
    case Rule::Sync: return fwd(a.name(1), a.name(2));
    case Rule::Drop: return m.child(0);
    default: break;
  }
  throw SemanticError("rule does not apply");
}

CanonicalForm step(Calculus c, const CanonicalForm&, const Soup& soup, const Redex& r) {
  const std::size_t need = r.indices.size();
  const bool arity_ok = r.rule == Rule::Unfold ? need == 1 : r.rule == Rule::Drop ? need >= 1 : need == 2;
  if (!arity_ok || r.participants.size() != need) throw SemanticError("stale redex: wrong number of participants");
  for (std::size_t k = 0; k < need; ++k) {
    if (r.indices[k] >= soup.parts.size() || soup.parts[r.indices[k]]->digest() != r.participants[k])
      throw SemanticError("stale redex: component " + std::to_string(r.indices[k]) + " is no longer present");
  }
  for (std::size_t k = 1; k < need; ++k)
    for (std::size_t l = 0; l < k; ++l)
      if (r.indices[k] == r.indices[l]) throw SemanticError("stale redex: repeated component");
  Soup next;
  next.restricted = soup.restricted;
  for (std::size_t i = 0; i < soup.parts.size(); ++i)
    if (std::find(r.indices.begin(), r.indices.end(), i) == r.indices.end()) next.parts.push_back(soup.parts[i]);
  next.parts.push_back(contractum(c, soup, r));
  return close_soup(c, next);
}

CanonicalForm step(Calculus c, const Term& t, const Redex& r) {
  CanonicalForm f = canonicalize(c, t);
  return step(c, f, open_soup(f), r);
}

Trace reduce_deterministic(Calculus c, const Term& t, const Budget& budget) {
  Trace tr{c, {}, canonicalize(c, t), false};
  std::size_t unfolds = 0;
  while (true) {
    Soup soup = open_soup(tr.final_state);
    auto rs = find_redexes(c, tr.final_state, soup);
    bool skipped = false;
    if (unfolds >= budget.max_unfolds) {
      auto it = std::remove_if(rs.begin(), rs.end(), [](const Redex& r) { return r.rule == Rule::Unfold; });
      skipped = it != rs.end();
      rs.erase(it, rs.end());
    }
    if (rs.empty()) {
      tr.truncated = skipped;
      break;
    }
    if (tr.steps.size() >= budget.max_steps) {
      tr.truncated = true;
      break;
    }
    const Redex& r = rs.front();
    CanonicalForm next = step(c, tr.final_state, soup, r);
    if (r.rule == Rule::Unfold) ++unfolds;
    tr.steps.push_back({tr.final_state, r});
    tr.final_state = std::move(next);
  }
  return tr;
}

std::vector<std::vector<std::size_t>> ReductionGraph::successors() const {
  std::vector<std::vector<std::size_t>> out(states.size());
  for (const auto& e : edges) out[e.from].push_back(e.to);
  for (auto& v : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

std::optional<std::size_t> ReductionGraph::find(Digest d) const {
  auto it = index.find(d);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

std::optional<std::size_t> confluent_choice(Calculus c, const std::vector<Redex>& rs, const std::vector<Digest>& observed) {
  if (rs.size() < 2) return std::nullopt;
  std::unordered_map<std::size_t, std::size_t> uses;
  for (const auto& r : rs)
    for (auto k : r.indices) ++uses[k];
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const Redex& r = rs[i];
    if (r.rule == Rule::Unfold) continue;
    if (!std::all_of(r.indices.begin(), r.indices.end(), [&](std::size_t k) { return uses[k] == 1; })) continue;
    if (r.channel && std::find(observed.begin(), observed.end(), canonical_name(c, *r.channel).digest()) != observed.end())
      continue;
    return i;
  }
  return std::nullopt;
}

}  // namespace

ReductionGraph explore(Calculus c, const Term& t, const Budget& budget) {
  ReductionGraph g{c, {}, {}, {}, false};
  std::vector<Digest> observed;
  for (const auto& o : budget.observables) observed.push_back(canonical_name(c, o).digest());
  CanonicalForm root = canonicalize(c, t);
  g.index.emplace(root.digest, 0);
  g.states.push_back({root, 0, 0, false});
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const CanonicalForm form = g.states[s].form;
    const std::size_t depth = g.states[s].depth;
    const std::size_t unfolds = g.states[s].unfolds;
    Soup soup = open_soup(form);
    auto rs = find_redexes(c, form, soup);
    if (rs.empty()) {
      g.states[s].complete = true;
      continue;
    }
    if (depth >= budget.max_steps) {
      g.truncated = true;
      continue;
    }
    if (budget.reduce_confluent) {
      // The chosen step must lead somewhere new, or a cycle of confluent
      // steps could postpone the others forever.
      if (auto i = confluent_choice(c, rs, observed)) {
        CanonicalForm next = step(c, form, soup, rs[*i]);
        if (!g.index.count(next.digest)) rs = {rs[*i]};
      }
    }
    bool complete = true;
    for (const auto& r : rs) {
      const bool unfold = r.rule == Rule::Unfold;
      if (unfold && unfolds >= budget.max_unfolds) {
        complete = false;
        continue;
      }
      CanonicalForm next = step(c, form, soup, r);
      auto hit = g.index.find(next.digest);
      std::size_t to;
      if (hit != g.index.end()) {
        to = hit->second;
      } else {
        if (g.states.size() >= budget.max_states) {
          complete = false;
          continue;
        }
        to = g.states.size();
        g.index.emplace(next.digest, to);
        g.states.push_back({std::move(next), depth + 1, unfolds + (unfold ? 1 : 0), false});
        queue.push_back(to);
      }
      g.edges.push_back({s, to, r});
    }
    g.states[s].complete = complete;
    if (!complete) g.truncated = true;
  }
  return g;
}

Polarity signature_polarity(Kind k, std::size_t position) {
  using P = Polarity;
  switch (k) {
    case Kind::Msg: return position == 0 ? P::Plus : P::Both;
    case Kind::Dup: return position == 0 ? P::Minus : P::Plus;
    case Kind::Kill: return P::Minus;
    case Kind::Fwd:
    case Kind::BindL: return position == 0 ? P::Minus : P::Plus;
    case Kind::BindR: return P::Minus;
    case Kind::Sync: return position == 2 ? P::Plus : P::Minus;
    case Kind::Drop: return P::Minus;
    default: break;
  }
  throw SemanticError(std::string(to_string(k)) + " carries no polarity signature");
}

const PolarityReport::Entry* PolarityReport::lookup(Calculus c, const Name& n) const {
  const Digest d = canonical_name(c, n).digest();
  for (const auto& e : names)
    if (e.name.digest() == d) return &e;
  return nullptr;
}

namespace {

void collect_polarities(Calculus c, const Term& t, PolarityReport& rep) {
  const Node& n = *t;
  switch (n.kind()) {
    case Kind::Zero: return;
    case Kind::Par:
      for (const auto& ch : n.children()) collect_polarities(c, ch, rep);
      return;
    case Kind::New:
    case Kind::Repl: collect_polarities(c, n.child(0), rep); return;
    default: break;
  }
  if (!is_combinator(n.kind()) && n.kind() != Kind::Drop) {
    rep.consistent = false;
    if (rep.diagnostic.empty()) rep.diagnostic = std::string(to_string(n.kind())) + " is not a combinator atom";
    return;
  }
  const std::size_t arity = n.kind() == Kind::Msg ? (msg_has_process_payload(n) ? 1 : 2) : n.names().size();
  for (std::size_t i = 0; i < arity; ++i) {
    const Polarity pol = signature_polarity(n.kind(), i);
    rep.occurrences.push_back({n.name(i), pol, n.kind(), i});
    const Name cn = canonical_name(c, n.name(i));
    auto it = std::find_if(rep.names.begin(), rep.names.end(),
                           [&](const auto& e) { return e.name.digest() == cn.digest(); });
    if (it == rep.names.end()) {
      rep.names.push_back({cn, {pol}});
    } else {
      it->polarities.push_back(pol);
    }
  }
}

}  // namespace

PolarityReport check_polarities(Calculus c, const Term& t) {
  PolarityReport rep;
  if (c != Calculus::Yoshida && c != Calculus::RhoComb) {
    rep.consistent = false;
    rep.diagnostic = "polarities are defined for combinator calculi only";
    return rep;
  }
  collect_polarities(c, t, rep);
  return rep;
}

}  // namespace rhocomb

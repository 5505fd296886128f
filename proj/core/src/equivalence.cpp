#include "rhocomb/equivalence.hpp"

#include <algorithm>
#include <deque>

#include "rhocomb/congruence.hpp"

namespace rhocomb {

namespace {

bool is_output(Calculus c, Kind k) {
  switch (c) {
    case Calculus::Pi: return k == Kind::Output;
    case Calculus::Rho: return k == Kind::Lift;
    default: return k == Kind::Msg;
  }
}

std::vector<Digest> observed_digests(Calculus c, std::span<const Name> observables) {
  std::vector<Digest> out;
  for (const auto& o : observables) out.push_back(canonical_name(c, o).digest());
  return out;
}

std::vector<std::size_t> barb_indices(Calculus c, const CanonicalForm& form, const std::vector<Digest>& observed) {
  std::vector<bool> hit(observed.size(), false);
  for (const auto& part : open_soup(form).parts) {
    if (!is_output(c, part->kind())) continue;
    const Digest d = part->name(0).digest();
    for (std::size_t i = 0; i < observed.size(); ++i)
      if (observed[i] == d) hit[i] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (hit[i]) out.push_back(i);
  return out;
}

bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<std::size_t> minus(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::vector<std::size_t>> predecessors(const ReductionGraph& g) {
  std::vector<std::vector<std::size_t>> out(g.states.size());
  for (const auto& e : g.edges) out[e.to].push_back(e.from);
  return out;
}

// exact[s]: every state reachable from s was fully explored.
std::vector<bool> exact_closure(const ReductionGraph& g, const std::vector<std::vector<std::size_t>>& pred) {
  std::vector<bool> exact(g.states.size(), true);
  std::deque<std::size_t> work;
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    if (!g.states[s].complete) {
      exact[s] = false;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    const std::size_t s = work.front();
    work.pop_front();
    for (auto p : pred[s]) {
      if (exact[p]) {
        exact[p] = false;
        work.push_back(p);
      }
    }
  }
  return exact;
}

// Marks every state that reaches (in zero or more steps) a seed.
void backward_reach(const std::vector<std::vector<std::size_t>>& pred, std::vector<char>& mark) {
  std::deque<std::size_t> work;
  for (std::size_t s = 0; s < mark.size(); ++s)
    if (mark[s]) work.push_back(s);
  while (!work.empty()) {
    const std::size_t s = work.front();
    work.pop_front();
    for (auto p : pred[s]) {
      if (!mark[p]) {
        mark[p] = 1;
        work.push_back(p);
      }
    }
  }
}

std::vector<Name> pick(std::span<const Name> names, const std::vector<std::size_t>& idx) {
  std::vector<Name> out;
  for (auto i : idx) out.push_back(names[i]);
  return out;
}

}  // namespace

std::vector<Name> barbs(Calculus c, const CanonicalForm& form, std::span<const Name> observables) {
  return pick(observables, barb_indices(c, form, observed_digests(c, observables)));
}

std::vector<Name> barbs(Calculus c, const Term& t, std::span<const Name> observables) {
  return barbs(c, canonicalize(c, t), observables);
}

GraphBarbs graph_barbs(const ReductionGraph& g, std::span<const Name> observables) {
  const auto observed = observed_digests(g.calculus, observables);
  GraphBarbs out;
  for (const auto& s : g.states) out.strong.push_back(barb_indices(g.calculus, s.form, observed));
  out.weak = out.strong;
  const auto succ = g.successors();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = g.states.size(); s-- > 0;) {
      for (auto t : succ[s]) {
        if (subset(out.weak[t], out.weak[s])) continue;
        std::vector<std::size_t> merged;
        std::set_union(out.weak[s].begin(), out.weak[s].end(), out.weak[t].begin(), out.weak[t].end(),
                       std::back_inserter(merged));
        out.weak[s] = std::move(merged);
        changed = true;
      }
    }
  }
  return out;
}

WeakBarbs weak_barbs(Calculus c, const Term& t, std::span<const Name> observables, const Budget& budget) {
  Budget b = budget;
  b.observables.assign(observables.begin(), observables.end());
  const ReductionGraph g = explore(c, t, b);
  const GraphBarbs gb = graph_barbs(g, observables);
  return {pick(observables, gb.weak[0]), g.truncated};
}

BisimVerdict bounded_bisim(Calculus lc, const Term& l, Calculus rc, const Term& r, std::span<const Name> observables,
                           std::span<const Name> right_observables, const BisimOptions& opts) {
  if (right_observables.empty()) right_observables = observables;
  if (right_observables.size() != observables.size())
    throw SemanticError("observable renaming must map each left name to exactly one right name");

  BisimVerdict v;
  Budget lb = opts.left_budget, rb = opts.right_budget;
  lb.observables.assign(observables.begin(), observables.end());
  rb.observables.assign(right_observables.begin(), right_observables.end());
  v.left = explore(lc, l, lb);
  v.right = explore(rc, r, rb);
  v.bounded = v.left.truncated || v.right.truncated;

  const std::size_t nl = v.left.states.size(), nr = v.right.states.size();
  if (nl * nr > 50'000'000) throw SemanticError("bisimulation product too large; lower the budgets");

  const GraphBarbs bl = graph_barbs(v.left, observables);
  const GraphBarbs br = graph_barbs(v.right, right_observables);
  const auto succ_l = v.left.successors(), succ_r = v.right.successors();
  const auto pred_l = predecessors(v.left), pred_r = predecessors(v.right);
  const auto exact_l = exact_closure(v.left, pred_l), exact_r = exact_closure(v.right, pred_r);

  struct Cause {
    int kind = 0;  // 0 related, 1 barbs, 2 left move unmatched, 3 right move unmatched
    std::size_t target = 0;
    std::size_t round = 0;
  };
  std::vector<std::vector<Cause>> cause(nl, std::vector<Cause>(nr));
  std::vector<std::vector<char>> rel(nl, std::vector<char>(nr, 1));

  for (std::size_t s = 0; s < nl; ++s) {
    for (std::size_t q = 0; q < nr; ++q) {
      bool ok;
      if (opts.strict) {
        ok = bl.strong[s] == br.strong[q];
      } else {
        ok = (!exact_r[q] || subset(bl.strong[s], br.weak[q])) && (!exact_l[s] || subset(br.strong[q], bl.weak[s]));
      }
      if (!ok) {
        rel[s][q] = 0;
        cause[s][q] = {1, 0, 0};
      }
    }
  }

  // can_r[s'][q]: q can answer with a move into some q' related to s'.
  for (std::size_t round = 1;; ++round) {
    std::vector<std::vector<char>> can_r(nl), can_l(nr);
    for (std::size_t s2 = 0; s2 < nl; ++s2) {
      std::vector<char> mark(nr, 0);
      for (std::size_t q = 0; q < nr; ++q) mark[q] = rel[s2][q] || !v.right.states[q].complete;
      if (opts.strict) {
        std::vector<char> pre(nr, 0);
        for (std::size_t q = 0; q < nr; ++q) {
          if (!v.right.states[q].complete) pre[q] = 1;
          for (auto q2 : succ_r[q])
            if (mark[q2]) pre[q] = 1;
        }
        can_r[s2] = std::move(pre);
      } else {
        backward_reach(pred_r, mark);
        can_r[s2] = std::move(mark);
      }
    }
    for (std::size_t q2 = 0; q2 < nr; ++q2) {
      std::vector<char> mark(nl, 0);
      for (std::size_t s = 0; s < nl; ++s) mark[s] = rel[s][q2] || !v.left.states[s].complete;
      if (opts.strict) {
        std::vector<char> pre(nl, 0);
        for (std::size_t s = 0; s < nl; ++s) {
          if (!v.left.states[s].complete) pre[s] = 1;
          for (auto s2 : succ_l[s])
            if (mark[s2]) pre[s] = 1;
        }
        can_l[q2] = std::move(pre);
      } else {
        backward_reach(pred_l, mark);
        can_l[q2] = std::move(mark);
      }
    }

    std::vector<std::pair<std::size_t, std::size_t>> removed;
    for (std::size_t s = 0; s < nl; ++s) {
      for (std::size_t q = 0; q < nr; ++q) {
        if (!rel[s][q]) continue;
        if (v.left.states[s].complete) {
          for (std::size_t e = 0; e < v.left.edges.size(); ++e) {
            const auto& edge = v.left.edges[e];
            if (edge.from != s || can_r[edge.to][q]) continue;
            cause[s][q] = {2, e, round};
            removed.emplace_back(s, q);
            break;
          }
          if (cause[s][q].kind) continue;
        }
        if (v.right.states[q].complete) {
          for (std::size_t e = 0; e < v.right.edges.size(); ++e) {
            const auto& edge = v.right.edges[e];
            if (edge.from != q || can_l[edge.to][s]) continue;
            cause[s][q] = {3, e, round};
            removed.emplace_back(s, q);
            break;
          }
        }
      }
    }
    if (removed.empty()) break;
    for (auto [s, q] : removed) rel[s][q] = 0;
  }

  for (const auto& row : rel) v.relation_pairs += static_cast<std::size_t>(std::count(row.begin(), row.end(), 1));
  v.related = rel[0][0];
  if (v.related) {
    v.reason = v.bounded ? "some states were related optimistically at the exploration budget" : "every explored state matched";
    return v;
  }

  // Walk the removal causes back to a pair with differing barbs.
  std::size_t s = 0, q = 0;
  for (std::size_t guard = 0; guard <= nl * nr; ++guard) {
    const Cause c = cause[s][q];
    if (c.kind == 1) break;
    if (c.kind == 2) {
      const auto& e = v.left.edges[c.target];
      v.witness.push_back({true, e.from, e.to, e.redex});
      s = e.to;
      if (opts.strict) {
        const GraphEdge* answer = nullptr;
        for (const auto& re : v.right.edges)
          if (re.from == q) answer = &re;
        if (!answer) {
          v.reason = "right process cannot answer a left step";
          break;
        }
        v.witness.push_back({false, answer->from, answer->to, answer->redex});
        q = answer->to;
      }
    } else {
      const auto& e = v.right.edges[c.target];
      v.witness.push_back({false, e.from, e.to, e.redex});
      q = e.to;
      if (opts.strict) {
        const GraphEdge* answer = nullptr;
        for (const auto& le : v.left.edges)
          if (le.from == s) answer = &le;
        if (!answer) {
          v.reason = "left process cannot answer a right step";
          break;
        }
        v.witness.push_back({true, answer->from, answer->to, answer->redex});
        s = answer->to;
      }
    }
  }
  v.witness_left = s;
  v.witness_right = q;
  if (v.reason.empty()) {
    if (opts.strict) {
      v.only_left = pick(observables, minus(bl.strong[s], br.strong[q]));
      v.only_right = pick(right_observables, minus(br.strong[q], bl.strong[s]));
    } else {
      v.only_left = pick(observables, minus(bl.strong[s], br.weak[q]));
      v.only_right = pick(right_observables, minus(br.strong[q], bl.weak[s]));
    }
    v.reason = "barbs differ at left state " + std::to_string(s) + " and right state " + std::to_string(q);
  }
  return v;
}

}  // namespace rhocomb

#include <doctest.h>

#include <algorithm>
#include <map>

#include "rhocomb/encodings.hpp"
#include "rhocomb/reduction.hpp"
#include "rhocomb/syntax.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rhocomb;
using namespace rhocomb::testing;

namespace {

Term Y(const char* s) { return parse(Calculus::Yoshida, s); }
Term RC(const char* s) { return parse(Calculus::RhoComb, s); }

// One step from `lhs` must be the only step, and must land on `rhs`.
void check_rule(Calculus c, const char* lhs, const char* rhs, Rule rule) {
  const Term l = parse(c, lhs), r = parse(c, rhs);
  const auto redexes = find_redexes(c, l);
  REQUIRE_MESSAGE(redexes.size() == 1, lhs);
  CHECK(redexes[0].rule == rule);
  const CanonicalForm out = step(c, l, redexes[0]);
  CHECK_MESSAGE(out.term->digest() == canonicalize(c, r).term->digest(), lhs, " gave ", print(out.term));
}

}  // namespace

TEST_SUITE("rewrite rules") {
  TEST_CASE("Yoshida") {
    check_rule(Calculus::Yoshida, "d(a,b,c) | m(a,x)", "m(b,x) | m(c,x)", Rule::Dup);
    check_rule(Calculus::Yoshida, "k(a) | m(a,x)", "0", Rule::Kill);
    check_rule(Calculus::Yoshida, "fw(a,b) | m(a,x)", "m(b,x)", Rule::Fwd);
    check_rule(Calculus::Yoshida, "br(a,b) | m(a,x)", "fw(b,x)", Rule::BindR);
    check_rule(Calculus::Yoshida, "bl(a,b) | m(a,x)", "fw(x,b)", Rule::BindL);
    check_rule(Calculus::Yoshida, "s(a,b,c) | m(a,x)", "fw(b,c)", Rule::Sync);
    check_rule(Calculus::Yoshida, "*m(a,x)", "m(a,x) | *m(a,x)", Rule::Unfold);
  }

  TEST_CASE("RHO combinators") {
    check_rule(Calculus::RhoComb, "d(a,b,c) | m(a,k(e))", "m(b,k(e)) | m(c,k(e))", Rule::Dup);
    check_rule(Calculus::RhoComb, "k(a) | m(a,k(e))", "0", Rule::Kill);
    check_rule(Calculus::RhoComb, "fw(a,b) | m(a,k(e))", "m(b,k(e))", Rule::Fwd);
    check_rule(Calculus::RhoComb, "br(a,b) | m(a,k(e))", "fw(b,@(k(e)))", Rule::BindR);
    check_rule(Calculus::RhoComb, "bl(a,b) | m(a,k(e))", "fw(@(k(e)),b)", Rule::BindL);
    check_rule(Calculus::RhoComb, "s(a,b,c) | m(a,k(e))", "fw(b,c)", Rule::Sync);
    check_rule(Calculus::RhoComb, "*(a) | m(a,k(e))", "k(e)", Rule::Drop);
  }

  TEST_CASE("pi and rho communication") {
    check_rule(Calculus::Pi, "for(y <- x)y!(b) | x!(v)", "v!(b)", Rule::Comm);
    check_rule(Calculus::Pi, "(new x)(for(y <- x)y!(b) | x!(v))", "v!(b)", Rule::Comm);
    // the body's drop of the received name is a drop of a quote, ≡ the payload
    check_rule(Calculus::Rho, "for(y <- @0)*y | @0!(k!(0))", "k!(0)", Rule::Comm);
    check_rule(Calculus::Rho, "for(y <- @0)*y | @0!(0)", "*(@0)", Rule::Comm);
  }
}

TEST_SUITE("find_redexes") {
  TEST_CASE("examples") {
    CHECK(find_redexes(Calculus::Yoshida, Y("d(a,b,c) | m(a,x)")).size() == 1);
    CHECK(find_redexes(Calculus::Yoshida, Y("k(a) | m(b,x)")).empty());
    // *(@0) is congruent to 0; the message on @0 still fires
    const auto r = find_redexes(Calculus::RhoComb, RC("*(@0) | m(@0,k(e))"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].rule == Rule::Drop);
  }

  TEST_CASE("channels match up to name equivalence") {
    CHECK(find_redexes(Calculus::RhoComb, RC("k(@(0|k(a))) | m(@(k(a)),0)")).size() == 1);
    CHECK(find_redexes(Calculus::Rho, parse(Calculus::Rho, "for(y <- @(*x))0 | x!(0)")).size() == 1);
  }

  TEST_CASE("a drop fires on a quoted channel whose referent is present") {
    // m(@Q, P) | Q, with Q = k(a): the drop of @Q was opened by *(@Q) ≡ Q
    const auto r = find_redexes(Calculus::RhoComb, RC("m(@(k(a)),fw(b,c)) | *(@(k(a)))"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].rule == Rule::Drop);
    CHECK(step(Calculus::RhoComb, RC("m(@(k(a)),fw(b,c)) | *(@(k(a)))"), r[0]).term->digest() ==
          canonicalize(Calculus::RhoComb, RC("fw(b,c)")).term->digest());
  }

  TEST_CASE("stale redexes are rejected") {
    const auto r = find_redexes(Calculus::Yoshida, Y("d(a,b,c) | m(a,x)"));
    REQUIRE(r.size() == 1);
    CHECK_THROWS_AS(step(Calculus::Yoshida, Y("d(a,b,c)"), r[0]), SemanticError);
  }
}

TEST_SUITE("reduce") {
  TEST_CASE("deterministic examples") {
    CHECK(reduce_deterministic(Calculus::Yoshida, zero()).steps.empty());
    CHECK(explore(Calculus::Yoshida, zero()).edges.empty());
    const Trace t = reduce_deterministic(Calculus::Yoshida, Y("fw(a,b) | m(a,x)"));
    REQUIRE(t.steps.size() == 1);
    CHECK(t.final_state.term->digest() == Y("m(b,x)")->digest());
    CHECK_FALSE(t.truncated);
  }

  TEST_CASE("replication unfolding replay") {
    const Name x = atom("x"), v = atom("v"), w = atom("w");
    const Term body = RC("m(u,0)");
    const ReplicationReplay r = replay_replication(body, x, v, w);
    REQUIRE(r.trace.steps.size() == 3);
    CHECK(r.trace.steps[0].redex.rule == Rule::Dup);
    CHECK(r.trace.steps[1].redex.rule == Rule::Fwd);
    CHECK(r.trace.steps[2].redex.rule == Rule::Drop);
    CHECK(r.matches);
    CHECK(r.trace.final_state.digest == canonicalize(Calculus::RhoComb, par(replicate(body, x, v, w), body)).digest);
  }

  TEST_CASE("the replication replay is a path of the exhaustive graph") {
    const Term start = replicate(RC("m(u,0)"), atom("x"), atom("v"), atom("w"));
    const ReplicationReplay r = replay_replication(RC("m(u,0)"), atom("x"), atom("v"), atom("w"));
    const ReductionGraph g = explore(Calculus::RhoComb, start, Budget{3, 2, 100, false, {}});
    std::size_t at = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const Digest next = i + 1 < 3 ? r.trace.steps[i + 1].state.digest : r.trace.final_state.digest;
      bool found = false;
      for (const auto& e : g.edges) {
        if (e.from == at && g.states[e.to].form.digest == next) {
          at = e.to;
          found = true;
          break;
        }
      }
      REQUIRE(found);
    }
  }

  TEST_CASE("the deterministic strategy is deterministic") {
    Gen gen(31);
    for (int i = 0; i < 60; ++i) {
      const Term t = gen.yoshida_soup(5);
      const Trace a = reduce_deterministic(Calculus::Yoshida, t, Budget{10, 2, 100, false, {}});
      const Trace b = reduce_deterministic(Calculus::Yoshida, t, Budget{10, 2, 100, false, {}});
      REQUIRE(a.steps.size() == b.steps.size());
      for (std::size_t k = 0; k < a.steps.size(); ++k) CHECK(a.steps[k].state.digest == b.steps[k].state.digest);
      CHECK(a.final_state.digest == b.final_state.digest);
    }
  }

  TEST_CASE("unfold budget keeps graphs finite") {
    const ReductionGraph g = explore(Calculus::Yoshida, Y("*m(a,b)"), Budget{20, 2, 100, false, {}});
    CHECK(g.states.size() == 3);
    CHECK(g.truncated);
  }

  TEST_CASE("step commutes with canonicalization") {
    Gen gen(32);
    for (int i = 0; i < 200; ++i) {
      const Calculus c = i % 2 ? Calculus::Yoshida : Calculus::RhoComb;
      const Term t = c == Calculus::Yoshida ? gen.yoshida_soup(4) : gen.components(c, 4, 2);
      Scrambler s(c, gen);
      const Term u = s(t);
      std::multiset<Digest> a, b;
      for (const auto& r : find_redexes(c, t)) a.insert(step(c, t, r).digest);
      for (const auto& r : find_redexes(c, u)) b.insert(step(c, u, r).digest);
      CHECK(a == b);
    }
  }

  TEST_CASE("payloads travel intact through d and fw") {
    Gen gen(33);
    for (int i = 0; i < 100; ++i) {
      const Term payload = canonicalize(Calculus::RhoComb, gen.term(Calculus::RhoComb, 3)).term;
      for (const Term& agent : {RC("d(@(k(q)),b,c)"), RC("fw(@(k(q)),b)")}) {
        const Term t = par(agent, msg(parse_name(Calculus::RhoComb, "@(k(q))"), payload));
        for (const auto& r : find_redexes(Calculus::RhoComb, t)) {
          if (r.rule != Rule::Dup && r.rule != Rule::Fwd) continue;
          const Soup soup = open_soup(canonicalize(Calculus::RhoComb, t));
          for (const auto& part : flatten_parts(contractum(Calculus::RhoComb, soup, r))) {
            REQUIRE(part->kind() == Kind::Msg);
            CHECK(canonicalize(Calculus::RhoComb, part->child(0)).digest ==
                  canonicalize(Calculus::RhoComb, payload).digest);
          }
        }
      }
    }
  }
}

TEST_SUITE("polarities") {
  TEST_CASE("signature") {
    const PolarityReport rep = check_polarities(Calculus::Yoshida, Y("d(a,b,c) | m(a,v)"));
    CHECK(rep.consistent);
    auto pols = [&](const char* id) {
      const auto* e = rep.lookup(Calculus::Yoshida, atom(id));
      REQUIRE(e);
      auto p = e->polarities;
      std::sort(p.begin(), p.end());
      return p;
    };
    CHECK(pols("a") == std::vector<Polarity>{Polarity::Plus, Polarity::Minus});
    CHECK(pols("b") == std::vector<Polarity>{Polarity::Plus});
    CHECK(pols("c") == std::vector<Polarity>{Polarity::Plus});
    CHECK(pols("v") == std::vector<Polarity>{Polarity::Both});
    CHECK(check_polarities(Calculus::Yoshida, zero()).occurrences.empty());
  }

  TEST_CASE("library signature matches the reference table") {
    for (Kind k : {Kind::Msg, Kind::Dup, Kind::Kill, Kind::Fwd, Kind::BindR, Kind::BindL, Kind::Sync}) {
      for (std::size_t i = 0; i < (k == Kind::Msg ? 2 : combinator_arity(k)); ++i) {
        const Pol ref = signature(k, i);
        const Polarity lib = signature_polarity(k, i);
        CHECK(static_cast<int>(lib) == static_cast<int>(ref));
      }
    }
  }

  TEST_CASE("d(a-,b+,c+) | m(a+,v) reduces with b and c kept positive") {
    const Term t = Y("d(a,b,c) | m(a,v)");
    const auto r = find_redexes(Calculus::Yoshida, t);
    REQUIRE(r.size() == 1);
    const PolarityReport rep = check_polarities(Calculus::Yoshida, step(Calculus::Yoshida, t, r[0]).term);
    for (const char* id : {"b", "c"}) {
      const auto* e = rep.lookup(Calculus::Yoshida, atom(id));
      REQUIRE(e);
      for (auto p : e->polarities) CHECK(p == Polarity::Plus);
    }
  }

  TEST_CASE("preserved by every enabled redex") {
    Gen gen(34);
    std::size_t checked = 0;
    for (int i = 0; i < 300; ++i) {
      const Term t = gen.yoshida_soup(2 + gen.below(5));
      const CanonicalForm form = canonicalize(Calculus::Yoshida, t);
      const Soup soup = open_soup(form);
      for (const auto& r : find_redexes(Calculus::Yoshida, form, soup)) {
        if (r.rule == Rule::Unfold) continue;
        CHECK_MESSAGE(polarity_preserved(form, soup, r, checked), print(t));
      }
    }
    CHECK(checked > 300);
  }
}

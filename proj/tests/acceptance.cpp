// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Run with a criterion number to run only that one.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "rhocomb/encodings.hpp"
#include "rhocomb/equivalence.hpp"
#include "rhocomb/syntax.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rhocomb;
using namespace rhocomb::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

bool congruent(Calculus c, const Term& a, const Term& b) {
  return canonicalize(c, a).digest == canonicalize(c, b).digest;
}

bool binder_free(const Term& t) { return !contains_kind(t, Kind::New) && !contains_kind(t, Kind::Repl); }

// 1. The fourteen single-step rewrite rules.
Outcome golden_rewrites() {
  struct Case {
    Calculus c;
    const char* lhs;
    const char* rhs;
    Rule rule;
  };
  const Case cases[] = {
      {Calculus::Yoshida, "d(a,b,c) | m(a,x)", "m(b,x) | m(c,x)", Rule::Dup},
      {Calculus::Yoshida, "k(a) | m(a,x)", "0", Rule::Kill},
      {Calculus::Yoshida, "fw(a,b) | m(a,x)", "m(b,x)", Rule::Fwd},
      {Calculus::Yoshida, "br(a,b) | m(a,x)", "fw(b,x)", Rule::BindR},
      {Calculus::Yoshida, "bl(a,b) | m(a,x)", "fw(x,b)", Rule::BindL},
      {Calculus::Yoshida, "s(a,b,c) | m(a,x)", "fw(b,c)", Rule::Sync},
      {Calculus::Yoshida, "*m(a,x)", "m(a,x) | *m(a,x)", Rule::Unfold},
      {Calculus::RhoComb, "d(a,b,c) | m(a,k(e))", "m(b,k(e)) | m(c,k(e))", Rule::Dup},
      {Calculus::RhoComb, "k(a) | m(a,k(e))", "0", Rule::Kill},
      {Calculus::RhoComb, "fw(a,b) | m(a,k(e))", "m(b,k(e))", Rule::Fwd},
      {Calculus::RhoComb, "br(a,b) | m(a,k(e))", "fw(b,@(k(e)))", Rule::BindR},
      {Calculus::RhoComb, "bl(a,b) | m(a,k(e))", "fw(@(k(e)),b)", Rule::BindL},
      {Calculus::RhoComb, "s(a,b,c) | m(a,k(e))", "fw(b,c)", Rule::Sync},
      {Calculus::RhoComb, "*(a) | m(a,k(e))", "k(e)", Rule::Drop},
  };
  Outcome out;
  const auto start = Clock::now();
  int passed = 0;
  for (const auto& k : cases) {
    const Term l = parse(k.c, k.lhs);
    const auto reds = find_redexes(k.c, l);
    if (reds.size() != 1 || reds[0].rule != k.rule) {
      out.fail(std::string("wrong redexes for ") + k.lhs);
      continue;
    }
    if (!congruent(k.c, step(k.c, l, reds[0]).term, parse(k.c, k.rhs))) {
      out.fail(std::string("wrong contractum for ") + k.lhs);
      continue;
    }
    ++passed;
  }
  const double secs = seconds_since(start);
  if (secs >= 1.0) out.fail("took " + std::to_string(secs) + " s");
  if (out.pass) out.detail = std::to_string(passed) + "/14 rules in " + std::to_string(secs) + " s";
  return out;
}

// 2. Replaying *_(x,v,w) P.
Outcome replication_replay() {
  Outcome out;
  const auto r = replay_replication(parse(Calculus::RhoComb, "m(u,0)"), atom("x"), atom("v"), atom("w"));
  std::string rules;
  for (const auto& s : r.trace.steps) rules += (rules.empty() ? "" : " ") + std::string(to_string(s.redex.rule));
  if (r.trace.steps.size() != 3) out.fail("trace has " + std::to_string(r.trace.steps.size()) + " steps");
  if (!r.matches) out.fail("final state differs from *_(x,v,w) P | P");
  if (rules != "d fw drop") out.fail("rule sequence " + rules);
  if (out.pass) out.detail = "3 steps (" + rules + ") ending in *_(x,v,w) P | P";
  return out;
}

// 3. Quote freshness and distinct derived names.
Outcome freshness() {
  Outcome out;
  Gen gen(3003);
  int terms = 0;
  for (int i = 0; i < 1000; ++i) {
    const Term t = gen.term(Calculus::RhoComb, 1 + static_cast<int>(gen.below(6)));
    const Name self = quote(t);
    for (const auto& n : names_in(t))
      if (n == self) out.fail("@P occurs in " + print(t));
    const Term ct = canonicalize(Calculus::RhoComb, t).term;
    const Name cself = quote(ct);
    for (const auto& n : names_in(ct))
      if (name_equiv(Calculus::RhoComb, n, cself)) out.fail("@P equivalent to a name of canonical " + print(ct));
    const Name x = gen.name(Calculus::RhoComb, 1 + static_cast<int>(gen.below(6)));
    const Name l = left_name(Calculus::RhoComb, x), r = right_name(Calculus::RhoComb, x);
    if (name_equiv(Calculus::RhoComb, l, r) || name_equiv(Calculus::RhoComb, l, x) ||
        name_equiv(Calculus::RhoComb, r, x))
      out.fail("x^l, x^r, x not distinct for " + print(x));
    ++terms;
  }
  if (out.pass) out.detail = std::to_string(terms) + " random terms, depth <= 6";
  return out;
}

// 4. Structural congruence against the brute-force decision.
Outcome congruence_oracle() {
  Outcome out;
  Gen gen(4004);
  int pairs = 0, yes = 0;
  for (int i = 0; i < 600; ++i) {
    const Calculus c = static_cast<Calculus>(i % 4);
    const Term a = gen.components(c, 1 + gen.below(5), 3);
    Scrambler s(c, gen);
    Term b = s(a);
    if (gen.chance(0.5)) b = mutate(c, b, gen);
    const bool lib = struct_congruent(c, a, b);
    const bool ref = CongruenceOracle(c).congruent(a, b);
    if (lib != ref) out.fail(std::string(to_string(c)) + ": " + print(a) + " vs " + print(b));
    ++pairs;
    yes += ref;
  }
  if (yes == 0 || yes == pairs) out.fail("degenerate sample");
  if (out.pass) out.detail = std::to_string(pairs) + " pairs, " + std::to_string(yes) + " congruent";
  return out;
}

// 5. Drop-of-quote laws.
Outcome drop_quote() {
  Outcome out;
  Gen gen(5005);
  for (int i = 0; i < 300; ++i) {
    const Term p = gen.term(Calculus::RhoComb, 4);
    if (!struct_congruent(Calculus::RhoComb, drop(quote(p)), p)) out.fail("*(@P) not congruent to P for " + print(p));
    const Name x = gen.name(Calculus::Rho, 3);
    if (!name_equiv(Calculus::Rho, quote(drop(x)), x)) out.fail("@(*x) not equivalent to x for " + print(x));
  }
  if (out.pass) out.detail = "300 RHO-combinator terms, 300 rho names";
  return out;
}

// 6. Polarities are preserved by reduction.
Outcome polarity() {
  Outcome out;
  Gen gen(6006);
  std::size_t checked = 0, redexes = 0;
  for (int i = 0; i < 500; ++i) {
    const Term t = gen.yoshida_soup(2 + gen.below(5));
    const CanonicalForm form = canonicalize(Calculus::Yoshida, t);
    const Soup soup = open_soup(form);
    const bool consistent = check_polarities(Calculus::Yoshida, t).consistent;
    for (const auto& r : find_redexes(Calculus::Yoshida, form, soup)) {
      if (r.rule == Rule::Unfold) continue;
      ++redexes;
      if (!polarity_preserved(form, soup, r, checked)) out.fail("redex on " + print(t));
      const Term next = step(Calculus::Yoshida, form, soup, r).term;
      if (consistent && !check_polarities(Calculus::Yoshida, next).consistent)
        out.fail("consistency lost after a step of " + print(t));
    }
  }
  if (redexes < 300) out.fail("only " + std::to_string(redexes) + " redexes exercised");
  if (out.pass)
    out.detail = "500 terms, " + std::to_string(redexes) + " redexes, " + std::to_string(checked) + " occurrences";
  return out;
}

// 7. Golden translations and binder freedom.
Outcome translations() {
  Outcome out;
  auto golden = [&](const char* pi, const char* y) {
    if (!congruent(Calculus::Yoshida, pi_to_yoshida(parse(Calculus::Pi, pi)), parse(Calculus::Yoshida, y)))
      out.fail(std::string(pi) + " does not translate to " + y);
  };
  golden("for(x <- a)0", "k(a)");
  golden("for(x <- a)v!(x)", "fw(a,v)");
  golden("for(x <- a)for(y <- x)v!(y)", "bl(a,v)");
  golden("for(x <- a)for(y <- v)x!(y)", "br(a,v)");
  for (const char* y : {"k(a)", "d(a,b,c)", "fw(a,b)", "br(a,b)", "bl(a,b)", "s(a,b,c)"}) {
    if (!congruent(Calculus::RhoComb, yoshida_to_rhocomb(parse(Calculus::Yoshida, y)), parse(Calculus::RhoComb, y)))
      out.fail(std::string(y) + " is not passed through");
  }
  if (!congruent(Calculus::RhoComb, yoshida_to_rhocomb(parse(Calculus::Yoshida, "m(a,b)")),
                 parse(Calculus::RhoComb, "m(a,*(b))")))
    out.fail("m(a,b) does not become m(a,*(b))");

  Gen gen(7007);
  int corpus = 0;
  for (int i = 0; i < 50; ++i) {
    const Term t = gen.translatable(Calculus::Pi, 3);
    const Term rc = pi_to_rhocomb(t);
    const Term r = pi_to_rho(t);
    if (!binder_free(rc) || !binder_free(r)) out.fail("binder survives in the image of " + print(t));
    ++corpus;
  }
  if (out.pass) out.detail = "rules III VII VIII IX, pass-through, " + std::to_string(corpus) + "-term corpus binder-free";
  return out;
}

// 8. Translations are related to their sources.
Outcome faithfulness() {
  Outcome out;
  const auto start = Clock::now();
  const BisimOptions opts{source_budget(), image_budget(), false};
  int related = 0;
  bool bounded = false;
  for (const char* s : kFaithfulnessCorpus) {
    const Term t = parse(Calculus::Pi, s);
    const auto fn = free_names(Calculus::Pi, t);
    std::vector<Name> inj;
    for (const auto& f : fn) inj.push_back(inject_atom(f));
    const auto rho = bounded_bisim(Calculus::Pi, t, Calculus::Rho, pi_to_rho(t), fn, {}, opts);
    const auto rc = bounded_bisim(Calculus::Pi, t, Calculus::RhoComb, pi_to_rhocomb(t), fn, inj, opts);
    if (!rho.related) out.fail(std::string(s) + " vs its rho image: " + rho.reason);
    if (!rc.related) out.fail(std::string(s) + " vs its RHO-combinator image: " + rc.reason);
    bounded = bounded || rho.bounded || rc.bounded;
    related += rho.related && rc.related;
  }
  int distinguished = 0;
  for (const auto& [l, r] : kInequivalentPairs) {
    const Term a = parse(Calculus::Pi, l), b = parse(Calculus::Pi, r);
    const auto fn = free_names(Calculus::Pi, a);
    std::vector<Name> inj;
    for (const auto& f : fn) inj.push_back(inject_atom(f));
    // The same pairs, with the right-hand side given by its images.
    const bool told_apart = !bounded_bisim(Calculus::Pi, a, Calculus::Pi, b, fn).related &&
                            !bounded_bisim(Calculus::Pi, a, Calculus::Rho, pi_to_rho(b), fn, {}, opts).related &&
                            !bounded_bisim(Calculus::Pi, a, Calculus::RhoComb, pi_to_rhocomb(b), fn, inj, opts).related;
    if (!told_apart)
      out.fail(std::string(l) + " and " + r + " are not told apart");
    else
      ++distinguished;
  }
  const double secs = seconds_since(start);
  if (kFaithfulnessCorpus.size() < 30) out.fail("corpus too small");
  if (secs >= 60.0) out.fail("took " + std::to_string(secs) + " s");
  if (out.pass)
    out.detail = std::to_string(related) + "/" + std::to_string(kFaithfulnessCorpus.size()) +
                 " terms related to both images at depth 8, " + std::to_string(distinguished) +
                 " inequivalent pairs distinguished, " + std::to_string(secs) + " s" +
                 (bounded ? ", some image states bounded" : "");
  return out;
}

// 9. The two allocation programs.
Outcome allocation_programs() {
  Outcome out;
  const AllocatorPair np{atom("n"), atom("p")};
  const Term single = pi_to_rho(parse(Calculus::Pi, "(new v)u!(v)"), np);
  const Term nested = pi_to_rho(parse(Calculus::Pi, "(new v)(new v)u!(v)"), np);
  if (!congruent(Calculus::Rho, single, parse(Calculus::Rho, "for(v <- p)(u!(v)) | p!(n)")))
    out.fail("single allocation printed as " + print(single));
  if (!congruent(Calculus::Rho, nested,
                 parse(Calculus::Rho, "for(v <- p)(for(v <- @(p!(p)))(u!(v)) | @(p!(p))!(@(n!(n)))) | p!(n)")))
    out.fail("nested allocation printed as " + print(nested));
  const std::vector<Name> u{atom("u")};
  const auto v = bounded_bisim(Calculus::Rho, single, Calculus::Rho, nested, u, {},
                               BisimOptions{image_budget(), image_budget(), false});
  if (!v.related) out.fail("not related: " + v.reason);
  if (v.left.states.size() == v.right.states.size()) out.fail("state counts coincide");
  if (out.pass)
    out.detail = "related over {u}, " + std::to_string(v.left.states.size()) + " vs " +
                 std::to_string(v.right.states.size()) + " states";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"golden rewrite rules", golden_rewrites},
      {"replication replay", replication_replay},
      {"freshness", freshness},
      {"congruence against brute force", congruence_oracle},
      {"drop of quote", drop_quote},
      {"polarity preservation", polarity},
      {"translation rules and binder freedom", translations},
      {"source and images related", faithfulness},
      {"allocation programs", allocation_programs},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && only != static_cast<int>(i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}

#include <doctest.h>

#include "rhocomb/congruence.hpp"
#include "rhocomb/syntax.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rhocomb;
using namespace rhocomb::testing;

namespace {

Term P(const char* s) { return parse(Calculus::Pi, s); }
Term Y(const char* s) { return parse(Calculus::Yoshida, s); }
Term R(const char* s) { return parse(Calculus::Rho, s); }
Term RC(const char* s) { return parse(Calculus::RhoComb, s); }

std::set<std::string> atom_ids(const std::vector<Name>& ns) {
  std::set<std::string> out;
  for (const auto& n : ns)
    if (n.is_atom()) out.insert(n.id());
  return out;
}

std::set<std::string> free_atom_names(Calculus c, const Term& t) { return atom_ids(free_names(c, t)); }

}  // namespace

TEST_SUITE("free names") {
  TEST_CASE("examples") {
    CHECK(free_atom_names(Calculus::Yoshida, Y("(new b)m(a,b)")) == std::set<std::string>{"a"});
    for (auto c : {Calculus::Pi, Calculus::Yoshida, Calculus::Rho, Calculus::RhoComb})
      CHECK(free_names(c, zero()).empty());
    const Term t = P("for(x <- a)a!(x)");
    CHECK(free_atom_names(Calculus::Pi, t) == std::set<std::string>{"a"});
    CHECK(free_atom_names(Calculus::Pi, t) == free_atoms_oracle(t));
  }

  TEST_CASE("quoted names count once, up to name equivalence") {
    const auto fn = free_names(Calculus::RhoComb, RC("k(@(0|k(a))) | fw(@(k(a)), b)"));
    CHECK(fn.size() == 2);
    const auto rho = free_names(Calculus::Rho, R("@(*x)!(0) | *x"));
    REQUIRE(rho.size() == 1);
    CHECK(rho[0] == atom("x"));
  }

  TEST_CASE("agrees with the scope-walking scanner on random pi and Yoshida terms") {
    Gen gen(11);
    for (int i = 0; i < 400; ++i) {
      const Calculus c = i % 2 ? Calculus::Pi : Calculus::Yoshida;
      const Term t = gen.term(c, 5);
      CHECK_MESSAGE(free_atom_names(c, t) == free_atoms_oracle(t), print(t));
    }
  }

  TEST_CASE("invariant under congruent rearrangement") {
    Gen gen(12);
    for (int i = 0; i < 300; ++i) {
      const Calculus c = static_cast<Calculus>(i % 4);
      const Term t = gen.term(c, 4);
      Scrambler scramble(c, gen);
      const Term u = scramble(t);
      REQUIRE(struct_congruent(c, t, u));
      const auto a = free_names(c, t), b = free_names(c, u);
      REQUIRE_MESSAGE(a.size() == b.size(), print(t), "  vs  ", print(u));
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(name_equiv(c, a[k], b[k]));
    }
  }
}

TEST_SUITE("substitution") {
  TEST_CASE("plain replacement") {
    CHECK(alpha_equiv(Calculus::Yoshida, substitute(Calculus::Yoshida, Y("m(a,x)"), atom("x"), atom("b")),
                      Y("m(a,b)")));
  }

  TEST_CASE("renames a capturing binder") {
    const Term out = substitute(Calculus::Yoshida, Y("(new b)m(x,b)"), atom("x"), atom("b"));
    CHECK(alpha_equiv(Calculus::Yoshida, out, Y("(new c)m(b,c)")));
    REQUIRE(out->kind() == Kind::New);
    CHECK(out->name(0) != atom("b"));
    // FN(output) = (FN(input) \ {x}) ∪ {b}
    CHECK(free_atoms_oracle(out) == std::set<std::string>{"b"});
  }

  TEST_CASE("a process where a name belongs is rejected") {
    const SubstEntry e{atom("x"), SubstValue{zero()}};
    CHECK_THROWS_AS(substitute(Calculus::Yoshida, Y("m(a,x)"), std::span<const SubstEntry>(&e, 1)), SemanticError);
  }

  TEST_CASE("reaches into quotes") {
    const Term out = substitute(Calculus::RhoComb, RC("k(@(k(x)))"), atom("x"), atom("y"));
    CHECK(struct_congruent(Calculus::RhoComb, out, RC("k(@(k(y)))")));
  }

  TEST_CASE("random substitutions match the oracle's free-name arithmetic") {
    Gen gen(13);
    for (int i = 0; i < 300; ++i) {
      const Term t = gen.term(Calculus::Pi, 5);
      const Name x = gen.atom_name(), v = gen.atom_name();
      const Term out = substitute(Calculus::Pi, t, x, v);
      auto expect = free_atoms_oracle(t);
      if (expect.erase(x.id())) expect.insert(v.id());
      CHECK_MESSAGE(free_atoms_oracle(out) == expect, print(t));
    }
  }
}

TEST_SUITE("alpha equivalence") {
  TEST_CASE("examples") {
    CHECK(alpha_equiv(Calculus::Yoshida, Y("(new a)m(x,a)"), Y("(new b)m(x,b)")));
    CHECK_FALSE(alpha_equiv(Calculus::Yoshida, Y("(new a)m(a,a)"), Y("(new b)m(b,x)")));
    CHECK(alpha_equiv(Calculus::Pi, P("for(y <- a)y!(b)"), P("for(z <- a)z!(b)")));
    CHECK_FALSE(alpha_equiv(Calculus::RhoComb, RC("bl(@0,@0)"), RC("bl(@0,@(0|0))")));
    CHECK(alpha_equiv(Calculus::RhoComb, RC("bl(@0,@0)"), RC("bl(@0,@0)")));
  }

  TEST_CASE("consistent renaming of every binder") {
    Gen gen(14);
    for (int i = 0; i < 200; ++i) {
      const Term t = gen.term(Calculus::Pi, 5);
      Term u = t;
      // rename one outermost binder by hand
      if (t->kind() == Kind::New || t->kind() == Kind::Input) {
        std::vector<Name> names(t->names().begin(), t->names().end());
        const std::string z = "zz";
        Term body = rename_oracle(t->child(0), names[0].id(), z);
        names[0] = atom(z);
        u = make_node(t->kind(), names, {body});
      }
      CHECK(alpha_equiv(Calculus::Pi, t, u));
    }
  }
}

TEST_SUITE("name equivalence") {
  TEST_CASE("examples") {
    CHECK(name_equiv(Calculus::Rho, parse_name(Calculus::Rho, "@(*(@0))"), parse_name(Calculus::Rho, "@0")));
    CHECK(name_equiv(Calculus::RhoComb, parse_name(Calculus::RhoComb, "@(0|k(a))"),
                     parse_name(Calculus::RhoComb, "@(k(a)|0)")));
    CHECK_FALSE(name_equiv(Calculus::Pi, atom("a"), atom("b")));
    CHECK_FALSE(name_equiv(Calculus::RhoComb, parse_name(Calculus::RhoComb, "@(k(a))"),
                           parse_name(Calculus::RhoComb, "@(k(b))")));
  }

  TEST_CASE("a quote never equals an atom") {
    CHECK_FALSE(name_equiv(Calculus::RhoComb, atom("a"), parse_name(Calculus::RhoComb, "@(k(a))")));
    // Quote-drop is a ρ law only
    CHECK_FALSE(name_equiv(Calculus::RhoComb, atom("x"), parse_name(Calculus::RhoComb, "@(*(x))")));
    CHECK(name_equiv(Calculus::Rho, atom("x"), parse_name(Calculus::Rho, "@(*(x))")));
  }

  TEST_CASE("invariant under canonicalization of the quoted process") {
    Gen gen(15);
    for (int i = 0; i < 300; ++i) {
      const Calculus c = i % 2 ? Calculus::Rho : Calculus::RhoComb;
      const Term t = gen.term(c, 4);
      const Name q = quote(t), cq = quote(canonicalize(c, t).term);
      CHECK(name_equiv(c, q, cq));
      CHECK(canonical_name(c, q).digest() == canonical_name(c, cq).digest());
    }
  }
}

TEST_SUITE("canonical forms") {
  TEST_CASE("examples") {
    CHECK(canonicalize(Calculus::Yoshida, Y("0 | (k(a) | 0)")).term->digest() == Y("k(a)")->digest());
    CHECK(canonicalize(Calculus::RhoComb, RC("*(@(fw(a,b)))")).term->digest() == RC("fw(a,b)")->digest());
    CHECK(struct_congruent(Calculus::Pi, P("(new x)(new x)a!(x)"), P("(new x)a!(x)")));
    CHECK(struct_congruent(Calculus::Pi, P("a!(b) | c!(d)"), P("c!(d) | a!(b)")));
    CHECK(struct_congruent(Calculus::Pi, P("a!(b) | (new x)x!(c)"), P("(new x)(a!(b) | x!(c))")));
    CHECK_FALSE(struct_congruent(Calculus::Pi, P("*a!(b)"), P("a!(b) | *a!(b)")));
    CHECK_FALSE(struct_congruent(Calculus::Pi, P("a!(x) | (new x)x!(c)"), P("(new x)(a!(x) | x!(c))")));
  }

  TEST_CASE("idempotent") {
    Gen gen(16);
    for (int i = 0; i < 400; ++i) {
      const Calculus c = static_cast<Calculus>(i % 4);
      const CanonicalForm f = canonicalize(c, gen.term(c, 5));
      const CanonicalForm g = canonicalize(c, f.term);
      CHECK(f.digest == g.digest);
      CHECK(f.term->digest() == g.term->digest());
    }
  }

  TEST_CASE("struct_congruent is an equivalence on random triples") {
    Gen gen(17);
    for (int i = 0; i < 200; ++i) {
      const Calculus c = static_cast<Calculus>(i % 4);
      const Term a = gen.term(c, 4);
      Scrambler s(c, gen);
      const Term b = s(a), cc = s(b);
      CHECK(struct_congruent(c, a, a));
      CHECK(struct_congruent(c, a, b) == struct_congruent(c, b, a));
      CHECK(struct_congruent(c, a, b));
      CHECK(struct_congruent(c, b, cc));
      CHECK(struct_congruent(c, a, cc));
      const Term d = mutate(c, a, gen);
      CHECK(struct_congruent(c, a, d) == struct_congruent(c, d, a));
      if (struct_congruent(c, a, d) && struct_congruent(c, d, cc)) CHECK(struct_congruent(c, a, cc));
    }
  }

  TEST_CASE("agrees with the brute-force oracle") {
    Gen gen(18);
    int agree = 0, congruent = 0;
    const int n = 400;
    for (int i = 0; i < n; ++i) {
      const Calculus c = static_cast<Calculus>(i % 4);
      const Term a = gen.components(c, 1 + gen.below(5), 3);
      Scrambler s(c, gen);
      Term b = s(a);
      if (gen.chance(0.5)) b = mutate(c, b, gen);
      const bool lib = struct_congruent(c, a, b);
      const bool ref = CongruenceOracle(c).congruent(a, b);
      CHECK_MESSAGE(lib == ref, to_string(c), ": ", print(a), "  vs  ", print(b));
      agree += lib == ref;
      congruent += ref;
    }
    CHECK(agree == n);
    CHECK(congruent > n / 4);
    CHECK(congruent < n);
  }

  TEST_CASE("quote freshness") {
    Gen gen(19);
    for (int i = 0; i < 300; ++i) {
      const Term t = gen.term(Calculus::RhoComb, 6);
      const Name self = quote(t);
      for (const auto& n : names_in(t)) CHECK(n.digest() != self.digest());
      // up to name equivalence, for the canonical representative
      const Term ct = canonicalize(Calculus::RhoComb, t).term;
      const Name cself = quote(ct);
      for (const auto& n : names_in(ct)) CHECK_FALSE_MESSAGE(name_equiv(Calculus::RhoComb, n, cself), print(ct));
    }
  }

  TEST_CASE("quote freshness fails up to name equivalence on a non-canonical drop") {
    // *(@Q) ≡ Q, so @(*(@Q)) ≡ₙ @Q, and @Q occurs in *(@Q).
    const Term t = RC("*(@(bl(a,d)))");
    CHECK(name_equiv(Calculus::RhoComb, quote(t), parse_name(Calculus::RhoComb, "@(bl(a,d))")));
  }

  TEST_CASE("drop of a quote") {
    Gen gen(20);
    for (int i = 0; i < 300; ++i) {
      const Calculus c = i % 2 ? Calculus::Rho : Calculus::RhoComb;
      const Term t = gen.term(c, 5);
      CHECK(canonicalize(c, drop(quote(t))).digest == canonicalize(c, t).digest);
    }
  }
}

TEST_SUITE("well-formedness") {
  TEST_CASE("calculus grammars") {
    CHECK_THROWS_AS(check_well_formed(Calculus::RhoComb, nu(atom("x"), zero())), SemanticError);
    CHECK_THROWS_AS(check_well_formed(Calculus::Rho, repl(zero())), SemanticError);
    CHECK_THROWS_AS(check_well_formed(Calculus::Yoshida, drop(atom("x"))), SemanticError);
    CHECK_NOTHROW(check_well_formed(Calculus::Pi, P("(new x)for(y <- x)*y!(x)")));
  }
}

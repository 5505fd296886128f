#include <benchmark/benchmark.h>

#include <string>
#include <unordered_map>

#include "rhocomb/encodings.hpp"
#include "rhocomb/equivalence.hpp"
#include "rhocomb/syntax.hpp"

using namespace rhocomb;

namespace {

// n nested restrictions around an output on each bound name.
Term nested_restrictions(int n) {
  std::string text;
  for (int i = 0; i < n; ++i) text += "(new x" + std::to_string(i) + ")";
  text += "(";
  for (int i = 0; i < n; ++i) text += (i ? " | " : "") + std::string("a!(x") + std::to_string(i) + ")";
  return parse(Calculus::Pi, text + ")");
}

// Rebuilds `t` node by node, keeping its sharing but not its caches.
Term fresh_copy(const Term& t, std::unordered_map<const Node*, Term>& memo) {
  if (auto it = memo.find(t.get()); it != memo.end()) return it->second;
  std::vector<Name> names;
  for (const auto& n : t->names()) names.push_back(n.is_atom() ? n : quote(fresh_copy(n.process(), memo)));
  std::vector<Term> kids;
  for (const auto& k : t->children()) kids.push_back(fresh_copy(k, memo));
  return memo[t.get()] = make_node(t->kind(), std::move(names), std::move(kids));
}

void BM_CanonicalizeImage(benchmark::State& state) {
  const Term rc = pi_to_rhocomb(nested_restrictions(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    // A fresh copy each time, so the per-node cache does not answer.
    state.PauseTiming();
    std::unordered_map<const Node*, Term> memo;
    const Term t = fresh_copy(rc, memo);
    state.ResumeTiming();
    benchmark::DoNotOptimize(canonicalize(Calculus::RhoComb, t).digest);
  }
}
BENCHMARK(BM_CanonicalizeImage)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_TranslatePiToRhoComb(benchmark::State& state) {
  const Term t = nested_restrictions(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pi_to_rhocomb(t)->digest());
}
BENCHMARK(BM_TranslatePiToRhoComb)->DenseRange(1, 6)->Unit(benchmark::kMicrosecond);

void BM_ExploreSoup(benchmark::State& state) {
  std::string text = "m(a,x)";
  for (int i = 0; i < state.range(0); ++i) text += " | d(a,a,b) | m(a,y)";
  const Term t = parse(Calculus::Yoshida, text);
  for (auto _ : state) benchmark::DoNotOptimize(explore(Calculus::Yoshida, t, Budget{8, 0, 100000, false, {}}).states.size());
}
BENCHMARK(BM_ExploreSoup)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_BisimSourceAgainstImage(benchmark::State& state) {
  const Term t = parse(Calculus::Pi, "for(x <- a)(b!(x) | c!(x)) | a!(d)");
  const auto fn = free_names(Calculus::Pi, t);
  std::vector<Name> inj;
  for (const auto& f : fn) inj.push_back(inject_atom(f));
  const Term img = pi_to_rhocomb(t);
  const BisimOptions opts{Budget{8, 2, 5000, false, {}}, Budget{300, 2, 6000, true, {}}, false};
  for (auto _ : state) benchmark::DoNotOptimize(bounded_bisim(Calculus::Pi, t, Calculus::RhoComb, img, fn, inj, opts).related);
}
BENCHMARK(BM_BisimSourceAgainstImage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

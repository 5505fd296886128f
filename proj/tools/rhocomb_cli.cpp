// rhocomb: command-line front end for the four calculi.
//
// Exit codes: 0 ok, 1 usage, 2 parse error, 3 semantic error or failed check.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "rhocomb/congruence.hpp"
#include "rhocomb/encodings.hpp"
#include "rhocomb/equivalence.hpp"
#include "rhocomb/reduction.hpp"
#include "rhocomb/serialize.hpp"
#include "rhocomb/syntax.hpp"

using namespace rhocomb;
using json = nlohmann::ordered_json;

namespace {

constexpr int kUsage = 1;
constexpr int kParse = 2;
constexpr int kSemantic = 3;

struct Common {
  std::string calculus = "pi";
  bool json = false;
  int quote_depth = -1;
};

Calculus calculus_of(const std::string& s) {
  if (auto c = parse_calculus(s)) return *c;
  throw CLI::ValidationError("calculus", "unknown calculus '" + s + "' (pi, yoshida, rho, rhocomb)");
}

std::string read_source(const std::string& arg) {
  if (arg != "-") return arg;
  return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
}

std::vector<Name> parse_names(Calculus c, const std::vector<std::string>& texts) {
  std::vector<Name> out;
  for (const auto& t : texts) out.push_back(parse_name(c, t));
  return out;
}

json names_json(const std::vector<Name>& ns, int quote_depth) {
  json a = json::array();
  for (const auto& n : ns) a.push_back(print(n, {quote_depth}));
  return a;
}

std::string join(const std::vector<Name>& ns, int quote_depth) {
  std::string out = "{";
  for (std::size_t i = 0; i < ns.size(); ++i) out += (i ? ", " : "") + print(ns[i], {quote_depth});
  return out + "}";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rhocomb: π, Yoshida combinators, ρ and RHO combinators"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("-c,--calculus", common.calculus, "Calculus of the input term: pi, yoshida, rho, rhocomb")
      ->capture_default_str();
  app.add_flag("--json", common.json, "Machine-readable output (errors included)");
  app.add_option("--quote-depth", common.quote_depth, "Abbreviate quotes nested deeper than this as @{digest}");

  std::string source = "-";
  auto* parse_cmd = app.add_subcommand("parse", "Parse and pretty-print a term");
  parse_cmd->add_option("term", source, "Term text, or - for stdin");

  auto* canon_cmd = app.add_subcommand("canon", "Canonical form under structural congruence");
  canon_cmd->add_option("term", source, "Term text, or - for stdin");

  auto* fn_cmd = app.add_subcommand("fn", "Free names");
  fn_cmd->add_option("term", source, "Term text, or - for stdin");

  std::string strategy = "deterministic";
  Budget budget;
  bool trace_json_flag = false;
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a term");
  reduce_cmd->add_option("term", source, "Term text, or - for stdin");
  reduce_cmd->add_option("--strategy", strategy, "deterministic or all")
      ->check(CLI::IsMember({"deterministic", "all"}))
      ->capture_default_str();
  reduce_cmd->add_option("--max-steps", budget.max_steps)->capture_default_str();
  reduce_cmd->add_option("--max-unfolds", budget.max_unfolds)->capture_default_str();
  reduce_cmd->add_option("--max-states", budget.max_states)->capture_default_str();
  reduce_cmd->add_flag("--trace-json", trace_json_flag, "Print the trace or graph as JSON");

  std::string from = "pi", to = "yoshida", ledger_path, alloc_n, alloc_p;
  auto* translate_cmd = app.add_subcommand("translate", "Translate between calculi");
  translate_cmd->add_option("term", source, "Term text, or - for stdin");
  translate_cmd->add_option("--from", from, "pi or yoshida")->capture_default_str();
  translate_cmd->add_option("--to", to, "yoshida, rho or rhocomb")->capture_default_str();
  translate_cmd->add_option("--ledger-json", ledger_path, "Write the freshness ledger to this file (- for stdout)");
  translate_cmd->add_option("--alloc-n", alloc_n, "Allocator memory name (yoshida -> rhocomb, pi -> rho)");
  translate_cmd->add_option("--alloc-p", alloc_p, "Allocator access channel");

  std::vector<std::string> names;
  std::size_t weak_depth = 0;
  auto* barbs_cmd = app.add_subcommand("barbs", "Observable barbs");
  barbs_cmd->add_option("term", source, "Term text, or - for stdin");
  barbs_cmd->add_option("--names", names, "Observed names (default: free names)")->delimiter(',');
  barbs_cmd->add_option("--weak", weak_depth, "Also report weak barbs within this many steps");

  std::string right_source, right_calculus, against;
  std::vector<std::string> renames;
  std::size_t depth = 8, unfolds = 2, image_steps = 2000, max_states = 6000;
  bool strict = false;
  auto* bisim_cmd = app.add_subcommand("bisim", "Bounded barbed bisimulation between two terms");
  bisim_cmd->add_option("left", source, "Left term")->required();
  bisim_cmd->add_option("right", right_source, "Right term (omit with --against)");
  bisim_cmd->add_option("--right-calculus", right_calculus, "Calculus of the right term (default: same as left)");
  bisim_cmd->add_option("--against", against, "Compare the left term with its rho or rhocomb image")
      ->check(CLI::IsMember({"rho", "rhocomb"}));
  bisim_cmd->add_option("--depth", depth, "Step bound for same-calculus graphs")->capture_default_str();
  bisim_cmd->add_option("--max-unfolds", unfolds)->capture_default_str();
  bisim_cmd->add_option("--image-steps", image_steps, "Step bound for a right graph in another calculus")
      ->capture_default_str();
  bisim_cmd->add_option("--max-states", max_states)->capture_default_str();
  bisim_cmd->add_option("--names", names, "Observed names of the left term (default: its free names)")
      ->delimiter(',');
  bisim_cmd->add_option("--rename", renames, "left=right observable renaming, repeatable");
  bisim_cmd->add_flag("--strict", strict, "Strong step matching and strong barbs");

  std::string repl_body = "m(u,0)";
  auto* repro_cmd = app.add_subcommand("repro-replication", "Replay the unfolding of *_(x,v,w) P");
  repro_cmd->add_option("--body", repl_body, "RHO-combinator process P")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (common.json && e.get_exit_code() != 0) {
      std::cout << error_json("usage", e.what(), {}, {}, {-1}) << "\n";
      return kUsage;
    }
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  const JsonOptions jopts{2, common.quote_depth};
  const PrintOptions popts{common.quote_depth};
  try {
    const Calculus c = calculus_of(common.calculus);

    if (*parse_cmd) {
      const Term t = parse(c, read_source(source));
      if (common.json)
        std::cout << term_json(c, t, jopts) << "\n";
      else
        std::cout << print(t, popts) << "\n";
      return 0;
    }

    if (*canon_cmd) {
      const CanonicalForm f = canonicalize(c, parse(c, read_source(source)));
      if (common.json)
        std::cout << json{{"canonical", print(f.term, popts)}, {"digest", digest_hex(f.digest)}}.dump(2) << "\n";
      else
        std::cout << print(f.term, popts) << "\n";
      return 0;
    }

    if (*fn_cmd) {
      const auto fn = free_names(c, parse(c, read_source(source)));
      if (common.json)
        std::cout << names_json(fn, common.quote_depth).dump(2) << "\n";
      else
        std::cout << join(fn, common.quote_depth) << "\n";
      return 0;
    }

    if (*reduce_cmd) {
      const Term t = parse(c, read_source(source));
      const bool as_json = common.json || trace_json_flag;
      if (strategy == "deterministic") {
        const Trace tr = reduce_deterministic(c, t, budget);
        if (as_json) {
          std::cout << trace_json(tr, jopts) << "\n";
        } else {
          std::cout << print(canonicalize(c, t).term, popts) << "\n";
          for (std::size_t i = 0; i < tr.steps.size(); ++i) {
            const auto& next = i + 1 < tr.steps.size() ? tr.steps[i + 1].state : tr.final_state;
            std::cout << "  --" << to_string(tr.steps[i].redex.rule) << "--> " << print(next.term, popts) << "\n";
          }
          if (tr.truncated) std::cout << "(truncated)\n";
        }
      } else {
        const ReductionGraph g = explore(c, t, budget);
        if (as_json) {
          std::cout << graph_json(g, jopts) << "\n";
        } else {
          std::cout << g.states.size() << " states, " << g.edges.size() << " edges"
                    << (g.truncated ? " (truncated)" : "") << "\n";
          for (std::size_t i = 0; i < g.states.size(); ++i)
            std::cout << "  [" << i << "] " << print(g.states[i].form.term, popts) << "\n";
          for (const auto& e : g.edges)
            std::cout << "  " << e.from << " --" << to_string(e.redex.rule) << "--> " << e.to << "\n";
        }
      }
      return 0;
    }

    if (*translate_cmd) {
      const Calculus src = calculus_of(from), dst = calculus_of(to);
      const Term t = parse(src, read_source(source));
      std::optional<AllocatorPair> alloc;
      if (!alloc_n.empty() || !alloc_p.empty()) {
        if (alloc_n.empty() || alloc_p.empty())
          throw CLI::ValidationError("--alloc-n/--alloc-p", "give both allocator names or neither");
        alloc = AllocatorPair{parse_name(dst, alloc_n), parse_name(dst, alloc_p)};
      }
      FreshnessLedger ledger;
      Term out;
      if (src == Calculus::Pi && dst == Calculus::Yoshida) {
        out = pi_to_yoshida(t);
      } else if (src == Calculus::Pi && dst == Calculus::Rho) {
        out = pi_to_rho(t, alloc);
      } else if (src == Calculus::Pi && dst == Calculus::RhoComb) {
        if (alloc) throw CLI::ValidationError("--alloc-n", "pi -> rhocomb always uses the default allocator");
        out = pi_to_rhocomb(t, &ledger);
      } else if (src == Calculus::Yoshida && dst == Calculus::RhoComb) {
        out = yoshida_to_rhocomb(t, alloc, &ledger);
      } else {
        throw CLI::ValidationError("--from/--to", "no translation from " + from + " to " + to);
      }
      if (common.json) {
        json j = json::parse(term_json(dst, out, jopts));
        if (ledger_path == "-") j["ledger"] = json::parse(ledger_json(ledger, jopts));
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << print(out, popts) << "\n";
        if (ledger_path == "-") std::cout << ledger_json(ledger, jopts) << "\n";
      }
      if (!ledger_path.empty() && ledger_path != "-") {
        std::ofstream f(ledger_path);
        if (!f) throw SemanticError("cannot write " + ledger_path);
        f << ledger_json(ledger, jopts) << "\n";
      }
      return 0;
    }

    if (*barbs_cmd) {
      const Term t = parse(c, read_source(source));
      const auto observed = names.empty() ? free_names(c, t) : parse_names(c, names);
      const auto strong = barbs(c, t, observed);
      std::optional<WeakBarbs> weak;
      if (weak_depth > 0) weak = weak_barbs(c, t, observed, Budget{weak_depth, 2, 5000, false, {}});
      if (common.json) {
        json j{{"names", names_json(observed, common.quote_depth)}, {"barbs", names_json(strong, common.quote_depth)}};
        if (weak) {
          j["weak"] = names_json(weak->barbs, common.quote_depth);
          j["depth"] = weak_depth;
          j["truncated"] = weak->truncated;
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << join(strong, common.quote_depth) << "\n";
        if (weak) std::cout << "weak: " << join(weak->barbs, common.quote_depth) << (weak->truncated ? " (truncated)" : "") << "\n";
      }
      return 0;
    }

    if (*bisim_cmd) {
      const Term left = parse(c, read_source(source));
      Calculus rc = c;
      Term right;
      if (!against.empty()) {
        if (c != Calculus::Pi) throw CLI::ValidationError("--against", "--against needs a pi term on the left");
        if (!right_source.empty()) throw CLI::ValidationError("--against", "give either a right term or --against");
        rc = calculus_of(against);
        right = rc == Calculus::Rho ? pi_to_rho(left) : pi_to_rhocomb(left);
      } else {
        if (right_source.empty()) throw CLI::ValidationError("right", "a right term is required");
        if (!right_calculus.empty()) rc = calculus_of(right_calculus);
        right = parse(rc, right_source);
      }
      const auto observed = names.empty() ? free_names(c, left) : parse_names(c, names);
      std::vector<Name> right_observed = observed;
      if (!against.empty() && rc == Calculus::RhoComb)
        for (auto& n : right_observed) n = inject_atom(n);
      for (const auto& r : renames) {
        const auto eq = r.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--rename", "expected left=right, got '" + r + "'");
        const Name from_name = parse_name(c, r.substr(0, eq));
        bool found = false;
        for (std::size_t i = 0; i < observed.size(); ++i) {
          if (name_equiv(c, observed[i], from_name)) {
            right_observed[i] = parse_name(rc, r.substr(eq + 1));
            found = true;
          }
        }
        if (!found) throw SemanticError("--rename: " + r.substr(0, eq) + " is not an observed name");
      }
      BisimOptions opts;
      opts.strict = strict;
      opts.left_budget = Budget{depth, unfolds, max_states, false, {}};
      opts.right_budget = rc == c ? opts.left_budget : Budget{image_steps, unfolds, max_states, true, {}};
      const BisimVerdict v = bounded_bisim(c, left, rc, right, observed, right_observed, opts);
      if (common.json) {
        std::cout << verdict_json(v, depth, jopts) << "\n";
      } else {
        std::cout << (v.related ? "related" : "distinguished") << " (" << v.reason << "; " << v.left.states.size()
                  << " vs " << v.right.states.size() << " states)\n";
        if (!v.related) {
          for (const auto& w : v.witness)
            std::cout << "  " << (w.left_side ? "left " : "right") << " " << w.from << " --" << to_string(w.redex.rule)
                      << "--> " << w.to << "\n";
          std::cout << "  only left: " << join(v.only_left, common.quote_depth)
                    << "  only right: " << join(v.only_right, common.quote_depth) << "\n";
        }
      }
      return v.related ? 0 : kSemantic;
    }

    if (*repro_cmd) {
      const ReplicationReplay r =
          replay_replication(parse(Calculus::RhoComb, repl_body), atom("x"), atom("v"), atom("w"));
      if (common.json) {
        json j = json::parse(trace_json(r.trace, jopts));
        j["expected"] = print(canonicalize(Calculus::RhoComb, r.expected).term, popts);
        j["matches"] = r.matches;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << print(r.start, popts) << "\n";
        for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
          const auto& next = i + 1 < r.trace.steps.size() ? r.trace.steps[i + 1].state : r.trace.final_state;
          std::cout << "  --" << to_string(r.trace.steps[i].redex.rule) << "--> " << print(next.term, popts) << "\n";
        }
        std::cout << (r.matches ? "matches *_(x,v,w) P | P" : "MISMATCH: expected " + print(r.expected, popts)) << "\n";
      }
      return r.matches ? 0 : kSemantic;
    }
  } catch (const CLI::ValidationError& e) {
    if (common.json)
      std::cout << error_json("usage", e.what(), {}, {}, jopts) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    if (common.json)
      std::cout << error_json("parse", e.what(), e.line(), e.column(), jopts) << "\n";
    else
      std::cerr << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    if (common.json)
      std::cout << error_json("semantic", e.what(), {}, {}, jopts) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  }
  return kUsage;
}

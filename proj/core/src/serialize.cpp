#include "rhocomb/serialize.hpp"

#include <json.hpp>

#include "rhocomb/syntax.hpp"

namespace rhocomb {

namespace {

using json = nlohmann::ordered_json;

std::string dump(const json& j, const JsonOptions& opts) { return j.dump(opts.indent); }

json name_json(const Name& n, const JsonOptions& opts) { return print(n, {opts.quote_depth}); }

json redex_json(const Redex& r, const JsonOptions& opts) {
  json j;
  j["rule"] = to_string(r.rule);
  j["indices"] = r.indices;
  if (r.channel) j["channel"] = name_json(*r.channel, opts);
  return j;
}

json form_json(const CanonicalForm& f, const JsonOptions& opts) {
  return {{"term", print(f.term, {opts.quote_depth})}, {"digest", digest_hex(f.digest)}};
}

json names_json(const std::vector<Name>& ns, const JsonOptions& opts) {
  json a = json::array();
  for (const auto& n : ns) a.push_back(name_json(n, opts));
  return a;
}

json graph_value(const ReductionGraph& g, const JsonOptions& opts) {
  json states = json::array();
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const auto& s = g.states[i];
    json j = form_json(s.form, opts);
    j["id"] = i;
    j["depth"] = s.depth;
    j["complete"] = s.complete;
    states.push_back(std::move(j));
  }
  json edges = json::array();
  for (const auto& e : g.edges) {
    json j = redex_json(e.redex, opts);
    j["from"] = e.from;
    j["to"] = e.to;
    edges.push_back(std::move(j));
  }
  json out;
  out["calculus"] = to_string(g.calculus);
  out["truncated"] = g.truncated;
  out["states"] = std::move(states);
  out["edges"] = std::move(edges);
  return out;
}

}  // namespace

std::string term_json(Calculus c, const Term& t, const JsonOptions& opts) {
  const CanonicalForm f = canonicalize(c, t);
  json j;
  j["calculus"] = to_string(c);
  j["term"] = print(t, {opts.quote_depth});
  j["canonical"] = print(f.term, {opts.quote_depth});
  j["digest"] = digest_hex(f.digest);
  return dump(j, opts);
}

std::string trace_json(const Trace& t, const JsonOptions& opts) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    json j = form_json(s.state, opts);
    j["redex"] = redex_json(s.redex, opts);
    steps.push_back(std::move(j));
  }
  json j;
  j["calculus"] = to_string(t.calculus);
  j["steps"] = std::move(steps);
  j["final"] = form_json(t.final_state, opts);
  j["step_count"] = t.steps.size();
  j["truncated"] = t.truncated;
  return dump(j, opts);
}

std::string graph_json(const ReductionGraph& g, const JsonOptions& opts) { return dump(graph_value(g, opts), opts); }

std::string verdict_json(const BisimVerdict& v, std::size_t depth, const JsonOptions& opts) {
  json j;
  j["outcome"] = v.related ? "related-up-to-depth" : "distinguished";
  j["depth"] = depth;
  j["bounded"] = v.bounded;
  j["reason"] = v.reason;
  j["left_states"] = v.left.states.size();
  j["right_states"] = v.right.states.size();
  j["relation_pairs"] = v.relation_pairs;
  if (!v.related) {
    json path = json::array();
    for (const auto& w : v.witness) {
      json e = redex_json(w.redex, opts);
      e["side"] = w.left_side ? "left" : "right";
      e["from"] = w.from;
      e["to"] = w.to;
      path.push_back(std::move(e));
    }
    j["witness"] = {{"path", std::move(path)},
                    {"left_state", form_json(v.left.states[v.witness_left].form, opts)},
                    {"right_state", form_json(v.right.states[v.witness_right].form, opts)}};
    j["barb_diff"] = {{"only_left", names_json(v.only_left, opts)}, {"only_right", names_json(v.only_right, opts)}};
  }
  return dump(j, opts);
}

std::string ledger_json(const FreshnessLedger& ledger, const JsonOptions& opts) {
  json a = json::array();
  for (const auto& e : ledger) {
    json j;
    j["rule"] = e.rule;
    j["name"] = name_json(e.name, opts);
    j["digest"] = digest_hex(e.name.digest());
    j["fresh_for"] = print(e.fresh_for, {opts.quote_depth});
    a.push_back(std::move(j));
  }
  return dump(a, opts);
}

std::string error_json(std::string_view kind, std::string_view message, std::optional<std::size_t> line,
                       std::optional<std::size_t> column, const JsonOptions& opts) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  if (line) j["line"] = *line;
  if (column) j["column"] = *column;
  return dump(j, opts);
}

}  // namespace rhocomb

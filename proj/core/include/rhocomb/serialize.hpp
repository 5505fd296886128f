#pragma once

// JSON renderings of traces, graphs, verdicts, freshness ledgers and
// errors. Shapes are documented in docs/json-schemas.md. Output is
// deterministic: the same value always serializes to the same bytes.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "rhocomb/encodings.hpp"
#include "rhocomb/equivalence.hpp"
#include "rhocomb/reduction.hpp"

namespace rhocomb {

struct JsonOptions {
  int indent = 2;       // -1 for a single line
  int quote_depth = -1; // forwarded to print()
};

std::string term_json(Calculus c, const Term& t, const JsonOptions& opts = {});
std::string trace_json(const Trace& t, const JsonOptions& opts = {});
std::string graph_json(const ReductionGraph& g, const JsonOptions& opts = {});
/// `depth` is the step bound the graphs were explored to.
std::string verdict_json(const BisimVerdict& v, std::size_t depth, const JsonOptions& opts = {});
std::string ledger_json(const FreshnessLedger& ledger, const JsonOptions& opts = {});
std::string error_json(std::string_view kind, std::string_view message, std::optional<std::size_t> line = {},
                       std::optional<std::size_t> column = {}, const JsonOptions& opts = {});

}  // namespace rhocomb

#ifndef QGUESS_IO_HPP
#define QGUESS_IO_HPP

// JSON formats:
//   pmf:      {"labels": ["a","b"], "probs": [0.8, 0.2]}
//   joint:    {"x_labels": [...], "y_labels": [...], "probs": [[...], ...]}   rows indexed by y
//   strategy: {"x_labels": [...], "y_labels": [...], "ranks": [[...], ...]}  1-based; x_labels optional
//   family:   {"members": [<joint>, ...]}

#include <string>

#include <json.hpp>

#include "qguess/minimax.hpp"
#include "qguess/pmf.hpp"
#include "qguess/strategy.hpp"

namespace qguess::io {

using Json = nlohmann::json;

/// Reads and parses a JSON file; failures raise ParseError.
Json read_json_file(const std::string& path);

Pmf pmf_from_json(const Json& j);
JointPmf joint_from_json(const Json& j);
/// Accepts either a pmf (as a single-row joint) or a joint document.
JointPmf source_from_json(const Json& j);
bool is_joint_document(const Json& j);
GuessingStrategy strategy_from_json(const Json& j, const Labels& x_labels);
SourceFamily family_from_json(const Json& j);

Json to_json(const Pmf& p);
Json to_json(const JointPmf& j);
Json to_json(const GuessingStrategy& g);
Json to_json(const MinimaxResult& r);

}  // namespace qguess::io

#endif  // QGUESS_IO_HPP

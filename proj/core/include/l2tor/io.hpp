#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "l2tor/closed_forms.hpp"
#include "l2tor/complexes.hpp"
#include "l2tor/fk_engines.hpp"
#include "l2tor/torsion.hpp"

namespace l2tor::io {

using json = nlohmann::ordered_json;

/// Schema violations carry a JSON-pointer-style path in the message.
[[noreturn]] void schema_error(const std::string& path, const std::string& what);

// -- shared encodings ------------------------------------------------------
// Generators are 1-based; words are arrays of signed integers (negative =
// inverse); FreeAbelian elements are integer exponent arrays; group-ring
// terms are {"word": [...], "re": x, "im": y} or {"word": [...],
// "block": [[[re,im],[re,im]],[[re,im],[re,im]]]}.

json group_to_json(const GroupModel& g);
std::shared_ptr<const GroupModel> group_from_json(const json& j, const std::string& path);

json element_terms_to_json(const GroupRingElement& e);
GroupRingElement element_terms_from_json(const json& j,
                                         const std::shared_ptr<const GroupModel>& group,
                                         int block_size, const std::string& path);

/// CW schema {"schema": "l2tor/cw/1", "group": {...}, "ranks": [...],
/// "boundaries": [[[terms]]]} in the (n_{p-1} x n_p) layout of the external
/// convention; converted to/from the internal row-module storage.
json cw_to_json(const CWDatum& cw);
CWDatum cw_from_json(const json& j, const std::string& path);

json representation_to_json(const Representation& rep);
Representation representation_from_json(const json& j,
                                        const std::shared_ptr<const GroupModel>& group,
                                        const std::string& path);

RepresentationPath path_from_json(const json& j,
                                  const std::shared_ptr<const GroupModel>& group,
                                  const std::string& path);

FiniteQuotient quotient_from_json(const json& j,
                                  const std::shared_ptr<const GroupModel>& base,
                                  const std::string& path);

/// Engine knobs {"engine": "auto|abelian|series|quotient", "nodes": N,
/// "maxTerms": K, "allowDecomposition": bool}; the quotient itself is
/// attached separately.
EngineConfig engine_from_json(const json& j, const std::string& path);
json engine_to_json(const EngineConfig& cfg);

json fk_result_to_json(const FKResult& r);
json torsion_result_to_json(const TorsionResult& r);
json scan_to_json(const PathScan& scan);
std::string scan_to_csv(const PathScan& scan);

json seifert_to_json(const SeifertData& d);
SeifertData seifert_from_json(const json& j, const std::string& path);
JSJDatum jsj_from_json(const json& j, const std::string& path);

// -- run manifests -----------------------------------------------------------

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> input_hashes;  // (path, fnv hex)
  json engine;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::vector<std::string> warnings;

  void add_input(const std::string& path, const std::string& bytes);
  json to_json() const;
};

/// Serialization used for all CLI output: 2-space indent, keys in insertion
/// order, trailing newline. Identical inputs produce identical bytes.
std::string dump_output(const json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace l2tor::io

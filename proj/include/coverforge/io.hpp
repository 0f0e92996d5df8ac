#pragma once

#include "coverforge/covers.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace coverforge {

// Fan schema: { "rank": int, "rays": [[int,...],...],
//               "cones": [[int,...],...], "complete": bool }
// with 0-based ray indices.
Fan parse_fan_json(const nlohmann::json& j);

// Abstract schema: { "cl": { "invariant_factors": [int,...], "free_rank": int },
//                    "divisor_classes": [[int,...],...] }
ClassGroupData parse_abstract_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

// "2,3,6" inline, or a path to a JSON file holding an array of integers.
std::vector<Int> parse_orders_arg(const std::string& arg);

// ---- report builders --------------------------------------------------
// JSON keys are emitted in sorted order, so output bytes are deterministic.

nlohmann::json group_json(const FgAbGroup& g);
std::string group_text(const FgAbGroup& g);

// Element coordinates on the canonical decomposition: torsion entries (one
// per invariant factor) followed by free entries (canonical dual basis).
std::vector<Int> canonical_coords(const FgAbGroup& g, const DualFree& dual,
                                  const GroupElt& x);

nlohmann::json vec_json(std::span<const Int> v);
std::string vec_text(std::span<const Int> v);

nlohmann::json matrix_cols_json(const IntMatrix& m);

nlohmann::json fan_json(const Fan& fan);

nlohmann::json cover_spec_json(const CoverSpec& c);
std::string cover_spec_text(const CoverSpec& c, const std::string& indent = "");

nlohmann::json existence_json(const ExistenceReport& r, const BranchData& branch);
std::string existence_text(const ExistenceReport& r, const BranchData& branch);

nlohmann::json building_data_json(const BuildingData& bd);
std::string building_data_text(const BuildingData& bd);

nlohmann::json crosscheck_json(const CrossCheckReport& r);
std::string crosscheck_text(const CrossCheckReport& r);

} // namespace coverforge

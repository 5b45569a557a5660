#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "posinorm/composition.hpp"
#include "posinorm/lambert.hpp"
#include "posinorm/operator.hpp"
#include "posinorm/partition.hpp"
#include "posinorm/posinormal.hpp"
#include "posinorm/space.hpp"
#include "posinorm/tree.hpp"

namespace posinorm::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

// Entity schemas (indices are 0-based):
//   space     {"atoms": [..], "masses": [..]}
//   map       {"space": id, "image": [..]}
//   partition {"space": id, "blocks": [[..], ..]}
//   operator  {"space": id, "entries": [[[re,im], ..], ..]}
//   comp spec {"space": id, "map": id, "weight": [..] | "ones"}
//   lambert   {"space": id, "partition": id, "u": [..], "w": [..], "support_threshold": t}
//   tree      {"vertices": [..], "root": v, "parent": {child: parent, ..},
//              "weights": {child: mu, ..}}
struct Bundle {
  std::map<std::string, SpacePtr> spaces;
  std::map<std::string, PointMap> maps;
  std::map<std::string, Partition> partitions;
  std::map<std::string, LinearOp> operators;
  std::map<std::string, WeightedCompositionSpec> comp_specs;
  std::map<std::string, LambertSpec> lambert_specs;
  std::map<std::string, TreeTrunc> trees;
};

Bundle load_bundle(const Json& doc);
Bundle load_bundle_file(const std::string& path);

SpacePtr space_from_json(const Json& j);
PointMap map_from_json(const Json& j, const Bundle& bundle);
Partition partition_from_json(const Json& j, const Bundle& bundle);
LinearOp operator_from_json(const Json& j, const Bundle& bundle);
WeightedCompositionSpec comp_spec_from_json(const Json& j, const Bundle& bundle);
LambertSpec lambert_spec_from_json(const Json& j, const Bundle& bundle);
TreeTrunc tree_from_json(const Json& j);

Json space_to_json(const AtomicMeasureSpace& sp);
Json operator_to_json(const LinearOp& op, const std::string& space_id);

Json report_to_json(const PosinormalityReport& r);
Json verdict_to_json(const PsdVerdict& v);
double json_finite_or_string(const Json& j);  // accepts "inf" for +infinity
Json finite_or_string(double x);              // +infinity serializes as "inf"

}  // namespace posinorm::io

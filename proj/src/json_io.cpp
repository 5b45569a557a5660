#include "posinorm/json_io.hpp"

#include <fstream>
#include <limits>

namespace posinorm::io {

namespace {

Eigen::VectorXd vector_from_json(const Json& j) {
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& x : j) v(i++) = x.get<double>();
  return v;
}

const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing key: ") + key);
  return *it;
}

SpacePtr resolve_space(const Json& j, const Bundle& bundle) {
  const std::string id = require(j, "space").get<std::string>();
  auto it = bundle.spaces.find(id);
  if (it == bundle.spaces.end()) throw std::invalid_argument("unknown space id: " + id);
  return it->second;
}

}  // namespace

SpacePtr space_from_json(const Json& j) {
  std::vector<std::string> atoms;
  for (const auto& a : require(j, "atoms")) atoms.push_back(a.get<std::string>());
  return make_space(std::move(atoms), vector_from_json(require(j, "masses")));
}

PointMap map_from_json(const Json& j, const Bundle& bundle) {
  SpacePtr sp = resolve_space(j, bundle);
  std::vector<Eigen::Index> image;
  for (const auto& x : require(j, "image")) image.push_back(x.get<Eigen::Index>());
  return PointMap(std::move(sp), std::move(image));
}

Partition partition_from_json(const Json& j, const Bundle& bundle) {
  SpacePtr sp = resolve_space(j, bundle);
  std::vector<std::vector<Eigen::Index>> blocks;
  for (const auto& blk : require(j, "blocks")) {
    std::vector<Eigen::Index> b;
    for (const auto& x : blk) b.push_back(x.get<Eigen::Index>());
    blocks.push_back(std::move(b));
  }
  return Partition(std::move(sp), std::move(blocks));
}

LinearOp operator_from_json(const Json& j, const Bundle& bundle) {
  SpacePtr sp = resolve_space(j, bundle);
  const Json& rows = require(j, "entries");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd m(n, n);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n)
      throw std::invalid_argument("operator entries must be square");
    Eigen::Index c = 0;
    for (const auto& cell : row) {
      m(r, c) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
      ++c;
    }
    ++r;
  }
  return LinearOp(std::move(sp), std::move(m));
}

WeightedCompositionSpec comp_spec_from_json(const Json& j, const Bundle& bundle) {
  const std::string map_id = require(j, "map").get<std::string>();
  auto it = bundle.maps.find(map_id);
  if (it == bundle.maps.end()) throw std::invalid_argument("unknown map id: " + map_id);
  const Json& w = require(j, "weight");
  if (w.is_string()) {
    if (w.get<std::string>() != "ones")
      throw std::invalid_argument("weight must be an array or \"ones\"");
    return WeightedCompositionSpec::unweighted(it->second);
  }
  return WeightedCompositionSpec(it->second, vector_from_json(w));
}

LambertSpec lambert_spec_from_json(const Json& j, const Bundle& bundle) {
  const std::string part_id = require(j, "partition").get<std::string>();
  auto it = bundle.partitions.find(part_id);
  if (it == bundle.partitions.end())
    throw std::invalid_argument("unknown partition id: " + part_id);
  std::optional<double> thr;
  if (j.contains("support_threshold")) thr = j["support_threshold"].get<double>();
  return LambertSpec(it->second, vector_from_json(require(j, "u")),
                     vector_from_json(require(j, "w")), thr);
}

TreeTrunc tree_from_json(const Json& j) {
  std::vector<std::string> vertices;
  for (const auto& v : require(j, "vertices")) vertices.push_back(v.get<std::string>());
  std::map<std::string, Eigen::Index> index;
  for (size_t i = 0; i < vertices.size(); ++i)
    index[vertices[i]] = static_cast<Eigen::Index>(i);
  const std::string root_name = require(j, "root").get<std::string>();
  if (!index.count(root_name)) throw std::invalid_argument("tree root not in vertices");
  std::vector<Eigen::Index> parent(vertices.size(), -1);
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vertices.size()));
  for (const auto& [child, par] : require(j, "parent").items()) {
    if (!index.count(child) || !index.count(par.get<std::string>()))
      throw std::invalid_argument("tree parent entry references unknown vertex");
    parent[static_cast<size_t>(index[child])] = index[par.get<std::string>()];
  }
  for (const auto& [child, mu] : require(j, "weights").items()) {
    if (!index.count(child))
      throw std::invalid_argument("tree weight entry references unknown vertex");
    weights(index[child]) = mu.get<double>();
  }
  return TreeTrunc(std::move(vertices), index[root_name], std::move(parent),
                   std::move(weights));
}

Bundle load_bundle(const Json& doc) {
  Bundle b;
  if (doc.contains("spaces"))
    for (const auto& [id, j] : doc["spaces"].items()) b.spaces.emplace(id, space_from_json(j));
  if (doc.contains("maps"))
    for (const auto& [id, j] : doc["maps"].items()) b.maps.emplace(id, map_from_json(j, b));
  if (doc.contains("partitions"))
    for (const auto& [id, j] : doc["partitions"].items())
      b.partitions.emplace(id, partition_from_json(j, b));
  if (doc.contains("operators"))
    for (const auto& [id, j] : doc["operators"].items())
      b.operators.emplace(id, operator_from_json(j, b));
  if (doc.contains("comp_specs"))
    for (const auto& [id, j] : doc["comp_specs"].items())
      b.comp_specs.emplace(id, comp_spec_from_json(j, b));
  if (doc.contains("lambert_specs"))
    for (const auto& [id, j] : doc["lambert_specs"].items())
      b.lambert_specs.emplace(id, lambert_spec_from_json(j, b));
  if (doc.contains("trees"))
    for (const auto& [id, j] : doc["trees"].items()) b.trees.emplace(id, tree_from_json(j));
  return b;
}

Bundle load_bundle_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  Json doc = Json::parse(in);
  return load_bundle(doc);
}

Json space_to_json(const AtomicMeasureSpace& sp) {
  Json j;
  j["atoms"] = sp.atoms();
  j["masses"] = std::vector<double>(sp.masses().data(), sp.masses().data() + sp.size());
  return j;
}

Json operator_to_json(const LinearOp& op, const std::string& space_id) {
  Json j;
  j["space"] = space_id;
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < op.dim(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < op.dim(); ++c)
      row.push_back({op.matrix()(r, c).real(), op.matrix()(r, c).imag()});
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

Json finite_or_string(double x) {
  if (std::isinf(x)) return Json(x > 0 ? "inf" : "-inf");
  return Json(x);
}

double json_finite_or_string(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("expected number or \"inf\"");
  }
  return j.get<double>();
}

Json report_to_json(const PosinormalityReport& r) {
  Json j;
  j["operator"] = r.operator_id;
  j["k"] = r.k;
  j["n"] = r.n;
  if (r.lambda_sq) j["lambda_sq"] = *r.lambda_sq;
  j["verdict"] = r.verdict;
  j["minimal_lambda_sq"] = finite_or_string(r.minimal_lambda_sq);
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["method"] = r.method;
  return j;
}

Json verdict_to_json(const PsdVerdict& v) {
  Json j;
  j["is_psd"] = v.is_psd;
  j["min_eigenvalue"] = v.min_eigenvalue;
  j["max_eigenvalue"] = v.max_eigenvalue;
  if (v.witness) {
    Json wit = Json::array();
    for (Eigen::Index i = 0; i < v.witness->size(); ++i)
      wit.push_back({(*v.witness)(i).real(), (*v.witness)(i).imag()});
    j["witness"] = std::move(wit);
    j["witness_form_value"] = v.witness_form_value;
  }
  return j;
}

}  // namespace posinorm::io

#include <doctest.h>

#include "posinorm/json_io.hpp"

#include "helpers.hpp"

using namespace posinorm;
using posinorm::io::Json;

namespace {

Json demo_bundle_doc() {
  return Json::parse(R"({
    "spaces": {
      "X": {"atoms": ["a", "b", "c", "d"], "masses": [0.25, 0.25, 0.25, 0.25]}
    },
    "maps": {
      "T": {"space": "X", "image": [3, 2, 1, 0]}
    },
    "partitions": {
      "A": {"space": "X", "blocks": [[0, 1], [2, 3]]}
    },
    "operators": {
      "I": {"space": "X", "entries": [
        [[1,0],[0,0],[0,0],[0,0]],
        [[0,0],[1,0],[0,0],[0,0]],
        [[0,0],[0,0],[1,0],[0,0]],
        [[0,0],[0,0],[0,0],[1,0]]]}
    },
    "comp_specs": {
      "CT": {"space": "X", "map": "T", "weight": "ones"},
      "WT": {"space": "X", "map": "T", "weight": [1, 2, 3, 4]}
    },
    "lambert_specs": {
      "L": {"space": "X", "partition": "A", "u": [1, 1, 1, 1], "w": [1, 2, 1, 2],
            "support_threshold": 1e-9}
    },
    "trees": {
      "P": {"vertices": ["r", "x", "y"], "root": "r",
            "parent": {"x": "r", "y": "x"},
            "weights": {"x": 0.5, "y": 2.0}}
    }
  })");
}

}  // namespace

TEST_CASE("bundle loading resolves cross-references") {
  const io::Bundle b = io::load_bundle(demo_bundle_doc());
  CHECK(b.spaces.at("X")->size() == 4);
  CHECK(b.maps.at("T")(0) == 3);
  CHECK(b.partitions.at("A").block_count() == 2);
  CHECK(b.operators.at("I").max_abs_diff(LinearOp::identity(b.spaces.at("X"))) == 0.0);
  CHECK(b.comp_specs.at("CT").is_unweighted());
  CHECK(b.comp_specs.at("WT").weight(3) == 4.0);
  CHECK(b.lambert_specs.at("L").support_threshold == 1e-9);
  CHECK(b.trees.at("P").max_depth == 2);
  CHECK(b.trees.at("P").weights(2) == 2.0);
}

TEST_CASE("bundle loading rejects dangling references and bad shapes") {
  Json doc = demo_bundle_doc();
  doc["maps"]["T"]["space"] = "nope";
  CHECK_THROWS(io::load_bundle(doc));

  Json doc2 = demo_bundle_doc();
  doc2["operators"]["I"]["entries"] = Json::array({Json::array({Json::array({1.0, 0.0})})});
  CHECK_THROWS(io::load_bundle(doc2));

  Json doc3 = demo_bundle_doc();
  doc3["comp_specs"]["CT"]["weight"] = "twos";
  CHECK_THROWS(io::load_bundle(doc3));
}

TEST_CASE("operator serialization round-trips through the schema") {
  testutil::Rng rng(179);
  const io::Bundle base = io::load_bundle(demo_bundle_doc());
  for (int t = 0; t < 10; ++t) {
    const LinearOp a = testutil::random_operator(rng, base.spaces.at("X"));
    const Json j = io::operator_to_json(a, "X");
    const LinearOp back = io::operator_from_json(j, base);
    CHECK(back.max_abs_diff(a) == 0.0);
  }
}

TEST_CASE("reports serialize infinities as strings") {
  PosinormalityReport r;
  r.operator_id = "demo";
  r.k = 1;
  r.n = 2;
  r.lambda_sq = 1.5;
  r.verdict = false;
  r.minimal_lambda_sq = std::numeric_limits<double>::infinity();
  r.method = "direct-psd";
  const Json j = io::report_to_json(r);
  CHECK(j["minimal_lambda_sq"] == "inf");
  CHECK(io::json_finite_or_string(j["minimal_lambda_sq"]) ==
        std::numeric_limits<double>::infinity());
  CHECK(io::json_finite_or_string(Json(2.5)) == 2.5);
}

TEST_CASE("verdict serialization carries the witness") {
  const auto sp = make_uniform_space(2);
  Eigen::VectorXd d(2);
  d << 1.0, -1.0;
  const PsdVerdict v = is_psd(LinearOp::diagonal(sp, d));
  const Json j = io::verdict_to_json(v);
  CHECK(j["is_psd"] == false);
  CHECK(j.contains("witness"));
  CHECK(j["witness_form_value"].get<double>() < 0.0);
}

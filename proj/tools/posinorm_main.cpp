#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "posinorm/json_io.hpp"
#include "posinorm/repro.hpp"

using posinorm::io::Json;

namespace {

// --config file.json supplies defaults; explicitly passed flags win.
Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return Json::parse(in);
}

template <typename T>
void config_default(const CLI::Option* opt, const Json& cfg, const char* key, T& value) {
  if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

void config_default_vec(const CLI::Option* opt, const Json& cfg, const char* key,
                        std::vector<double>& value) {
  if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<std::vector<double>>();
}

void config_default_vec(const CLI::Option* opt, const Json& cfg, const char* key,
                        std::vector<long>& value) {
  if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<std::vector<long>>();
}

int emit(const Json& doc, const std::string& out_path, bool as_json, bool pass,
         const std::string& text) {
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << doc.dump(2) << "\n";
  }
  if (as_json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << text;
  return pass ? 0 : 1;
}

std::string verdict_cell(std::optional<bool> criterion, std::optional<bool> psd) {
  std::string s;
  if (criterion) s += *criterion ? "C:yes" : "C:no ";
  if (criterion && psd) s += "/";
  if (psd) s += *psd ? "P:yes" : "P:no ";
  return s;
}

struct AnalyzeTarget {
  posinorm::LinearOp op;
  std::optional<posinorm::WeightedCompositionSpec> spec;  // criteria available
  std::string id;
};

AnalyzeTarget resolve_target(const posinorm::io::Bundle& bundle, const std::string& name,
                             bool take_adjoint) {
  if (auto it = bundle.comp_specs.find(name); it != bundle.comp_specs.end()) {
    posinorm::LinearOp op = posinorm::build_weighted_composition(it->second);
    if (take_adjoint) op = posinorm::adjoint(op);
    return {std::move(op), it->second, name};
  }
  if (auto it = bundle.operators.find(name); it != bundle.operators.end()) {
    posinorm::LinearOp op = it->second;
    if (take_adjoint) op = posinorm::adjoint(op);
    return {std::move(op), std::nullopt, name};
  }
  throw std::runtime_error("no comp spec or operator named '" + name + "' in the input");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posinorm: posinormality analysis of finite-dimensional operators in "
               "mass-weighted geometry"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- analyze ------------------------------------------------------------
  auto* analyze = app.add_subcommand(
      "analyze", "k-quasi n-power posinormality over a (k, n) x lambda^2 grid");
  {
    static std::string config_path, input_path, op_name, out_path, check = "both",
                       format = "text";
    static bool take_adjoint = false;
    static std::vector<long> ks{0, 1, 2}, ns{1, 2};
    static std::vector<double> lams{1.0};
    static double psd_tol = posinorm::kDefaultPsdTol, rank_tol = posinorm::kDefaultRankTol;
    analyze->add_option("--config", config_path, "JSON config file");
    auto* o_in = analyze->add_option("--input", input_path, "JSON bundle of definitions");
    auto* o_op = analyze->add_option("--op", op_name, "comp spec or operator id");
    auto* o_k = analyze->add_option("--k", ks, "k values");
    auto* o_n = analyze->add_option("--n", ns, "n values");
    auto* o_l = analyze->add_option("--lambda-sq", lams, "lambda^2 values");
    auto* o_c = analyze->add_option("--check", check, "criterion|psd|both");
    auto* o_a = analyze->add_flag("--adjoint", take_adjoint, "analyze the adjoint");
    auto* o_pt = analyze->add_option("--psd-tol", psd_tol, "PSD tolerance");
    auto* o_rt = analyze->add_option("--rank-tol", rank_tol, "rank tolerance");
    auto* o_out = analyze->add_option("--out", out_path, "write JSON report here");
    auto* o_fmt = analyze->add_option("--format", format, "text|json");
    analyze->callback([&, o_in, o_op, o_k, o_n, o_l, o_c, o_a, o_pt, o_rt, o_out, o_fmt] {
      const Json cfg = load_config(config_path);
      config_default(o_in, cfg, "input", input_path);
      config_default(o_op, cfg, "op", op_name);
      config_default_vec(o_k, cfg, "k", ks);
      config_default_vec(o_n, cfg, "n", ns);
      config_default_vec(o_l, cfg, "lambda_sq", lams);
      config_default(o_c, cfg, "check", check);
      if (o_a->count() == 0 && cfg.contains("adjoint")) take_adjoint = cfg["adjoint"];
      config_default(o_pt, cfg, "psd_tol", psd_tol);
      config_default(o_rt, cfg, "rank_tol", rank_tol);
      config_default(o_out, cfg, "out", out_path);
      config_default(o_fmt, cfg, "format", format);
      if (ks.empty() || ns.empty() || lams.empty())
        throw std::runtime_error("analyze: k, n and lambda-sq ranges must be nonempty");
      if (!(psd_tol > 0) || !(rank_tol > 0))
        throw std::runtime_error("analyze: tolerances must be positive");

      const posinorm::io::Bundle bundle = posinorm::io::load_bundle_file(input_path);
      const AnalyzeTarget target = resolve_target(bundle, op_name, take_adjoint);
      const bool want_crit = (check == "criterion" || check == "both");
      const bool want_psd = (check == "psd" || check == "both");
      if (!want_crit && !want_psd) throw std::runtime_error("bad --check value: " + check);
      if (want_crit && !target.spec)
        throw std::runtime_error("criterion checks need a comp spec target");

      Json doc;
      doc["schema_version"] = posinorm::io::kSchemaVersion;
      doc["command"] = "analyze";
      doc["operator"] = target.id;
      doc["adjoint"] = take_adjoint;
      doc["tolerances"] = {{"psd_tol", psd_tol}, {"rank_tol", rank_tol}};
      if (target.spec) {
        const Eigen::VectorXd hpi =
            posinorm::weighted_rn_derivative(target.spec->map, target.spec->weight);
        doc["phi_sup"] = std::sqrt(hpi.maxCoeff());
      }
      Json cells = Json::array();
      std::string text = "operator " + target.id + (take_adjoint ? " (adjoint)" : "") + "\n";
      bool all_consistent = true;
      for (long k : ks) {
        for (long n : ns) {
          const double minimal =
              posinorm::minimal_lambda_sq(target.op, k, n, rank_tol);
          char head[128];
          std::snprintf(head, sizeof(head), "k=%ld n=%ld  min lambda^2 = %.12g\n", k, n,
                        minimal);
          text += head;
          std::optional<posinorm::CriterionParts> parts;
          if (want_crit) {
            const auto kind = target.spec->is_unweighted()
                                  ? (take_adjoint ? posinorm::CriterionKind::kCompositionAdjoint
                                                  : posinorm::CriterionKind::kComposition)
                                  : (take_adjoint ? posinorm::CriterionKind::kWeightedAdjoint
                                                  : posinorm::CriterionKind::kWeighted);
            parts = posinorm::criterion_parts(*target.spec, kind, k, n);
          }
          for (double lam2 : lams) {
            std::optional<bool> crit, psd;
            if (parts) crit = posinorm::criterion_holds(*parts, lam2, psd_tol);
            posinorm::PosinormalityReport rep;
            if (want_psd) {
              rep = posinorm::is_kq_np_posinormal(target.op, k, n, lam2, psd_tol, target.id);
              psd = rep.verdict;
            }
            if (crit && psd && *crit != *psd) all_consistent = false;
            Json cell;
            cell["k"] = k;
            cell["n"] = n;
            cell["lambda_sq"] = lam2;
            cell["minimal_lambda_sq"] = posinorm::io::finite_or_string(minimal);
            if (crit) cell["criterion"] = *crit;
            if (psd) {
              cell["psd"] = *psd;
              cell["min_eigenvalue"] = rep.min_eigenvalue;
            }
            cells.push_back(std::move(cell));
            char line[160];
            std::snprintf(line, sizeof(line), "  lambda^2=%-10.6g %s\n", lam2,
                          verdict_cell(crit, psd).c_str());
            text += line;
          }
        }
      }
      doc["cells"] = std::move(cells);
      doc["consistent"] = all_consistent;
      if (!all_consistent) text += "MISMATCH between criterion and direct PSD\n";
      if (format == "jsonl") {
        std::string lines;
        for (const auto& cell : doc["cells"]) lines += cell.dump() + "\n";
        exit_code = emit(doc, out_path, false, all_consistent, lines);
      } else {
        exit_code = emit(doc, out_path, format == "json", all_consistent, text);
      }
    });
  }

  // ---- minlambda ----------------------------------------------------------
  auto* minl = app.add_subcommand("minlambda", "least feasible lambda^2 over a (k, n) grid");
  {
    static std::string config_path, input_path, op_name, out_path, format = "text";
    static bool take_adjoint = false;
    static std::vector<long> ks{0, 1, 2}, ns{1, 2};
    static double rank_tol = posinorm::kDefaultRankTol;
    minl->add_option("--config", config_path, "JSON config file");
    auto* o_in = minl->add_option("--input", input_path, "JSON bundle");
    auto* o_op = minl->add_option("--op", op_name, "comp spec or operator id");
    auto* o_k = minl->add_option("--k", ks, "k values");
    auto* o_n = minl->add_option("--n", ns, "n values");
    auto* o_rt = minl->add_option("--rank-tol", rank_tol, "rank tolerance");
    auto* o_out = minl->add_option("--out", out_path, "write JSON report here");
    auto* o_fmt = minl->add_option("--format", format, "text|json");
    minl->add_flag("--adjoint", take_adjoint, "use the adjoint");
    minl->callback([&, o_in, o_op, o_k, o_n, o_rt, o_out, o_fmt] {
      const Json cfg = load_config(config_path);
      config_default(o_in, cfg, "input", input_path);
      config_default(o_op, cfg, "op", op_name);
      config_default_vec(o_k, cfg, "k", ks);
      config_default_vec(o_n, cfg, "n", ns);
      config_default(o_rt, cfg, "rank_tol", rank_tol);
      config_default(o_out, cfg, "out", out_path);
      config_default(o_fmt, cfg, "format", format);
      const posinorm::io::Bundle bundle = posinorm::io::load_bundle_file(input_path);
      const AnalyzeTarget target = resolve_target(bundle, op_name, take_adjoint);
      Json doc;
      doc["schema_version"] = posinorm::io::kSchemaVersion;
      doc["command"] = "minlambda";
      doc["operator"] = target.id;
      Json rows = Json::array();
      std::string text = "minimal lambda^2 for " + target.id + "\n";
      for (long k : ks)
        for (long n : ns) {
          const double v = posinorm::minimal_lambda_sq(target.op, k, n, rank_tol);
          rows.push_back(
              {{"k", k}, {"n", n}, {"minimal_lambda_sq", posinorm::io::finite_or_string(v)}});
          char line[96];
          std::snprintf(line, sizeof(line), "  k=%ld n=%ld  %.12g\n", k, n, v);
          text += line;
        }
      doc["rows"] = std::move(rows);
      exit_code = emit(doc, out_path, format == "json", true, text);
    });
  }

  // ---- lambert ------------------------------------------------------------
  auto* lam = app.add_subcommand(
      "lambert", "conditional-operator Cauchy dual: closed forms vs direct tests");
  {
    static std::string config_path, input_path, spec_name, out_path, route = "both",
                       format = "text";
    static long n_power = 2;
    static double lambda_sq = 1.0, psd_tol = posinorm::kDefaultPsdTol,
                  rank_tol = posinorm::kDefaultRankTol;
    lam->add_option("--config", config_path, "JSON config file");
    auto* o_in = lam->add_option("--input", input_path, "JSON bundle");
    auto* o_sp = lam->add_option("--spec", spec_name, "lambert spec id");
    auto* o_n = lam->add_option("--n", n_power, "power n");
    auto* o_l = lam->add_option("--lambda-sq", lambda_sq, "lambda^2");
    auto* o_r = lam->add_option("--route", route, "closed-form|generic|both");
    lam->add_flag_callback("--closed-form", [] { route = "closed-form"; });
    lam->add_flag_callback("--generic", [] { route = "generic"; });
    lam->add_flag_callback("--both", [] { route = "both"; });
    auto* o_pt = lam->add_option("--psd-tol", psd_tol, "PSD tolerance");
    auto* o_rt = lam->add_option("--rank-tol", rank_tol, "rank tolerance");
    auto* o_out = lam->add_option("--out", out_path, "write JSON report here");
    auto* o_fmt = lam->add_option("--format", format, "text|json");
    lam->callback([&, o_in, o_sp, o_n, o_l, o_r, o_pt, o_rt, o_out, o_fmt] {
      const Json cfg = load_config(config_path);
      config_default(o_in, cfg, "input", input_path);
      config_default(o_sp, cfg, "spec", spec_name);
      config_default(o_n, cfg, "n", n_power);
      config_default(o_l, cfg, "lambda_sq", lambda_sq);
      config_default(o_r, cfg, "route", route);
      config_default(o_pt, cfg, "psd_tol", psd_tol);
      config_default(o_rt, cfg, "rank_tol", rank_tol);
      config_default(o_out, cfg, "out", out_path);
      config_default(o_fmt, cfg, "format", format);
      const posinorm::io::Bundle bundle = posinorm::io::load_bundle_file(input_path);
      auto it = bundle.lambert_specs.find(spec_name);
      if (it == bundle.lambert_specs.end())
        throw std::runtime_error("no lambert spec named '" + spec_name + "'");
      const posinorm::LambertSpec& spec = it->second;

      Json doc;
      doc["schema_version"] = posinorm::io::kSchemaVersion;
      doc["command"] = "lambert";
      doc["spec"] = spec_name;
      doc["n"] = n_power;
      doc["lambda_sq"] = lambda_sq;
      std::string text = "lambert spec " + spec_name + "\n";
      bool consistent = true;

      const bool closed = (route == "closed-form" || route == "both");
      const bool generic = (route == "generic" || route == "both");
      std::optional<bool> cond, direct;
      if (closed) {
        cond = posinorm::dual_kq_np_condition(spec, n_power, lambda_sq, psd_tol);
        doc["condition"] = *cond;
        doc["condition_threshold"] = posinorm::io::finite_or_string(
            posinorm::dual_kq_np_threshold(spec, n_power));
        doc["posinormal_condition"] =
            posinorm::dual_posinormal_condition(spec, lambda_sq, psd_tol);
        doc["posinormal_condition_threshold"] = posinorm::io::finite_or_string(
            posinorm::dual_posinormal_threshold(spec));
        char line[256];
        std::snprintf(line, sizeof(line),
                      "  n-condition: %s (threshold %.10g); posinormal-condition: %s "
                      "(threshold %.10g)\n",
                      *cond ? "holds" : "fails",
                      posinorm::dual_kq_np_threshold(spec, n_power),
                      doc["posinormal_condition"].get<bool>() ? "holds" : "fails",
                      posinorm::dual_posinormal_threshold(spec));
        text += line;
      }
      if (generic) {
        const posinorm::LinearOp t = posinorm::build_lambert(spec);
        const posinorm::LinearOp dual = posinorm::cauchy_dual(t, rank_tol);
        const double pinv_dev =
            posinorm::pinv(t, rank_tol).max_abs_diff(posinorm::lambert_pinv(spec));
        const double dual_dev = dual.max_abs_diff(posinorm::lambert_cauchy_dual(spec));
        doc["pinv_closed_vs_generic"] = pinv_dev;
        doc["dual_closed_vs_generic"] = dual_dev;
        Json per_k = Json::array();
        bool all = true, any = false;
        for (long k = 1; k <= 3; ++k) {
          const auto rep =
              posinorm::is_kq_np_posinormal(dual, k, n_power, lambda_sq, psd_tol, spec_name);
          per_k.push_back(posinorm::io::report_to_json(rep));
          all = all && rep.verdict;
          any = any || rep.verdict;
        }
        direct = all;
        consistent = consistent && (all == any);  // k-independence
        doc["direct_psd_k123"] = std::move(per_k);
        char line[160];
        std::snprintf(line, sizeof(line),
                      "  direct PSD on the Cauchy dual, k in {1,2,3}: %s; closed-vs-generic "
                      "max dev %.3g\n",
                      all ? "holds" : (any ? "MIXED" : "fails"), std::max(pinv_dev, dual_dev));
        text += line;
        consistent = consistent && pinv_dev <= 1e-8 && dual_dev <= 1e-8;
      }
      if (cond && direct && *cond != *direct) consistent = false;
      doc["consistent"] = consistent;
      if (!consistent) text += "MISMATCH between closed-form and generic routes\n";
      exit_code = emit(doc, out_path, format == "json", consistent, text);
    });
  }

  // ---- tree ---------------------------------------------------------------
  auto* tr = app.add_subcommand("tree", "weighted shifts on rooted directed trees");
  {
    static std::string config_path, input_path, tree_name, gen_name, out_path,
        format = "text";
    static long depth = 16, interior = -1, k = 4, n = 2, arity = 1;
    static double lambda_sq = 16.0, weight = 1.0, psd_tol = posinorm::kDefaultPsdTol,
                  rank_tol = posinorm::kDefaultRankTol;
    static bool min_lambda = false, bounded = false;
    tr->add_option("--config", config_path, "JSON config file");
    auto* o_in = tr->add_option("--input", input_path, "JSON bundle (for --tree)");
    auto* o_tree = tr->add_option("--tree", tree_name, "tree id in the bundle");
    auto* o_gen = tr->add_option("--generator", gen_name,
                                 "two-branch|uniform|depth-weighted-path");
    auto* o_ar = tr->add_option("--arity", arity, "uniform generator arity");
    auto* o_wt = tr->add_option("--weight", weight, "uniform generator weight");
    auto* o_d = tr->add_option("--depth", depth, "truncation depth");
    auto* o_i = tr->add_option("--interior-depth", interior,
                               "compression depth (default depth-(k+n+1))");
    auto* o_k = tr->add_option("--k", k, "k");
    auto* o_n = tr->add_option("--n", n, "n");
    auto* o_l = tr->add_option("--lambda-sq", lambda_sq, "lambda^2");
    tr->add_flag("--min-lambda", min_lambda, "also report the least feasible lambda^2");
    tr->add_flag("--boundedness", bounded, "probe generator boundedness");
    auto* o_pt = tr->add_option("--psd-tol", psd_tol, "PSD tolerance");
    auto* o_rt = tr->add_option("--rank-tol", rank_tol, "rank tolerance");
    auto* o_out = tr->add_option("--out", out_path, "write JSON report here");
    auto* o_fmt = tr->add_option("--format", format, "text|json");
    tr->callback([&, o_in, o_tree, o_gen, o_ar, o_wt, o_d, o_i, o_k, o_n, o_l, o_pt, o_rt,
                  o_out, o_fmt] {
      const Json cfg = load_config(config_path);
      config_default(o_in, cfg, "input", input_path);
      config_default(o_tree, cfg, "tree", tree_name);
      config_default(o_gen, cfg, "generator", gen_name);
      config_default(o_ar, cfg, "arity", arity);
      config_default(o_wt, cfg, "weight", weight);
      config_default(o_d, cfg, "depth", depth);
      config_default(o_i, cfg, "interior_depth", interior);
      config_default(o_k, cfg, "k", k);
      config_default(o_n, cfg, "n", n);
      config_default(o_l, cfg, "lambda_sq", lambda_sq);
      config_default(o_pt, cfg, "psd_tol", psd_tol);
      config_default(o_rt, cfg, "rank_tol", rank_tol);
      config_default(o_out, cfg, "out", out_path);
      config_default(o_fmt, cfg, "format", format);

      Json doc;
      doc["schema_version"] = posinorm::io::kSchemaVersion;
      doc["command"] = "tree";
      std::string text;
      std::optional<posinorm::TreeTrunc> tree;
      std::optional<posinorm::TreeGenerator> gen;
      if (!gen_name.empty()) {
        gen = posinorm::TreeGenerator::by_name(gen_name, static_cast<int>(arity), weight);
        tree = gen->truncate(depth);
        doc["generator"] = gen_name;
      } else if (!tree_name.empty()) {
        const posinorm::io::Bundle bundle = posinorm::io::load_bundle_file(input_path);
        auto it = bundle.trees.find(tree_name);
        if (it == bundle.trees.end())
          throw std::runtime_error("no tree named '" + tree_name + "'");
        tree = it->second;
        doc["tree"] = tree_name;
      } else {
        throw std::runtime_error("tree: need --generator or --tree");
      }
      doc["depth"] = tree->max_depth;
      if (interior < 0) interior = tree->max_depth - (k + n + 1);
      doc["interior_depth"] = interior;

      if (bounded && gen) {
        const auto rep = posinorm::boundedness_report(*gen, depth);
        doc["boundedness"] = {{"sup_weight", rep.sup_weight},
                              {"max_branching", rep.max_branching},
                              {"bounded", rep.bounded},
                              {"unbounded_trend", rep.unbounded_trend},
                              {"probe_depth", rep.probe_depth}};
        char line[160];
        std::snprintf(line, sizeof(line),
                      "boundedness probe: sup|mu| = %.6g, max branching = %ld%s\n",
                      rep.sup_weight, rep.max_branching,
                      rep.unbounded_trend ? " (weights still growing with depth)" : "");
        text += line;
      }

      const auto rep = posinorm::tree_kq_np_check(*tree, k, n, lambda_sq, interior, psd_tol,
                                                  rank_tol);
      doc["report"] = posinorm::io::report_to_json(rep);
      char line[200];
      std::snprintf(line, sizeof(line),
                    "k=%ld n=%ld lambda^2=%.6g interior<=%ld: %s (min eig %.3g)\n", k, n,
                    lambda_sq, interior, rep.verdict ? "holds" : "fails",
                    rep.min_eigenvalue);
      text += line;
      if (min_lambda) {
        std::snprintf(line, sizeof(line), "least feasible lambda^2 = %.12g\n",
                      rep.minimal_lambda_sq);
        text += line;
      }
      exit_code = emit(doc, out_path, format == "json", rep.verdict, text);
    });
  }

  // ---- paper-examples -----------------------------------------------------
  auto* pex = app.add_subcommand("paper-examples",
                                 "run the built-in reference reproductions");
  {
    static std::string config_path, out_path, format = "json";
    static posinorm::repro::ReproConfig rc;
    static std::vector<std::string> select;
    pex->add_option("--config", config_path, "JSON config file");
    auto* o_seed = pex->add_option("--seed", rc.seed, "seed recorded in the report");
    auto* o_sel = pex->add_option("--select", select, "run only the named sections");
    auto* o_n1 = pex->add_option("--involution-n", rc.involution_n, "grid size, section 1");
    auto* o_n2 =
        pex->add_option("--multiplication-n", rc.multiplication_n, "grid size, section 2");
    auto* o_n3 = pex->add_option("--rank-one-n", rc.rank_one_n, "grid size, section 3");
    auto* o_n4 =
        pex->add_option("--dense-n", rc.rank_one_dense_n, "dense grid size, section 3");
    auto* o_td = pex->add_option("--tree-depth", rc.tree_depth, "tree depth, section 4");
    auto* o_ti = pex->add_option("--interior-depth", rc.tree_interior_depth,
                                 "interior depth, section 4");
    auto* o_out = pex->add_option("--out", out_path, "write JSON report here");
    auto* o_fmt = pex->add_option("--format", format, "text|json");
    pex->callback([&, o_seed, o_sel, o_n1, o_n2, o_n3, o_n4, o_td, o_ti, o_out, o_fmt] {
      const Json cfg = load_config(config_path);
      if (o_seed->count() == 0 && cfg.contains("seed")) rc.seed = cfg["seed"];
      if (o_sel->count() == 0 && cfg.contains("select"))
        select = cfg["select"].get<std::vector<std::string>>();
      config_default(o_n1, cfg, "involution_n", rc.involution_n);
      config_default(o_n2, cfg, "multiplication_n", rc.multiplication_n);
      config_default(o_n3, cfg, "rank_one_n", rc.rank_one_n);
      config_default(o_n4, cfg, "dense_n", rc.rank_one_dense_n);
      config_default(o_td, cfg, "tree_depth", rc.tree_depth);
      config_default(o_ti, cfg, "interior_depth", rc.tree_interior_depth);
      config_default(o_out, cfg, "out", out_path);
      config_default(o_fmt, cfg, "format", format);
      rc.select = select;
      const Json doc = posinorm::repro::run_paper_examples(rc);
      std::string text;
      for (const auto& s : doc["sections"]) {
        text += std::string(s["pass"].get<bool>() ? "PASS " : "FAIL ") +
                s["name"].get<std::string>() + "\n";
        for (const auto& c : s["claims"])
          text += std::string("  ") + (c["pass"].get<bool>() ? "pass " : "FAIL ") +
                  c["claim"].get<std::string>() + "\n";
      }
      exit_code =
          emit(doc, out_path, format == "json", posinorm::repro::report_passed(doc), text);
    });
  }

  // ---- oracle-check -------------------------------------------------------
  auto* ochk = app.add_subcommand(
      "oracle-check", "randomized criterion-vs-PSD cross-validation");
  {
    static std::string config_path, out_path, format = "json";
    static posinorm::repro::OracleConfig oc;
    static long trials = -1;
    ochk->add_option("--config", config_path, "JSON config file");
    auto* o_seed = ochk->add_option("--seed", oc.seed, "RNG seed");
    auto* o_tr = ochk->add_option("--trials", trials, "override every suite's trial count");
    auto* o_ct = ochk->add_option("--comp-trials", oc.comp_trials, "composition trials");
    auto* o_lt = ochk->add_option("--lambert-trials", oc.lambert_trials, "lambert trials");
    auto* o_tt = ochk->add_option("--tree-trials", oc.tree_trials, "tree trials");
    auto* o_out = ochk->add_option("--out", out_path, "write JSON report here");
    auto* o_fmt = ochk->add_option("--format", format, "text|json");
    ochk->callback([&, o_seed, o_tr, o_ct, o_lt, o_tt, o_out, o_fmt] {
      const Json cfg = load_config(config_path);
      if (o_seed->count() == 0 && cfg.contains("seed")) oc.seed = cfg["seed"];
      if (o_tr->count() == 0 && cfg.contains("trials")) trials = cfg["trials"];
      config_default(o_ct, cfg, "comp_trials", oc.comp_trials);
      config_default(o_lt, cfg, "lambert_trials", oc.lambert_trials);
      config_default(o_tt, cfg, "tree_trials", oc.tree_trials);
      config_default(o_out, cfg, "out", out_path);
      config_default(o_fmt, cfg, "format", format);
      if (trials >= 0) {
        oc.comp_trials = static_cast<int>(trials);
        oc.lambert_trials = static_cast<int>(trials);
        oc.tree_trials = static_cast<int>(trials);
      }
      const Json doc = posinorm::repro::run_oracle_check(oc);
      std::string text;
      for (const auto& s : doc["sections"]) {
        text += std::string(s["pass"].get<bool>() ? "PASS " : "FAIL ") +
                s["name"].get<std::string>() + " (" + std::to_string(s["trials"].get<long>()) +
                " trials)\n";
      }
      exit_code =
          emit(doc, out_path, format == "json", posinorm::repro::report_passed(doc), text);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

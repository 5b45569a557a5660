#include "posinorm/repro.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

namespace posinorm::repro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SectionBuilder {
  Json section;
  bool pass = true;

  explicit SectionBuilder(const std::string& name) {
    section["name"] = name;
    section["claims"] = Json::array();
  }

  void claim_close(const std::string& name, double computed, double expected, double rel_tol,
                   bool adjusted = false) {
    const double denom = std::max(1.0, std::abs(expected));
    const bool ok = std::abs(computed - expected) <= rel_tol * denom;
    Json c;
    c["claim"] = name;
    c["computed"] = io::finite_or_string(computed);
    c["expected"] = io::finite_or_string(expected);
    c["tolerance"] = rel_tol;
    if (adjusted) c["tolerance_adjusted"] = true;
    c["pass"] = ok;
    section["claims"].push_back(std::move(c));
    pass = pass && ok;
  }

  void claim_bool(const std::string& name, bool computed, bool expected) {
    Json c;
    c["claim"] = name;
    c["computed"] = computed;
    c["expected"] = expected;
    c["pass"] = computed == expected;
    section["claims"].push_back(std::move(c));
    pass = pass && (computed == expected);
  }

  void claim_count(const std::string& name, long computed, long expected) {
    Json c;
    c["claim"] = name;
    c["computed"] = computed;
    c["expected"] = expected;
    c["pass"] = computed == expected;
    section["claims"].push_back(std::move(c));
    pass = pass && (computed == expected);
  }

  Json finish() {
    section["pass"] = pass;
    return std::move(section);
  }
};

double moment_rel_tol(long n) { return std::max(1e-6, 2.0 / (double(n) * double(n))); }

// ---------------------------------------------------------------------------
// Section 1: composition operator of the atom-level involution on a uniform
// grid. Every h_k is identically 1, criteria and direct tests flip at 1.
Json involution_section(const ReproConfig& cfg) {
  SectionBuilder sec("involution-composition");
  sec.section["params"] = {{"n", cfg.involution_n}};
  const UnitGrid grid = unit_interval_grid(cfg.involution_n);
  const PointMap inv = PointMap::grid_involution(grid.space);
  const auto spec = WeightedCompositionSpec::unweighted(inv);
  const LinearOp c = build_composition(spec);
  const LinearOp cadj = adjoint(c);

  double h_dev = 0.0;
  for (long k = 1; k <= 4; ++k)
    h_dev = std::max(h_dev, (rn_derivative(inv, k).array() - 1.0).abs().maxCoeff());
  sec.claim_close("h_k identically 1 for k <= 4 (exact)", h_dev, 0.0, 0.0);

  bool crit_all = true, crit_adj_all = true;
  double min_dev = 0.0;
  long mismatches = 0;
  for (long k = 0; k <= 3; ++k)
    for (long n = 1; n <= 3; ++n) {
      crit_all = crit_all && ct_criterion(spec, k, n, 1.0, cfg.psd_tol);
      crit_adj_all = crit_adj_all && ct_adjoint_criterion(spec, k, n, 1.0, cfg.psd_tol);
      min_dev = std::max(
          min_dev, std::abs(minimal_lambda_sq(c, k, n, cfg.rank_tol) - 1.0));
      for (double lam2 : {0.9, 1.0, 1.1}) {
        const bool crit = ct_criterion(spec, k, n, lam2, cfg.psd_tol);
        const bool direct = is_kq_np_posinormal(c, k, n, lam2, cfg.psd_tol).verdict;
        if (crit != direct) ++mismatches;
        const bool crit_a = ct_adjoint_criterion(spec, k, n, lam2, cfg.psd_tol);
        const bool direct_a = is_kq_np_posinormal(cadj, k, n, lam2, cfg.psd_tol).verdict;
        if (crit_a != direct_a) ++mismatches;
      }
    }
  sec.claim_bool("criterion holds at lambda^2 = 1 for k <= 3, n <= 3", crit_all, true);
  sec.claim_bool("adjoint criterion holds at lambda^2 = 1 for k <= 3, n <= 3", crit_adj_all,
                 true);
  sec.claim_close("minimal lambda^2 equals 1 on the grid", min_dev, 0.0, 1e-10);
  sec.claim_count("criterion vs direct PSD mismatches", mismatches, 0);
  return sec.finish();
}

// ---------------------------------------------------------------------------
// Section 2: identity transformation with weight pi(x) = x, i.e. the
// multiplication operator by x. The pointwise form gives
// minimal lambda^2 = max_i x_i^{2(n-1)} = (1 - 1/(2N))^{2(n-1)}.
Json multiplication_section(const ReproConfig& cfg) {
  SectionBuilder sec("identity-weighted-multiplication");
  const long n_atoms = cfg.multiplication_n;
  sec.section["params"] = {{"n", n_atoms}};
  const UnitGrid grid = unit_interval_grid(n_atoms);
  const PointMap id = PointMap::identity(grid.space);
  const WeightedCompositionSpec spec(id, grid.sample_points);
  const LinearOp w = build_weighted_composition(spec);

  const double xmax = 1.0 - 1.0 / (2.0 * double(n_atoms));
  double min_dev = 0.0;
  long mismatches = 0;
  for (long k = 0; k <= 3; ++k)
    for (long n = 1; n <= 3; ++n) {
      const double expected = std::pow(xmax, 2.0 * double(n - 1));
      min_dev = std::max(min_dev,
                         std::abs(minimal_lambda_sq(w, k, n, cfg.rank_tol) - expected));
      const auto parts = criterion_parts(spec, CriterionKind::kWeighted, k, n);
      const double thr = criterion_threshold(parts);
      std::vector<double> lams = {0.25, 0.5, 0.9, 1.0, 1.5};
      if (std::isfinite(thr) && thr > 0) {
        lams.push_back(thr * (1.0 - 1e-3));
        lams.push_back(thr * (1.0 + 1e-3));
      }
      const FormPencil fp = kq_np_pencil(w, k, n);
      for (double lam2 : lams) {
        const bool crit = criterion_holds(parts, lam2, cfg.psd_tol);
        const bool direct =
            psd_verdict_hermitian(lam2 * fp.p - fp.q, cfg.psd_tol).is_psd;
        if (crit != direct) ++mismatches;
      }
    }
  sec.claim_close("minimal lambda^2 equals (1 - 1/(2N))^{2(n-1)}", min_dev, 0.0, 1e-8);
  sec.claim_count("weighted criterion vs direct PSD mismatches", mismatches, 0);
  return sec.finish();
}

// ---------------------------------------------------------------------------
// Section 3: rank-one conditional operator T f = w * integral(u f) on the unit
// grid with u(x) = x/(2 sqrt 2), w(x) = 5x^2 + 3. Closed-form moments have the
// exact values 1/24, 24, 11/(8 sqrt 2); the Cauchy dual flips at the moment
// thresholds for every k >= 1.
LambertSpec rank_one_spec(long n_atoms) {
  const UnitGrid grid = unit_interval_grid(n_atoms);
  Eigen::VectorXd u = grid.sample_points / (2.0 * std::sqrt(2.0));
  Eigen::VectorXd w =
      5.0 * grid.sample_points.cwiseProduct(grid.sample_points).array() + 3.0;
  return LambertSpec(Partition::trivial(grid.space), std::move(u), std::move(w));
}

Json rank_one_section(const ReproConfig& cfg) {
  SectionBuilder sec("rank-one-conditional");
  sec.section["params"] = {{"n", cfg.rank_one_n}, {"dense_n", cfg.rank_one_dense_n}};
  const long n = cfg.rank_one_n;
  const double rel = moment_rel_tol(n);
  const bool adjusted = rel > 1e-6;
  const double flip_eps = std::max(1e-6, 4.0 / (double(n) * double(n)));

  const LambertSpec spec = rank_one_spec(n);
  const LambertMoments mo = lambert_moments(spec);
  const double eu2 = mo.e_u2(0), ew2 = mo.e_w2(0), euw = mo.e_uw(0);
  const double exact_euw = 11.0 / (8.0 * std::sqrt(2.0));
  sec.claim_close("E(u^2) = 1/24", eu2, 1.0 / 24.0, rel, adjusted);
  sec.claim_close("E(w^2) = 24", ew2, 24.0, rel, adjusted);
  sec.claim_close("E(uw) = 11/(8 sqrt 2)", euw, exact_euw, rel, adjusted);

  sec.claim_close("posinormal-condition threshold = 128/121",
                  dual_posinormal_threshold(spec), 128.0 / 121.0, std::max(1e-6, 3 * rel),
                  adjusted);
  sec.claim_bool("n=2 condition false just below the flip",
                 dual_kq_np_condition(spec, 2, 1.0 - flip_eps, cfg.psd_tol), false);
  sec.claim_bool("n=2 condition true just above the flip",
                 dual_kq_np_condition(spec, 2, 1.0 + flip_eps, cfg.psd_tol), true);
  sec.claim_close("n=4 condition threshold = (121/128)^2", dual_kq_np_threshold(spec, 4),
                  std::pow(121.0 / 128.0, 2.0), std::max(1e-6, 6 * rel), adjusted);
  sec.claim_bool("n=4 condition holds at lambda^2 = 0.9",
                 dual_kq_np_condition(spec, 4, 0.9, cfg.psd_tol), true);
  sec.claim_bool("posinormal condition fails at lambda^2 = 0.9",
                 dual_posinormal_condition(spec, 0.9, cfg.psd_tol), false);

  // Dense cross-check: the same flips certified by eigenvalues of the actual
  // conjugated forms, on a grid small enough to build matrices.
  const long dn = cfg.rank_one_dense_n;
  const LambertSpec dspec = rank_one_spec(dn);
  const LinearOp t = build_lambert(dspec);
  const LinearOp dual_generic = cauchy_dual(t, cfg.rank_tol);
  const LinearOp dual_closed = lambert_cauchy_dual(dspec);
  sec.claim_close("closed-form Cauchy dual matches generic (dense grid)",
                  dual_generic.max_abs_diff(dual_closed), 0.0, 1e-10);

  const double thr2 = dual_kq_np_threshold(dspec, 2);
  const double thr4 = dual_kq_np_threshold(dspec, 4);
  bool flips_ok = true, n4_ok = true;
  for (long k = 1; k <= 3; ++k) {
    flips_ok = flips_ok &&
               !is_kq_np_posinormal(dual_generic, k, 2, thr2 * (1.0 - 1e-6), cfg.psd_tol)
                    .verdict &&
               is_kq_np_posinormal(dual_generic, k, 2, thr2 * (1.0 + 1e-6), cfg.psd_tol)
                   .verdict;
    n4_ok = n4_ok &&
            is_kq_np_posinormal(dual_generic, k, 4, 0.9, cfg.psd_tol).verdict &&
            !is_kq_np_posinormal(dual_generic, k, 4, thr4 * (1.0 - 1e-6), cfg.psd_tol)
                 .verdict;
  }
  sec.claim_bool("direct PSD flips at the n=2 threshold for k in {1,2,3}", flips_ok, true);
  sec.claim_bool("direct PSD confirms n=4 at 0.9 and the n=4 threshold", n4_ok, true);
  sec.claim_bool("direct PSD: dual not posinormal at lambda^2 = 0.9",
                 is_posinormal(dual_generic, 0.9, cfg.psd_tol).verdict, false);
  return sec.finish();
}

// ---------------------------------------------------------------------------
// Section 4: two-branch weighted tree shift, interior-compressed tests.
Json tree_section(const ReproConfig& cfg) {
  SectionBuilder sec("two-branch-tree");
  sec.section["params"] = {{"depth", cfg.tree_depth},
                           {"interior_depth", cfg.tree_interior_depth}};
  const TreeGenerator gen = TreeGenerator::two_branch();
  const TreeTrunc tree = gen.truncate(cfg.tree_depth);
  sec.claim_bool("adjoint action matches the displayed formula",
                 shift_adjoint_check(tree), true);

  const long k0 = 4, n0 = 2;
  const auto rep = tree_kq_np_check(tree, k0, n0, 16.0, cfg.tree_interior_depth,
                                    cfg.psd_tol, cfg.rank_tol);
  sec.claim_bool("k=4, n=2 holds at lambda^2 = 16", rep.verdict, true);
  sec.claim_close("k=4, n=2 interior minimal lambda^2 = 4", rep.minimal_lambda_sq, 4.0,
                  1e-9);

  // Independent route: Gram matrices assembled by tree-recursive applications
  // of the shift, minimal value located by bisection.
  {
    const std::vector<Eigen::Index> idx = interior_vertices(tree, cfg.tree_interior_depth);
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd av(tree.size(), m), bv(tree.size(), m);
    for (Eigen::Index c = 0; c < m; ++c) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(tree.size());
      e(idx[static_cast<size_t>(c)]) = 1.0;
      Eigen::VectorXcd a = e;
      for (long i = 0; i < k0 + 1; ++i) a = tree_shift_apply(tree, a);
      Eigen::VectorXcd b = e;
      for (long i = 0; i < k0; ++i) b = tree_shift_apply(tree, b);
      for (long i = 0; i < n0; ++i) b = tree_shift_adjoint_apply(tree, b);
      av.col(c) = a;
      bv.col(c) = b;
    }
    const Eigen::MatrixXcd pg = av.adjoint() * av;
    const Eigen::MatrixXcd qg = bv.adjoint() * bv;
    const double oracle = bisect_minimal_lambda_sq([&](double lam2) {
      return psd_verdict_hermitian(lam2 * pg - qg, cfg.psd_tol).is_psd;
    });
    sec.claim_close("bisection oracle over recursive Gram matrices agrees", oracle,
                    rep.minimal_lambda_sq, 1e-8);
  }

  double sweep_dev = 0.0;
  bool bound_ok = true;
  for (long n = 1; n <= 3; ++n)
    for (long k = n + 2; k <= 6; ++k) {
      const long interior =
          std::min(cfg.tree_interior_depth, cfg.tree_depth - (k + n + 1));
      const double got = tree_minimal_lambda_sq(tree, k, n, interior, cfg.rank_tol);
      bound_ok = bound_ok && got <= std::pow(2.0, 2.0 * double(n)) + 1e-9;
      sweep_dev = std::max(sweep_dev, std::abs(got - std::pow(2.0, 2.0 * double(n) - 2.0)));
    }
  sec.claim_bool("minimal lambda^2 <= 2^{2n} for all k > n+1, k <= 6, n <= 3", bound_ok,
                 true);
  sec.claim_close("sharper value 2^{2n-2} across the sweep", sweep_dev, 0.0, 1e-9);

  const TreeTrunc tree12 = gen.truncate(12);
  const double m12 = tree_minimal_lambda_sq(tree12, k0, n0, 12 - (k0 + n0 + 1), cfg.rank_tol);
  sec.claim_close("truncation stability between depths 12 and 16", m12,
                  rep.minimal_lambda_sq, 1e-9);
  return sec.finish();
}

}  // namespace

Json run_paper_examples(const ReproConfig& cfg) {
  Json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "paper-examples";
  doc["seed"] = cfg.seed;
  doc["tolerances"] = {{"psd_tol", cfg.psd_tol}, {"rank_tol", cfg.rank_tol}};
  doc["sections"] = Json::array();

  auto selected = [&](const std::string& name) {
    if (cfg.select.empty()) return true;
    for (const auto& s : cfg.select)
      if (s == name) return true;
    return false;
  };

  bool pass = true;
  if (selected("involution-composition")) {
    Json s = involution_section(cfg);
    pass = pass && s["pass"].get<bool>();
    doc["sections"].push_back(std::move(s));
  }
  if (selected("identity-weighted-multiplication")) {
    Json s = multiplication_section(cfg);
    pass = pass && s["pass"].get<bool>();
    doc["sections"].push_back(std::move(s));
  }
  if (selected("rank-one-conditional")) {
    Json s = rank_one_section(cfg);
    pass = pass && s["pass"].get<bool>();
    doc["sections"].push_back(std::move(s));
  }
  if (selected("two-branch-tree")) {
    Json s = tree_section(cfg);
    pass = pass && s["pass"].get<bool>();
    doc["sections"].push_back(std::move(s));
  }
  doc["pass"] = pass;
  return doc;
}

double bisect_minimal_lambda_sq(const std::function<bool(double)>& feasible,
                                double lambda_cap) {
  if (feasible(0.0)) return 0.0;
  double hi = 1.0;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (hi > lambda_cap) return kInf;
  }
  double lo = (hi > 1.0) ? hi / 2.0 : 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

namespace {

struct TrialRng {
  std::mt19937_64 eng;
  explicit TrialRng(std::uint64_t seed) : eng(seed) {}
  double uniform(double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(eng);
  }
  long integer(long a, long b) {  // inclusive
    return a + static_cast<long>(eng() % static_cast<std::uint64_t>(b - a + 1));
  }
};

// lambda^2 away from the flip threshold by a relative margin, so the moment
// and eigenvalue tolerance scales cannot disagree at the knife edge.
double offset_lambda(TrialRng& rng, double threshold, bool& expected_feasible,
                     double min_delta = 1e-3) {
  if (threshold == 0.0) {
    expected_feasible = true;
    return rng.uniform(0.5, 2.0);
  }
  if (std::isinf(threshold)) {
    expected_feasible = false;
    return rng.uniform(0.5, 2.0);
  }
  const double delta = rng.uniform(min_delta, 0.5);
  expected_feasible = rng.integer(0, 1) == 1;
  return expected_feasible ? threshold * (1.0 + delta) : threshold * (1.0 - delta);
}

Json comp_suite(const OracleConfig& cfg) {
  SectionBuilder sec("composition-criteria-vs-psd");
  TrialRng rng(cfg.seed * 6364136223846793005ULL + 101);
  long disagreements = 0;
  Json examples = Json::array();
  for (int trial = 0; trial < cfg.comp_trials; ++trial) {
    const long na = rng.integer(3, 8);
    Eigen::VectorXd masses(na);
    for (Eigen::Index i = 0; i < na; ++i) masses(i) = rng.uniform(0.5, 2.0);
    SpacePtr sp = make_space(
        [&] {
          std::vector<std::string> names;
          for (Eigen::Index i = 0; i < na; ++i) names.push_back("a" + std::to_string(i));
          return names;
        }(),
        masses);
    std::vector<Eigen::Index> perm(static_cast<size_t>(na));
    for (Eigen::Index i = 0; i < na; ++i) perm[static_cast<size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng.eng);
    PointMap map(sp, perm);
    Eigen::VectorXd pi(na);
    for (Eigen::Index i = 0; i < na; ++i) pi(i) = rng.uniform(0.05, 2.0);
    if (rng.integer(0, 3) == 0) pi(rng.integer(0, na - 1)) = 0.0;

    const WeightedCompositionSpec spec_c = WeightedCompositionSpec::unweighted(map);
    const WeightedCompositionSpec spec_w(map, pi);
    const LinearOp c = build_composition(spec_c);
    const LinearOp w = build_weighted_composition(spec_w);
    const long k = rng.integer(0, 3);
    const long n = rng.integer(1, 3);

    struct Case {
      CriterionKind kind;
      const WeightedCompositionSpec* spec;
      LinearOp op;
    };
    const Case cases[] = {
        {CriterionKind::kComposition, &spec_c, c},
        {CriterionKind::kCompositionAdjoint, &spec_c, adjoint(c)},
        {CriterionKind::kWeighted, &spec_w, w},
        {CriterionKind::kWeightedAdjoint, &spec_w, adjoint(w)},
    };
    for (const auto& cs : cases) {
      const auto parts = criterion_parts(*cs.spec, cs.kind, k, n);
      bool expected;
      const double lam2 = offset_lambda(rng, criterion_threshold(parts), expected);
      bool crit = criterion_holds(parts, lam2, cfg.psd_tol);
      if (cfg.mutate_criterion) crit = cfg.mutate_criterion(crit);
      const bool direct = is_kq_np_posinormal(cs.op, k, n, lam2, cfg.psd_tol).verdict;
      if (crit != direct) {
        ++disagreements;
        if (examples.size() < 3)
          examples.push_back({{"trial", trial},
                              {"kind", static_cast<int>(cs.kind)},
                              {"k", k},
                              {"n", n},
                              {"lambda_sq", lam2},
                              {"criterion", crit},
                              {"direct", direct}});
      }
    }
  }
  sec.section["trials"] = cfg.comp_trials;
  sec.claim_count("disagreements", disagreements, 0);
  if (!examples.empty()) sec.section["disagreement_examples"] = std::move(examples);
  return sec.finish();
}

Json lambert_suite(const OracleConfig& cfg) {
  SectionBuilder sec("lambert-dual-condition-vs-psd");
  TrialRng rng(cfg.seed * 6364136223846793005ULL + 202);
  long disagreements = 0;
  Json examples = Json::array();
  for (int trial = 0; trial < cfg.lambert_trials; ++trial) {
    const long na = rng.integer(4, 9);
    Eigen::VectorXd masses(na);
    for (Eigen::Index i = 0; i < na; ++i) masses(i) = rng.uniform(0.5, 2.0);
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < na; ++i) names.push_back("a" + std::to_string(i));
    SpacePtr sp = make_space(names, masses);

    const long nb = rng.integer(1, 3);
    std::vector<std::vector<Eigen::Index>> blocks(static_cast<size_t>(nb));
    for (Eigen::Index i = 0; i < na; ++i)
      blocks[static_cast<size_t>(rng.integer(0, nb - 1))].push_back(i);
    std::vector<std::vector<Eigen::Index>> nonempty;
    for (auto& b : blocks)
      if (!b.empty()) nonempty.push_back(std::move(b));
    Partition part(sp, std::move(nonempty));

    // strictly positive weights keep E(uw) > 0 everywhere, the regime in
    // which the pointwise condition is equivalent to the PSD statement; the
    // moderate range keeps the dual's high powers numerically resolvable
    Eigen::VectorXd u(na), w(na);
    for (Eigen::Index i = 0; i < na; ++i) {
      u(i) = rng.uniform(0.5, 1.5);
      w(i) = rng.uniform(0.5, 1.5);
    }
    const LambertSpec spec(part, u, w);
    const LinearOp dual = cauchy_dual(build_lambert(spec), cfg.rank_tol);
    const long k = rng.integer(1, 3);
    const long n = rng.integer(1, 4);
    bool expected;
    const double lam2 = offset_lambda(rng, dual_kq_np_threshold(spec, n), expected, 0.02);
    bool cond = dual_kq_np_condition(spec, n, lam2, cfg.psd_tol);
    if (cfg.mutate_criterion) cond = cfg.mutate_criterion(cond);
    // unit-normalize the dual with the exact lambda compensation, so the
    // direct eigenvalue margins live at order one
    const double s = dual.max_abs();
    const LinearOp dual_unit = (1.0 / s) * dual;
    const double lam2_unit = lam2 * std::pow(s, 2.0 - 2.0 * double(n));
    const bool direct = is_kq_np_posinormal(dual_unit, k, n, lam2_unit, cfg.psd_tol).verdict;
    if (cond != direct) {
      ++disagreements;
      if (examples.size() < 3)
        examples.push_back({{"trial", trial},
                            {"k", k},
                            {"n", n},
                            {"lambda_sq", lam2},
                            {"condition", cond},
                            {"direct", direct}});
    }
  }
  sec.section["trials"] = cfg.lambert_trials;
  sec.claim_count("disagreements", disagreements, 0);
  if (!examples.empty()) sec.section["disagreement_examples"] = std::move(examples);
  return sec.finish();
}

Json tree_suite(const OracleConfig& cfg) {
  SectionBuilder sec("tree-shift-interior-vs-recursive-oracle");
  TrialRng rng(cfg.seed * 6364136223846793005ULL + 303);
  long disagreements = 0;
  double max_min_dev = 0.0;
  Json examples = Json::array();
  for (int trial = 0; trial < cfg.tree_trials; ++trial) {
    const long depth = rng.integer(4, 8);
    std::vector<std::string> names{"root"};
    std::vector<Eigen::Index> parent{-1};
    std::vector<double> weights{0.0};
    std::vector<Eigen::Index> frontier{0};
    std::vector<long> vdepth{0};
    for (long lev = 1; lev <= depth; ++lev) {
      std::vector<Eigen::Index> next;
      for (Eigen::Index p : frontier) {
        const long kids = (rng.integer(0, 9) < 3 && names.size() < 40) ? 2 : 1;
        for (long c = 0; c < kids; ++c) {
          names.push_back("t" + std::to_string(names.size()));
          parent.push_back(p);
          // weights bounded away from 0 (or exactly 0) keep kernel-violation
          // energies well above the eigenvalue tolerance
          double mu = rng.uniform(0.6, 1.5);
          if (rng.integer(0, 9) == 0) mu = 0.0;
          weights.push_back(mu);
          vdepth.push_back(lev);
          next.push_back(static_cast<Eigen::Index>(names.size()) - 1);
        }
      }
      frontier = std::move(next);
    }
    Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(
        weights.data(), static_cast<Eigen::Index>(weights.size()));
    const TreeTrunc tree(names, 0, parent, wv);

    const long n = rng.integer(1, 3);
    const long k = rng.integer(0, std::min(3L, depth - n - 1));
    const long interior = depth - (k + n + 1);

    const double minimal = tree_minimal_lambda_sq(tree, k, n, interior, cfg.rank_tol);
    max_min_dev = std::max(
        max_min_dev, [&] {
          const std::vector<Eigen::Index> idx = interior_vertices(tree, interior);
          const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
          Eigen::MatrixXcd av(tree.size(), m), bv(tree.size(), m);
          for (Eigen::Index c = 0; c < m; ++c) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(tree.size());
            e(idx[static_cast<size_t>(c)]) = 1.0;
            Eigen::VectorXcd a = e;
            for (long i = 0; i < k + 1; ++i) a = tree_shift_apply(tree, a);
            Eigen::VectorXcd b = e;
            for (long i = 0; i < k; ++i) b = tree_shift_apply(tree, b);
            for (long i = 0; i < n; ++i) b = tree_shift_adjoint_apply(tree, b);
            av.col(c) = a;
            bv.col(c) = b;
          }
          const Eigen::MatrixXcd pg = av.adjoint() * av;
          const Eigen::MatrixXcd qg = bv.adjoint() * bv;
          // fixed-scale feasibility: the tolerance must not grow with lambda,
          // or infeasible pencils would eventually look feasible; the Gram
          // entries are exact products of weights, so a sharp cut is safe
          const double qscale = std::max(1.0, qg.cwiseAbs().maxCoeff());
          const double oracle = bisect_minimal_lambda_sq(
              [&](double lam2) {
                Eigen::MatrixXcd f = lam2 * pg - qg;
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
                    0.5 * (f + f.adjoint().eval()));
                return es.eigenvalues().minCoeff() >= -1e-12 * qscale;
              },
              1e10);
          if (std::isinf(oracle) || std::isinf(minimal))
            return (std::isinf(oracle) && std::isinf(minimal)) ? 0.0 : kInf;
          return std::abs(oracle - minimal) / std::max(1.0, minimal);
        }());

    bool expected;
    const double lam2 = offset_lambda(rng, minimal, expected);
    bool via_minimal = lam2 >= minimal;
    if (cfg.mutate_criterion) via_minimal = cfg.mutate_criterion(via_minimal);
    const bool direct =
        tree_kq_np_check(tree, k, n, lam2, interior, cfg.psd_tol, cfg.rank_tol).verdict;
    if (via_minimal != direct) {
      ++disagreements;
      if (examples.size() < 3)
        examples.push_back(
            {{"trial", trial}, {"k", k}, {"n", n}, {"lambda_sq", lam2}, {"direct", direct}});
    }
  }
  sec.section["trials"] = cfg.tree_trials;
  sec.claim_count("disagreements", disagreements, 0);
  sec.claim_close("pencil vs bisection oracle max relative deviation", max_min_dev, 0.0,
                  1e-8);
  if (!examples.empty()) sec.section["disagreement_examples"] = std::move(examples);
  return sec.finish();
}

}  // namespace

Json run_oracle_check(const OracleConfig& cfg) {
  Json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "oracle-check";
  doc["seed"] = cfg.seed;
  doc["tolerances"] = {{"psd_tol", cfg.psd_tol}, {"rank_tol", cfg.rank_tol}};
  doc["sections"] = Json::array();
  bool pass = true;
  for (Json s : {comp_suite(cfg), lambert_suite(cfg), tree_suite(cfg)}) {
    pass = pass && s["pass"].get<bool>();
    doc["sections"].push_back(std::move(s));
  }
  doc["pass"] = pass;
  return doc;
}

bool report_passed(const Json& report) { return report.at("pass").get<bool>(); }

}  // namespace posinorm::repro

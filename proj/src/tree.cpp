#include "posinorm/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace posinorm {

TreeTrunc::TreeTrunc(std::vector<std::string> vertices_, Eigen::Index root_,
                     std::vector<Eigen::Index> parent_, Eigen::VectorXd weights_)
    : vertices(std::move(vertices_)),
      root(root_),
      parent(std::move(parent_)),
      weights(std::move(weights_)) {
  const Eigen::Index n = size();
  if (n == 0) throw std::invalid_argument("TreeTrunc: empty vertex set");
  if (root < 0 || root >= n) throw std::invalid_argument("TreeTrunc: root out of range");
  if (static_cast<Eigen::Index>(parent.size()) != n || weights.size() != n)
    throw std::invalid_argument("TreeTrunc: parent/weights length mismatch");
  if (parent[static_cast<size_t>(root)] != -1)
    throw std::invalid_argument("TreeTrunc: root must have parent -1");
  depth.assign(static_cast<size_t>(n), -1);
  depth[static_cast<size_t>(root)] = 0;
  for (Eigen::Index v = 0; v < n; ++v) {
    if (v == root) continue;
    const Eigen::Index p = parent[static_cast<size_t>(v)];
    if (p < 0 || p >= n) throw std::invalid_argument("TreeTrunc: second root or bad parent at " +
                                                     vertices[static_cast<size_t>(v)]);
    if (!(weights(v) >= 0.0))
      throw std::invalid_argument("TreeTrunc: negative weight at " +
                                  vertices[static_cast<size_t>(v)]);
    // walk up; a walk longer than n vertices means a cycle
    Eigen::Index cur = v;
    long steps = 0;
    while (cur != root) {
      cur = parent[static_cast<size_t>(cur)];
      if (cur < 0 || ++steps > n)
        throw std::invalid_argument("TreeTrunc: vertex not reachable from root: " +
                                    vertices[static_cast<size_t>(v)]);
    }
    depth[static_cast<size_t>(v)] = steps;
  }
  max_depth = *std::max_element(depth.begin(), depth.end());
}

std::vector<Eigen::Index> TreeTrunc::children(Eigen::Index v) const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index u = 0; u < size(); ++u)
    if (u != root && parent[static_cast<size_t>(u)] == v) out.push_back(u);
  return out;
}

long TreeTrunc::max_branching() const {
  std::vector<long> count(static_cast<size_t>(size()), 0);
  for (Eigen::Index u = 0; u < size(); ++u)
    if (u != root) ++count[static_cast<size_t>(parent[static_cast<size_t>(u)])];
  return *std::max_element(count.begin(), count.end());
}

TreeGenerator::TreeGenerator(std::string name, int arity, double weight)
    : name_(std::move(name)), arity_(arity), weight_(weight) {}

TreeGenerator TreeGenerator::two_branch() { return TreeGenerator("two-branch", 2, 0.0); }

TreeGenerator TreeGenerator::uniform(int arity, double weight) {
  if (arity < 1) throw std::invalid_argument("TreeGenerator::uniform: arity >= 1");
  if (!(weight >= 0)) throw std::invalid_argument("TreeGenerator::uniform: weight >= 0");
  return TreeGenerator("uniform", arity, weight);
}

TreeGenerator TreeGenerator::depth_weighted_path() {
  return TreeGenerator("depth-weighted-path", 1, 0.0);
}

TreeGenerator TreeGenerator::by_name(const std::string& name, int arity, double weight) {
  if (name == "two-branch") return two_branch();
  if (name == "uniform") return uniform(arity, weight);
  if (name == "depth-weighted-path") return depth_weighted_path();
  throw std::invalid_argument("unknown tree generator: " + name);
}

TreeTrunc TreeGenerator::truncate(long d) const {
  if (d < 1) throw std::invalid_argument("TreeGenerator::truncate: depth >= 1 required");
  std::vector<std::string> names{"root"};
  std::vector<Eigen::Index> parent{-1};
  std::vector<double> weights{0.0};

  if (name_ == "two-branch") {
    // branch b in {1,2}, vertex j at depth j; weights per the displayed action:
    // branch 1: 1, 2, 2, ...   branch 2: 1, 1/2, 1, 1, ...
    for (int b = 1; b <= 2; ++b) {
      Eigen::Index prev = 0;
      for (long j = 1; j <= d; ++j) {
        names.push_back("v" + std::to_string(b) + "." + std::to_string(j));
        parent.push_back(prev);
        double mu;
        if (b == 1)
          mu = (j == 1) ? 1.0 : 2.0;
        else
          mu = (j == 1) ? 1.0 : (j == 2 ? 0.5 : 1.0);
        weights.push_back(mu);
        prev = static_cast<Eigen::Index>(names.size()) - 1;
      }
    }
  } else if (name_ == "uniform") {
    std::vector<Eigen::Index> frontier{0};
    for (long lev = 1; lev <= d; ++lev) {
      std::vector<Eigen::Index> next;
      for (Eigen::Index p : frontier) {
        for (int c = 0; c < arity_; ++c) {
          names.push_back(names[static_cast<size_t>(p)] + "." + std::to_string(c));
          parent.push_back(p);
          weights.push_back(weight_);
          next.push_back(static_cast<Eigen::Index>(names.size()) - 1);
        }
      }
      frontier = std::move(next);
    }
  } else {  // depth-weighted-path
    Eigen::Index prev = 0;
    for (long j = 1; j <= d; ++j) {
      names.push_back("p" + std::to_string(j));
      parent.push_back(prev);
      weights.push_back(double(j));
      prev = static_cast<Eigen::Index>(names.size()) - 1;
    }
  }
  Eigen::VectorXd wv =
      Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return TreeTrunc(std::move(names), 0, std::move(parent), std::move(wv));
}

LinearOp shift_matrix(const TreeTrunc& tree) {
  const Eigen::Index n = tree.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index v = 0; v < n; ++v)
    if (v != tree.root) m(v, tree.parent[static_cast<size_t>(v)]) = tree.weights(v);
  return LinearOp(make_uniform_space(n, double(n)), std::move(m));
}

bool shift_adjoint_check(const TreeTrunc& tree, double tol) {
  const LinearOp s = shift_matrix(tree);
  const LinearOp sa = adjoint(s);
  const Eigen::Index n = tree.size();
  for (Eigen::Index u = 0; u < n; ++u) {
    Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(n);
    if (u != tree.root) expected(tree.parent[static_cast<size_t>(u)]) = tree.weights(u);
    Eigen::VectorXcd got = sa.matrix().col(u);
    if ((got - expected).cwiseAbs().maxCoeff() > tol)
      throw std::runtime_error("shift adjoint mismatch at basis vector " +
                               tree.vertices[static_cast<size_t>(u)]);
  }
  return true;
}

BoundednessReport boundedness_report(const TreeGenerator& gen, long probe_depth) {
  if (probe_depth < 1) throw std::invalid_argument("boundedness_report: probe_depth >= 1");
  BoundednessReport rep;
  rep.probe_depth = probe_depth;
  const TreeTrunc full = gen.truncate(probe_depth);
  rep.max_branching = full.max_branching();
  for (Eigen::Index v = 0; v < full.size(); ++v)
    if (v != full.root) rep.sup_weight = std::max(rep.sup_weight, std::abs(full.weights(v)));
  const long half = std::max(1L, probe_depth / 2);
  const TreeTrunc halftree = gen.truncate(half);
  for (Eigen::Index v = 0; v < halftree.size(); ++v)
    if (v != halftree.root)
      rep.sup_weight_half_depth =
          std::max(rep.sup_weight_half_depth, std::abs(halftree.weights(v)));
  rep.unbounded_trend = rep.sup_weight > rep.sup_weight_half_depth * (1.0 + 1e-12) &&
                        probe_depth > 1;
  rep.bounded = !rep.unbounded_trend;
  return rep;
}

std::vector<Eigen::Index> interior_vertices(const TreeTrunc& tree, long interior_depth) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index v = 0; v < tree.size(); ++v)
    if (tree.depth[static_cast<size_t>(v)] <= interior_depth) idx.push_back(v);
  return idx;
}

namespace {

struct CompressedPencil {
  Eigen::MatrixXcd p;
  Eigen::MatrixXcd q;
};

CompressedPencil compressed_pencil(const TreeTrunc& tree, long k, long n,
                                   long interior_depth) {
  if (n < 1 || k < 0) throw std::invalid_argument("tree check: k >= 0, n >= 1 required");
  if (interior_depth < 0 || interior_depth + k + n + 1 > tree.max_depth)
    throw std::invalid_argument(
        "tree check: interior_depth + k + n + 1 <= tree depth required (need depth >= " +
        std::to_string(interior_depth + k + n + 1) + ", have " +
        std::to_string(tree.max_depth) + ")");
  // Uniform mass-1 geometry: the conjugated matrix is the matrix itself.
  const Eigen::MatrixXcd s = shift_matrix(tree).matrix();
  Eigen::MatrixXcd sk = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
  for (long i = 0; i < k; ++i) sk = sk * s;
  const Eigen::MatrixXcd sk1 = sk * s;
  Eigen::MatrixXcd sn = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
  for (long i = 0; i < n; ++i) sn = sn * s;
  const Eigen::MatrixXcd pfull = sk1.adjoint() * sk1;
  const Eigen::MatrixXcd qfull = sk.adjoint() * sn * sn.adjoint() * sk;

  const std::vector<Eigen::Index> idx = interior_vertices(tree, interior_depth);
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  CompressedPencil cp;
  cp.p.resize(m, m);
  cp.q.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      cp.p(a, b) = pfull(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)]);
      cp.q(a, b) = qfull(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)]);
    }
  return cp;
}

}  // namespace

PosinormalityReport tree_kq_np_check(const TreeTrunc& tree, long k, long n, double lambda_sq,
                                     long interior_depth, double tol, double rank_tol) {
  if (!(lambda_sq > 0)) throw std::invalid_argument("tree_kq_np_check: lambda_sq > 0");
  const CompressedPencil cp = compressed_pencil(tree, k, n, interior_depth);
  const PsdVerdict v = psd_verdict_hermitian(lambda_sq * cp.p - cp.q, tol);
  PosinormalityReport r;
  r.operator_id = "tree-shift";
  r.k = k;
  r.n = n;
  r.lambda_sq = lambda_sq;
  r.verdict = v.is_psd;
  r.min_eigenvalue = v.min_eigenvalue;
  r.minimal_lambda_sq = minimal_lambda_sq_pencil(cp.p, cp.q, rank_tol);
  r.method = "tree-interior-psd";
  return r;
}

double tree_minimal_lambda_sq(const TreeTrunc& tree, long k, long n, long interior_depth,
                              double rank_tol) {
  const CompressedPencil cp = compressed_pencil(tree, k, n, interior_depth);
  return minimal_lambda_sq_pencil(cp.p, cp.q, rank_tol);
}

Eigen::VectorXcd tree_shift_apply(const TreeTrunc& tree, const Eigen::VectorXcd& f) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(tree.size());
  for (Eigen::Index v = 0; v < tree.size(); ++v)
    if (v != tree.root) out(v) = tree.weights(v) * f(tree.parent[static_cast<size_t>(v)]);
  return out;
}

Eigen::VectorXcd tree_shift_adjoint_apply(const TreeTrunc& tree, const Eigen::VectorXcd& f) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(tree.size());
  for (Eigen::Index v = 0; v < tree.size(); ++v)
    if (v != tree.root) out(tree.parent[static_cast<size_t>(v)]) += tree.weights(v) * f(v);
  return out;
}

}  // namespace posinorm

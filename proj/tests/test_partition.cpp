#include <doctest.h>

#include "helpers.hpp"

using namespace posinorm;

TEST_CASE("partition validation") {
  const auto sp = make_uniform_space(4);
  CHECK_THROWS_AS(Partition(sp, {{0, 1}, {1, 2, 3}}), std::invalid_argument);  // overlap
  CHECK_THROWS_AS(Partition(sp, {{0, 1}, {2}}), std::invalid_argument);        // not a cover
  CHECK_THROWS_AS(Partition(sp, {{0, 1, 2, 3}, {}}), std::invalid_argument);   // empty block
  const Partition p(sp, {{0, 2}, {1, 3}});
  CHECK(p.block_of(2) == 0);
  CHECK(p.block_mass(1) == doctest::Approx(0.5));
}

TEST_CASE("cond_exp of the constant function is itself") {
  testutil::Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto sp = testutil::random_space(rng);
    const Partition p = testutil::random_partition(rng, sp);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sp->size());
    CHECK((cond_exp(p, ones) - ones).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("trivial partition averages to the quadrature value of (5x^2+3)^2") {
  const UnitGrid g = unit_interval_grid(2000);
  Eigen::VectorXd w = 5.0 * g.sample_points.cwiseAbs2().array() + 3.0;
  const Eigen::VectorXd e = cond_exp(Partition::trivial(g.space), Eigen::VectorXd(w.cwiseAbs2()));
  CHECK(e(0) == doctest::Approx(24.0).epsilon(1e-5));
  CHECK((e.array() - e(0)).abs().maxCoeff() == 0.0);
}

TEST_CASE("discrete partition leaves functions unchanged") {
  testutil::Rng rng(5);
  const auto sp = testutil::random_space(rng);
  const Eigen::VectorXd f = testutil::random_density(rng, sp->size(), -3, 3);
  CHECK((cond_exp(Partition::discrete(sp), f) - f).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("partition_from_map fibers") {
  const auto sp = make_uniform_space(4);
  CHECK(partition_from_map(PointMap::identity(sp), 1).block_count() == 4);
  CHECK(partition_from_map(PointMap(sp, {0, 0, 0, 0}), 1).block_count() == 1);
  const Partition p = partition_from_map(PointMap(sp, {3, 2, 1, 0}), 1);
  CHECK(p.block_count() == 4);
}

TEST_CASE("support thresholds") {
  CHECK(support(Eigen::VectorXd::Zero(5), 0.0).empty());
  Eigen::VectorXd f(4);
  f << 0, 3, 0, 1;
  CHECK(support(f, 0.0) == std::vector<Eigen::Index>{1, 3});
  Eigen::Vector2d g(1e-14, 1.0);
  CHECK(support(g, 1e-10) == std::vector<Eigen::Index>{1});
  CHECK(default_support_threshold(g) == doctest::Approx(1e-10));
}

TEST_CASE("conditional expectation properties on random data") {
  testutil::Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const auto sp = testutil::random_space(rng);
    const Partition p = testutil::random_partition(rng, sp);
    const Eigen::VectorXd f = testutil::random_density(rng, sp->size(), -2, 2);
    const Eigen::VectorXd ef = cond_exp(p, f);

    // idempotence, the "E(g) = g iff block-constant" identity half
    CHECK((cond_exp(p, ef) - ef).cwiseAbs().maxCoeff() < 1e-13);

    // E(fg) = E(f) g for block-constant g
    const Eigen::VectorXd g = cond_exp(p, testutil::random_density(rng, sp->size(), -2, 2));
    CHECK((cond_exp(p, Eigen::VectorXd(f.cwiseProduct(g))) - ef.cwiseProduct(g))
              .cwiseAbs()
              .maxCoeff() < 1e-13);

    // E(E(f) h) = E(f) E(h)
    const Eigen::VectorXd h = testutil::random_density(rng, sp->size(), -2, 2);
    CHECK((cond_exp(p, Eigen::VectorXd(ef.cwiseProduct(h))) - ef.cwiseProduct(cond_exp(p, h)))
              .cwiseAbs()
              .maxCoeff() < 1e-13);

    // positivity
    const Eigen::VectorXd pos = testutil::random_density(rng, sp->size(), 0.01, 2.0);
    CHECK(cond_exp(p, pos).minCoeff() > 0.0);
    const Eigen::VectorXd nonneg = testutil::random_density(rng, sp->size(), 0.0, 2.0);
    CHECK(cond_exp(p, nonneg).minCoeff() >= 0.0);

    // |E(f)|^p <= E(|f|^p), p = 1, 2
    CHECK((cond_exp(p, f).cwiseAbs() - cond_exp(p, Eigen::VectorXd(f.cwiseAbs())))
              .maxCoeff() < 1e-12);
    CHECK((cond_exp(p, f).cwiseAbs2() - cond_exp(p, Eigen::VectorXd(f.cwiseAbs2())))
              .maxCoeff() < 1e-12);

    // blockwise averaging identity
    for (size_t b = 0; b < p.block_count(); ++b) {
      double lhs = 0, rhs = 0;
      for (Eigen::Index i : p.blocks()[b]) {
        lhs += ef(i) * sp->mass(i);
        rhs += f(i) * sp->mass(i);
      }
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }

    // non-block-constant functions move under E
    bool has_fat_block = false;
    for (const auto& blk : p.blocks()) has_fat_block = has_fat_block || blk.size() >= 2;
    if (has_fat_block) {
      Eigen::VectorXd spiky = f;
      for (const auto& blk : p.blocks())
        if (blk.size() >= 2) {
          spiky(blk[0]) += 1.0;
          break;
        }
      CHECK((cond_exp(p, spiky) - spiky).cwiseAbs().maxCoeff() > 1e-6);
    }
  }
}

TEST_CASE("E(f . g o T) = E(f) . (g o T) for the fiber partition") {
  testutil::Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    const auto sp = testutil::random_space(rng);
    const PointMap map = testutil::random_map(rng, sp);
    const Partition p = partition_from_map(map, 1);
    const Eigen::VectorXd f = testutil::random_density(rng, sp->size(), -2, 2);
    const Eigen::VectorXd g = testutil::random_density(rng, sp->size(), -2, 2);
    Eigen::VectorXd gT(sp->size());
    for (Eigen::Index i = 0; i < sp->size(); ++i) gT(i) = g(map(i));
    CHECK((cond_exp(p, Eigen::VectorXd(f.cwiseProduct(gT))) -
           cond_exp(p, f).cwiseProduct(gT))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
  }
}

TEST_CASE("expectation matrix is the weighted orthogonal projection") {
  testutil::Rng rng(31);
  for (int t = 0; t < 25; ++t) {
    const auto sp = testutil::random_space(rng);
    const Partition p = testutil::random_partition(rng, sp);
    const LinearOp e = expectation_matrix(p);
    CHECK(adjoint(e).max_abs_diff(e) < 1e-12);
    CHECK((e * e).max_abs_diff(e) < 1e-12);
    const Eigen::VectorXd f = testutil::random_density(rng, sp->size(), -2, 2);
    const Eigen::VectorXcd via_matrix = e.apply(f.cast<std::complex<double>>());
    CHECK((via_matrix.real() - cond_exp(p, f)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("complex conditional expectation acts componentwise") {
  testutil::Rng rng(37);
  const auto sp = testutil::random_space(rng);
  const Partition p = testutil::random_partition(rng, sp);
  const Eigen::VectorXcd f = testutil::random_complex_vector(rng, sp->size());
  const Eigen::VectorXcd ef = cond_exp(p, f);
  CHECK((ef.real() - cond_exp(p, Eigen::VectorXd(f.real()))).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((ef.imag() - cond_exp(p, Eigen::VectorXd(f.imag()))).cwiseAbs().maxCoeff() < 1e-14);
}

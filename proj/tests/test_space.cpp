#include <doctest.h>

#include "helpers.hpp"

using namespace posinorm;

TEST_CASE("space construction validates masses and atom ids") {
  CHECK_THROWS_AS(AtomicMeasureSpace({"a", "b"}, Eigen::Vector2d(1.0, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(AtomicMeasureSpace({"a", "a"}, Eigen::Vector2d(1.0, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(AtomicMeasureSpace({}, Eigen::VectorXd()), std::invalid_argument);
  const auto sp = make_uniform_space(4);
  CHECK(sp->size() == 4);
  CHECK(sp->total_mass() == doctest::Approx(1.0));
}

TEST_CASE("unit interval grid uses midpoints and mass 1/N") {
  const UnitGrid g = unit_interval_grid(10);
  CHECK(g.space->mass(3) == doctest::Approx(0.1));
  CHECK(g.sample_points(0) == doctest::Approx(0.05));
  CHECK(g.sample_points(9) == doctest::Approx(0.95));
  const PointMap inv = PointMap::grid_involution(g.space);
  for (Eigen::Index i = 0; i < 10; ++i) CHECK(inv(i) == 9 - i);
}

TEST_CASE("iterate_map identity and involution") {
  const auto sp = make_uniform_space(6);
  const PointMap id = PointMap::identity(sp);
  CHECK(iterate_map(id, 5).image() == id.image());

  const PointMap swap(sp, {1, 0, 3, 2, 5, 4});
  CHECK(iterate_map(swap, 2).image() == id.image());
}

TEST_CASE("iterate_map of a 3-cycle twice is the inverse 3-cycle") {
  const auto sp = make_uniform_space(3);
  const PointMap cyc(sp, {1, 2, 0});
  const PointMap sq = iterate_map(cyc, 2);
  const std::vector<Eigen::Index> expected{2, 0, 1};
  CHECK(sq.image() == expected);
  CHECK(sq.image() == cyc.inverse().image());
}

TEST_CASE("iterate_map is a semigroup action") {
  testutil::Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const auto sp = testutil::random_space(rng);
    const PointMap f = testutil::random_map(rng, sp);
    const long a = rng.integer(0, 4), b = rng.integer(0, 4);
    const PointMap lhs = iterate_map(f, a + b);
    const PointMap fa = iterate_map(f, a);
    for (Eigen::Index i = 0; i < sp->size(); ++i)
      CHECK(lhs(i) == iterate_map(f, b)(fa(i)));
  }
}

TEST_CASE("rn_derivative: involution and identity give h_k = 1") {
  const UnitGrid g = unit_interval_grid(20);
  const PointMap inv = PointMap::grid_involution(g.space);
  for (long k = 1; k <= 4; ++k) {
    const Eigen::VectorXd h = rn_derivative(inv, k);
    CHECK((h.array() - 1.0).abs().maxCoeff() == 0.0);
  }
  testutil::Rng rng(7);
  const auto sp = testutil::random_space(rng);
  const PointMap id = PointMap::identity(sp);
  CHECK((rn_derivative(id, 3).array() - 1.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("rn_derivative of the two-atom collapse") {
  const auto sp = make_space({"a", "b"}, Eigen::Vector2d(1.0, 2.0));
  const PointMap collapse(sp, {0, 0});
  const Eigen::VectorXd h = rn_derivative(collapse, 1);
  CHECK(h(0) == doctest::Approx(3.0));
  CHECK(h(1) == doctest::Approx(0.0));
}

TEST_CASE("rn_derivative satisfies its defining identity") {
  // integer masses keep the sums float-exact
  testutil::Rng rng(11);
  for (int t = 0; t < 25; ++t) {
    const long n = rng.integer(3, 7);
    Eigen::VectorXd masses(n);
    for (long i = 0; i < n; ++i) masses(i) = double(rng.integer(1, 5));
    std::vector<std::string> names;
    for (long i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    const auto sp = make_space(names, masses);
    const PointMap f = testutil::random_map(rng, sp);
    const long k = rng.integer(1, 3);
    const Eigen::VectorXd h = rn_derivative(f, k);
    CHECK(h.minCoeff() >= 0.0);
    const PointMap fk = iterate_map(f, k);
    // random atom set S
    for (int rep = 0; rep < 4; ++rep) {
      std::vector<char> in_s(static_cast<size_t>(n), 0);
      for (long i = 0; i < n; ++i) in_s[static_cast<size_t>(i)] = rng.integer(0, 1);
      double lhs = 0.0, rhs = 0.0;
      for (long j = 0; j < n; ++j)
        if (in_s[static_cast<size_t>(fk(j))]) lhs += masses(j);
      for (long i = 0; i < n; ++i)
        if (in_s[static_cast<size_t>(i)]) rhs += h(i) * masses(i);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("bijections on uniform spaces have h_k = 1") {
  testutil::Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto sp = make_uniform_space(rng.integer(3, 9));
    const PointMap p = testutil::random_permutation(rng, sp);
    const Eigen::VectorXd h = rn_derivative(p, rng.integer(1, 4));
    CHECK((h.array() - 1.0).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("is_sigma_preserving") {
  const auto sp = make_uniform_space(4);
  const PointMap inv(sp, {3, 2, 1, 0});
  for (long k = 1; k <= 5; ++k) CHECK(is_sigma_preserving(inv, k));
  const PointMap constant(sp, {0, 0, 0, 0});
  CHECK_FALSE(is_sigma_preserving(constant, 1));
  const auto sp3 = make_uniform_space(3);
  CHECK(is_sigma_preserving(PointMap(sp3, {1, 2, 0}), 2));
}

TEST_CASE("weighted_rn_derivative on the identity map is the squared weight") {
  testutil::Rng rng(17);
  const auto sp = testutil::random_space(rng);
  const Eigen::VectorXd pi = testutil::random_density(rng, sp->size());
  const Eigen::VectorXd hpi = weighted_rn_derivative(PointMap::identity(sp), pi);
  CHECK((hpi - pi.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("signed iteration requires a bijection") {
  const auto sp = make_uniform_space(3);
  const PointMap constant(sp, {0, 0, 0});
  CHECK_THROWS_AS(iterate_map_signed(constant, -1), std::invalid_argument);
  const PointMap cyc(sp, {1, 2, 0});
  const PointMap m = iterate_map_signed(cyc, -2);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(iterate_map(cyc, 2)(m(i)) == i);
}

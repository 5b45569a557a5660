#include "posinorm/space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace posinorm {

AtomicMeasureSpace::AtomicMeasureSpace(std::vector<std::string> atoms, Eigen::VectorXd masses)
    : atoms_(std::move(atoms)), masses_(std::move(masses)) {
  if (masses_.size() == 0) throw std::invalid_argument("space needs at least one atom");
  if (static_cast<Eigen::Index>(atoms_.size()) != masses_.size())
    throw std::invalid_argument("atom/mass count mismatch");
  for (Eigen::Index i = 0; i < masses_.size(); ++i)
    if (!(masses_(i) > 0.0) || !std::isfinite(masses_(i)))
      throw std::invalid_argument("atom mass must be positive and finite: " +
                                  atoms_[static_cast<size_t>(i)]);
  std::unordered_set<std::string> seen;
  for (const auto& a : atoms_)
    if (!seen.insert(a).second) throw std::invalid_argument("duplicate atom id: " + a);
}

AtomicMeasureSpace AtomicMeasureSpace::uniform(Eigen::Index n, double total) {
  std::vector<std::string> atoms;
  atoms.reserve(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) atoms.push_back("a" + std::to_string(i));
  return AtomicMeasureSpace(std::move(atoms), Eigen::VectorXd::Constant(n, total / double(n)));
}

bool AtomicMeasureSpace::same_geometry(const AtomicMeasureSpace& other) const {
  return masses_.size() == other.masses_.size() && masses_ == other.masses_;
}

SpacePtr make_space(std::vector<std::string> atoms, Eigen::VectorXd masses) {
  return std::make_shared<const AtomicMeasureSpace>(std::move(atoms), std::move(masses));
}

SpacePtr make_uniform_space(Eigen::Index n, double total) {
  return std::make_shared<const AtomicMeasureSpace>(AtomicMeasureSpace::uniform(n, total));
}

void check_same_space(const SpacePtr& a, const SpacePtr& b, const char* where) {
  if (a == b) return;
  if (!a || !b || !a->same_geometry(*b))
    throw std::invalid_argument(std::string(where) + ": operands live on different spaces");
}

std::complex<double> weighted_inner(const AtomicMeasureSpace& sp, const Eigen::VectorXcd& f,
                                    const Eigen::VectorXcd& g) {
  if (f.size() != sp.size() || g.size() != sp.size())
    throw std::invalid_argument("weighted_inner: dimension mismatch");
  return (f.array() * g.array().conjugate() * sp.masses().array().cast<std::complex<double>>())
      .sum();
}

double weighted_norm(const AtomicMeasureSpace& sp, const Eigen::VectorXcd& f) {
  return std::sqrt(std::max(0.0, weighted_inner(sp, f, f).real()));
}

UnitGrid unit_interval_grid(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("unit_interval_grid: n >= 1 required");
  UnitGrid g;
  g.space = make_uniform_space(n, 1.0);
  g.sample_points = Eigen::VectorXd::NullaryExpr(
      n, [n](Eigen::Index i) { return (double(i) + 0.5) / double(n); });
  return g;
}

PointMap::PointMap(SpacePtr space, std::vector<Eigen::Index> image)
    : space_(std::move(space)), image_(std::move(image)) {
  if (!space_) throw std::invalid_argument("PointMap: null space");
  if (static_cast<Eigen::Index>(image_.size()) != space_->size())
    throw std::invalid_argument("PointMap: image length must equal atom count");
  for (Eigen::Index v : image_)
    if (v < 0 || v >= space_->size())
      throw std::invalid_argument("PointMap: image index out of range");
}

PointMap PointMap::identity(SpacePtr space) {
  std::vector<Eigen::Index> img(static_cast<size_t>(space->size()));
  for (Eigen::Index i = 0; i < space->size(); ++i) img[static_cast<size_t>(i)] = i;
  return PointMap(std::move(space), std::move(img));
}

PointMap PointMap::grid_involution(SpacePtr space) {
  const Eigen::Index n = space->size();
  std::vector<Eigen::Index> img(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) img[static_cast<size_t>(i)] = n - 1 - i;
  return PointMap(std::move(space), std::move(img));
}

bool PointMap::is_bijection() const {
  std::vector<char> hit(image_.size(), 0);
  for (Eigen::Index v : image_) {
    if (hit[static_cast<size_t>(v)]) return false;
    hit[static_cast<size_t>(v)] = 1;
  }
  return true;
}

PointMap PointMap::inverse() const {
  if (!is_bijection()) throw std::invalid_argument("PointMap::inverse: map is not a bijection");
  std::vector<Eigen::Index> inv(image_.size());
  for (size_t i = 0; i < image_.size(); ++i)
    inv[static_cast<size_t>(image_[i])] = static_cast<Eigen::Index>(i);
  return PointMap(space_, std::move(inv));
}

std::vector<Eigen::Index> PointMap::fiber(Eigen::Index atom) const {
  std::vector<Eigen::Index> out;
  for (size_t j = 0; j < image_.size(); ++j)
    if (image_[j] == atom) out.push_back(static_cast<Eigen::Index>(j));
  return out;
}

PointMap iterate_map(const PointMap& map, long k) {
  if (k < 0) throw std::invalid_argument("iterate_map: k >= 0 required");
  std::vector<Eigen::Index> img(static_cast<size_t>(map.size()));
  for (Eigen::Index i = 0; i < map.size(); ++i) {
    Eigen::Index v = i;
    for (long q = 0; q < k; ++q) v = map(v);
    img[static_cast<size_t>(i)] = v;
  }
  return PointMap(map.space(), std::move(img));
}

PointMap iterate_map_signed(const PointMap& map, long k) {
  if (k >= 0) return iterate_map(map, k);
  return iterate_map(map.inverse(), -k);
}

Eigen::VectorXd rn_derivative(const PointMap& map, long k) {
  if (k < 0) throw std::invalid_argument("rn_derivative: k >= 0 required");
  const Eigen::Index n = map.size();
  if (k == 0) return Eigen::VectorXd::Ones(n);
  const PointMap tk = iterate_map(map, k);
  Eigen::VectorXd pulled = Eigen::VectorXd::Zero(n);
  const auto& m = map.space()->masses();
  for (Eigen::Index j = 0; j < n; ++j) pulled(tk(j)) += m(j);
  return pulled.array() / m.array();
}

bool is_sigma_preserving(const PointMap& map, long k) {
  if (k < 1) throw std::invalid_argument("is_sigma_preserving: k >= 1 required");
  return iterate_map(map, k).is_bijection();
}

Eigen::VectorXd weighted_rn_derivative(const PointMap& map, const Eigen::VectorXd& weight) {
  const Eigen::Index n = map.size();
  if (weight.size() != n) throw std::invalid_argument("weighted_rn_derivative: weight length");
  Eigen::VectorXd pulled = Eigen::VectorXd::Zero(n);
  const auto& m = map.space()->masses();
  for (Eigen::Index j = 0; j < n; ++j) pulled(map(j)) += weight(j) * weight(j) * m(j);
  return pulled.array() / m.array();
}

}  // namespace posinorm

#pragma once

#include <Eigen/Core>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace posinorm {

/// Finite measure space: an ordered list of named atoms with positive masses.
/// All operators in this library act on functions-on-atoms and take adjoints
/// with respect to the mass-weighted inner product <f,g> = sum_i f_i conj(g_i) m_i.
class AtomicMeasureSpace {
public:
  AtomicMeasureSpace(std::vector<std::string> atoms, Eigen::VectorXd masses);

  /// n atoms "a0".."a{n-1}", each of mass total/n.
  static AtomicMeasureSpace uniform(Eigen::Index n, double total = 1.0);

  Eigen::Index size() const { return masses_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const Eigen::VectorXd& masses() const { return masses_; }
  double mass(Eigen::Index i) const { return masses_(i); }
  double total_mass() const { return masses_.sum(); }

  /// Same atom count and identical masses (atom names are labels, not geometry).
  bool same_geometry(const AtomicMeasureSpace& other) const;

private:
  std::vector<std::string> atoms_;
  Eigen::VectorXd masses_;
};

using SpacePtr = std::shared_ptr<const AtomicMeasureSpace>;

SpacePtr make_space(std::vector<std::string> atoms, Eigen::VectorXd masses);
SpacePtr make_uniform_space(Eigen::Index n, double total = 1.0);

void check_same_space(const SpacePtr& a, const SpacePtr& b, const char* where);

/// Mass-weighted inner product and norm on a space.
std::complex<double> weighted_inner(const AtomicMeasureSpace& sp,
                                    const Eigen::VectorXcd& f,
                                    const Eigen::VectorXcd& g);
double weighted_norm(const AtomicMeasureSpace& sp, const Eigen::VectorXcd& f);

/// Midpoint discretization of [0,1]: atom i stands for [i/n,(i+1)/n] with
/// sample point (i+1/2)/n and mass 1/n.
struct UnitGrid {
  SpacePtr space;
  Eigen::VectorXd sample_points;
};
UnitGrid unit_interval_grid(Eigen::Index n);

/// Total self-map of the atom set of a space.
class PointMap {
public:
  PointMap(SpacePtr space, std::vector<Eigen::Index> image);

  static PointMap identity(SpacePtr space);
  /// Atom-level x -> 1-x on a midpoint grid: i -> n-1-i.
  static PointMap grid_involution(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  Eigen::Index operator()(Eigen::Index i) const { return image_[static_cast<size_t>(i)]; }
  const std::vector<Eigen::Index>& image() const { return image_; }
  Eigen::Index size() const { return space_->size(); }

  bool is_bijection() const;
  PointMap inverse() const;  // throws unless a bijection
  /// Preimage T^{-1}({atom}).
  std::vector<Eigen::Index> fiber(Eigen::Index atom) const;

private:
  SpacePtr space_;
  std::vector<Eigen::Index> image_;
};

/// k-fold composition; k = 0 is the identity.
PointMap iterate_map(const PointMap& map, long k);

/// Signed power: negative k uses the inverse (requires a bijection).
PointMap iterate_map_signed(const PointMap& map, long k);

/// Radon-Nikodym derivative h_k of mu o T^{-k} w.r.t. mu:
/// h_k(i) = mass(T^{-k}{i}) / mass(i). h_0 is the constant 1.
Eigen::VectorXd rn_derivative(const PointMap& map, long k);

/// True iff T^k permutes the atoms (T^{-k}(Sigma) = Sigma on an atomic space).
bool is_sigma_preserving(const PointMap& map, long k);

/// Weighted derivative h^pi(i) = sum_{T(j)=i} pi_j^2 m_j / m_i; phi = sqrt(h^pi)
/// is the boundedness diagnostic for weighted composition operators.
Eigen::VectorXd weighted_rn_derivative(const PointMap& map, const Eigen::VectorXd& weight);

}  // namespace posinorm

#ifndef FELLBAND_GROUP_HPP
#define FELLBAND_GROUP_HPP

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fellband/common.hpp"
#include "fellband/point.hpp"

namespace fellband {

struct GeneratingSet {
  std::vector<Point> elements;  // contains the identity, closed under inverse
  bool symmetric = true;
};

// Discrete group models with a canonical element encoding.  All supported
// groups have polynomial growth; the declared order d feeds the growth
// exponents 2d+2 and 2d+2+4delta downstream.
//
//   Zd{d}        : free abelian, coordinates (n_1..n_d)
//   Heis3        : unit upper-triangular 3x3 integer matrices, encoded
//                  (a,b,c) for [[1,a,c],[0,1,b],[0,0,1]]
//   Cyclic{m}    : residues 0..m-1
//   DirectSumZ2  : finitely supported 0/1 sequences, truncated to
//                  active_bits coordinates and encoded as a bitmask
//   Product      : pair of models, concatenated encodings
class GroupModel {
 public:
  enum class Kind { Zd, Heis3, Cyclic, DirectSumZ2, Product };

  static GroupModel zd(int d);
  static GroupModel heis3();
  static GroupModel cyclic(std::int64_t m);
  static GroupModel direct_sum_z2(int active_bits);
  static GroupModel product(GroupModel a, GroupModel b);

  Kind kind() const { return kind_; }
  int coord_count() const { return coords_; }

  Point identity() const;
  Point multiply(const Point& x, const Point& y) const;
  Point inverse(const Point& x) const;

  bool is_finite() const;
  std::int64_t order() const;  // |G| for finite models, throws otherwise
  std::vector<Point> elements() const;

  // Declared growth order: Zd -> d, Heis3 -> 4, finite -> 0.
  int growth_order() const { return growth_order_; }

  GeneratingSet standard_generators() const;

  // Haar normalization: counting measure by default; finite groups may use
  // mu(G) = 1, i.e. weight 1/|G| per point.
  void set_normalized_measure(bool on);
  double point_mass() const { return point_mass_; }
  bool normalized_measure() const { return point_mass_ != 1.0; }

  std::string describe() const;

  // Structural identity; sections refuse to mix groups that differ here.
  bool same_as(const GroupModel& other) const;

  std::int64_t cyclic_modulus() const { return m_; }
  int active_bits() const { return active_bits_; }
  const GroupModel& left_factor() const { return *left_; }
  const GroupModel& right_factor() const { return *right_; }

 private:
  GroupModel() = default;

  Kind kind_ = Kind::Zd;
  int coords_ = 1;
  int d_ = 1;                // Zd dimension
  std::int64_t m_ = 0;       // Cyclic modulus
  int active_bits_ = 0;      // DirectSumZ2 truncation
  int growth_order_ = 1;
  double point_mass_ = 1.0;
  std::shared_ptr<const GroupModel> left_, right_;
};

// Breadth-first Cayley-ball enumerator with an element budget.  Shells are
// cached and sorted, so enumeration order is deterministic and the memo is
// idempotent.  shell(n) = { x : sigma_K(x) = n }.
class CayleyBall {
 public:
  CayleyBall(const GroupModel& group, GeneratingSet gens,
             std::size_t element_budget = kDefaultBudget);

  static constexpr std::size_t kDefaultBudget = 2'000'000;

  // Enumerates shells up to radius n; throws BudgetExceeded (with the
  // partial count) when the budget trips mid-shell.
  void grow_to(int n);

  int grown_radius() const { return static_cast<int>(shells_.size()) - 1; }
  bool exhausted() const { return exhausted_; }

  const std::vector<Point>& shell(int n);
  std::vector<Point> ball(int n);
  std::size_t ball_size(int n);

  // Word length of x if within the grown radius (growing as needed up to
  // r_max); nullopt when x is not reached.
  std::optional<int> distance(const Point& x, int r_max);

  const GroupModel& group() const { return group_; }
  const GeneratingSet& generators() const { return gens_; }
  std::size_t element_count() const { return index_.size(); }

 private:
  const GroupModel group_;
  GeneratingSet gens_;
  std::size_t budget_;
  bool exhausted_ = false;
  std::vector<std::vector<Point>> shells_;
  std::unordered_map<Point, int, PointHash> index_;  // point -> word length
};

// sigma_K(x) via BFS; throws NotGenerated if x lies outside K^{r_max}.
int word_length(CayleyBall& ball, const Point& x, int r_max = 256);

struct GrowthProfile {
  std::vector<int> radii;
  std::vector<std::size_t> sizes;
  double fitted_order = 0.0;  // d-hat
  double residual = 0.0;
};

// Ball sizes up to n_max plus the log-log slope fitted over the upper half
// of the radius range.
GrowthProfile growth_profile(CayleyBall& ball, int n_max);

}  // namespace fellband

#endif

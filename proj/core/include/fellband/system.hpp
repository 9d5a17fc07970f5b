#ifndef FELLBAND_SYSTEM_HPP
#define FELLBAND_SYSTEM_HPP

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "fellband/fiber.hpp"
#include "fellband/group.hpp"

namespace fellband {

// Twisted C*-dynamical system (G, M_k, alpha, omega) presented through the
// bundle operations of the associated Fell bundle over G:
//
//   (a,x) . (b,y)  = (a alpha_x(b) omega(x,y), xy)
//   (a,x)^adj      = (omega(x^{-1},x)^* alpha_{x^{-1}}(a^*), x^{-1})
//
// The adjoint carries the cocycle factor conjugated on the left; this is the
// unique placement under which the involution is involutive, anti-
// multiplicative against the product above, and pointwise consistent with
// the algebra involution Phi^*(x) = omega(x,x^{-1})^* alpha_x(Phi(x^{-1})^*).
//
// Supported actions: trivial, inner (alpha_x = Ad W_x for stored unitaries,
// with omega(x,y) = W_x W_y W_{xy}^* the associated defect cocycle), and
// permutation-diagonal (translation on a finite index set).  Scalar cocycle
// model: the rotation-algebra twist on Z^2.
class TwistedSystem {
 public:
  using Ptr = std::shared_ptr<const TwistedSystem>;

  static Ptr trivial(GroupModel g, int fiber_dim = 1);
  // omega((m1,m2),(n1,n2)) = exp(2 pi i theta m2 n1) on Z^2; theta given as
  // an exact rational p/q (phases reduced mod 1 in integer arithmetic).
  static Ptr nc_torus(GroupModel z2, std::int64_t theta_num, std::int64_t theta_den);
  static Ptr nc_torus_real(GroupModel z2, double theta);
  // Same twist with an extra exp(2 pi i eps m1) factor on the first slot;
  // deliberately fails the cocycle axioms (test fixture).
  static Ptr nc_torus_perturbed(GroupModel z2, std::int64_t num, std::int64_t den,
                                double eps);
  // Inner action on a finite group from a unitary table W (W_e must be 1).
  static Ptr inner_table(GroupModel g, std::vector<std::pair<Point, Fiber>> table);
  // Cyclic{m} with W_j = U^j; the cocycle is the carry defect (U^m)^{carry}.
  static Ptr inner_cyclic_power(GroupModel cyc, const Fiber& u);
  // Finite G acting on itself by left translation; fibers M_{|G|}, alpha_x a
  // basis permutation, trivial twist.
  static Ptr perm_diag_translation(GroupModel g);

  const GroupModel& group() const { return group_; }
  int fiber_dim() const { return k_; }
  bool trivial_action() const { return trivial_action_; }
  bool trivial_twist() const { return trivial_twist_; }

  Fiber act(const Point& x, const Fiber& a) const;
  Fiber cocycle(const Point& x, const Point& y) const;
  Fiber unit_fiber() const { return Fiber::identity(k_); }

  bool compatible(const TwistedSystem& other) const;
  std::string describe() const;

  double theta() const;  // NcTorus only

 private:
  enum class Kind { Trivial, NcTorus, NcTorusPerturbed, InnerTable, PermDiag };

  TwistedSystem(Kind kind, GroupModel g) : kind_(kind), group_(std::move(g)) {}

  double torus_phase(const Point& x, const Point& y) const;
  const Fiber& witness(const Point& x) const;

  Kind kind_;
  GroupModel group_;
  int k_ = 1;
  bool trivial_action_ = true;
  bool trivial_twist_ = true;
  std::int64_t theta_num_ = 0, theta_den_ = 1;
  double theta_real_ = 0.0;
  bool theta_rational_ = true;
  double perturb_eps_ = 0.0;
  std::unordered_map<Point, Fiber, PointHash> w_;     // InnerTable unitaries
  std::vector<Point> elems_;                          // PermDiag element order
  std::unordered_map<Point, int, PointHash> elem_index_;
};

struct BundleElement {
  Fiber a;
  Point x;
};

BundleElement bundle_mul(const TwistedSystem& sys, const BundleElement& p,
                         const BundleElement& q);
BundleElement bundle_adjoint(const TwistedSystem& sys, const BundleElement& p);

struct CocycleReport {
  bool pass = false;
  double worst_violation = 0.0;
  std::string witness;
};

// Samples triples from the radius-`radius` ball and measures the worst
// defect of the twisted-action axioms, cocycle unitarity, and isometry of
// the action.  pass iff worst <= 1e-10.
CocycleReport cocycle_check(const TwistedSystem& sys, int radius, int sample_size,
                            std::uint64_t rng_seed);

}  // namespace fellband

#endif

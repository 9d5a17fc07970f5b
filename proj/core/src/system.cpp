#include "fellband/system.hpp"

#include <algorithm>
#include <cmath>

namespace fellband {

TwistedSystem::Ptr TwistedSystem::trivial(GroupModel g, int fiber_dim) {
  auto sys = std::shared_ptr<TwistedSystem>(new TwistedSystem(Kind::Trivial, std::move(g)));
  sys->k_ = fiber_dim;
  return sys;
}

TwistedSystem::Ptr TwistedSystem::nc_torus(GroupModel z2, std::int64_t num,
                                           std::int64_t den) {
  if (z2.kind() != GroupModel::Kind::Zd || z2.coord_count() != 2)
    throw InvalidSpec("nc_torus: group must be Z^2");
  if (den <= 0) throw InvalidSpec("nc_torus: denominator must be positive");
  auto sys = std::shared_ptr<TwistedSystem>(new TwistedSystem(Kind::NcTorus, std::move(z2)));
  sys->theta_num_ = ((num % den) + den) % den;
  sys->theta_den_ = den;
  sys->theta_rational_ = true;
  sys->trivial_twist_ = (sys->theta_num_ == 0);
  return sys;
}

TwistedSystem::Ptr TwistedSystem::nc_torus_real(GroupModel z2, double theta) {
  if (z2.kind() != GroupModel::Kind::Zd || z2.coord_count() != 2)
    throw InvalidSpec("nc_torus: group must be Z^2");
  auto sys = std::shared_ptr<TwistedSystem>(new TwistedSystem(Kind::NcTorus, std::move(z2)));
  sys->theta_rational_ = false;
  sys->theta_real_ = theta - std::floor(theta);
  sys->trivial_twist_ = (sys->theta_real_ == 0.0);
  return sys;
}

TwistedSystem::Ptr TwistedSystem::nc_torus_perturbed(GroupModel z2, std::int64_t num,
                                                     std::int64_t den, double eps) {
  auto base = nc_torus(std::move(z2), num, den);
  auto sys = std::shared_ptr<TwistedSystem>(
      new TwistedSystem(Kind::NcTorusPerturbed, base->group()));
  sys->theta_num_ = base->theta_num_;
  sys->theta_den_ = base->theta_den_;
  sys->perturb_eps_ = eps;
  sys->trivial_twist_ = false;
  return sys;
}

TwistedSystem::Ptr TwistedSystem::inner_table(GroupModel g,
                                              std::vector<std::pair<Point, Fiber>> table) {
  if (table.empty()) throw InvalidSpec("inner_table: empty table");
  const int k = table.front().second.dim();
  auto sys = std::shared_ptr<TwistedSystem>(new TwistedSystem(Kind::InnerTable, std::move(g)));
  sys->k_ = k;
  for (auto& [x, w] : table) {
    if (w.dim() != k) throw DimensionMismatch("inner_table: mixed fiber dims");
    if (w.unitary_defect() > 1e-10) throw InvalidSpec("inner_table: W_x not unitary");
    sys->w_.emplace(x, w);
  }
  const Fiber& we = sys->witness(sys->group_.identity());
  if ((we - Fiber::identity(k)).frobenius() > 1e-12)
    throw InvalidSpec("inner_table: W_e must be the identity");
  sys->trivial_action_ = false;
  sys->trivial_twist_ = false;
  return sys;
}

TwistedSystem::Ptr TwistedSystem::inner_cyclic_power(GroupModel cyc, const Fiber& u) {
  if (cyc.kind() != GroupModel::Kind::Cyclic)
    throw InvalidSpec("inner_cyclic_power: group must be cyclic");
  const std::int64_t m = cyc.cyclic_modulus();
  std::vector<std::pair<Point, Fiber>> table;
  Fiber w = Fiber::identity(u.dim());
  for (std::int64_t j = 0; j < m; ++j) {
    Point p;
    p.push(j);
    table.emplace_back(p, w);
    w = fiber_mul(w, u);
  }
  return inner_table(std::move(cyc), std::move(table));
}

TwistedSystem::Ptr TwistedSystem::perm_diag_translation(GroupModel g) {
  if (!g.is_finite()) throw InvalidSpec("perm_diag_translation: group must be finite");
  auto sys = std::shared_ptr<TwistedSystem>(new TwistedSystem(Kind::PermDiag, g));
  sys->elems_ = sys->group_.elements();
  sys->k_ = static_cast<int>(sys->elems_.size());
  for (int i = 0; i < sys->k_; ++i) sys->elem_index_.emplace(sys->elems_[static_cast<std::size_t>(i)], i);
  sys->trivial_action_ = false;
  sys->trivial_twist_ = true;
  return sys;
}

const Fiber& TwistedSystem::witness(const Point& x) const {
  auto it = w_.find(x);
  if (it == w_.end())
    throw InvalidSpec("inner action: no unitary stored for " + x.str());
  return it->second;
}

double TwistedSystem::torus_phase(const Point& x, const Point& y) const {
  // phase of omega(x,y) in turns: theta * x2 * y1 (mod 1)
  const std::int64_t k = x[1] * y[0];
  if (theta_rational_) {
    const std::int64_t q = theta_den_;
    const std::int64_t r = (((theta_num_ % q) * (((k % q) + q) % q)) % q + q) % q;
    return static_cast<double>(r) / static_cast<double>(q);
  }
  return theta_real_ * static_cast<double>(k);
}

Fiber TwistedSystem::act(const Point& x, const Fiber& a) const {
  switch (kind_) {
    case Kind::Trivial:
    case Kind::NcTorus:
    case Kind::NcTorusPerturbed:
      return a;
    case Kind::InnerTable: {
      const Fiber& w = witness(x);
      return fiber_mul(fiber_mul(w, a), fiber_adjoint(w));
    }
    case Kind::PermDiag: {
      // alpha_x(a)_{ij} = a_{pi(i) pi(j)} with pi(i) = index(x^{-1} e_i)
      const Point xi = group_.inverse(x);
      Fiber out = Fiber::zero(k_);
      std::vector<int> pi(static_cast<std::size_t>(k_));
      for (int i = 0; i < k_; ++i) {
        const Point target = group_.multiply(xi, elems_[static_cast<std::size_t>(i)]);
        pi[static_cast<std::size_t>(i)] = elem_index_.at(target);
      }
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
          out.set(i, j, a.at(pi[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(j)]));
      return out;
    }
  }
  return a;
}

Fiber TwistedSystem::cocycle(const Point& x, const Point& y) const {
  switch (kind_) {
    case Kind::Trivial:
    case Kind::PermDiag:
      return Fiber::identity(k_);
    case Kind::NcTorus: {
      const double turns = torus_phase(x, y);
      return Fiber::scalar(std::polar(1.0, kTwoPi * turns));
    }
    case Kind::NcTorusPerturbed: {
      const double turns = torus_phase(x, y) + perturb_eps_ * static_cast<double>(x[0]);
      return Fiber::scalar(std::polar(1.0, kTwoPi * turns));
    }
    case Kind::InnerTable: {
      const Fiber& wx = witness(x);
      const Fiber& wy = witness(y);
      const Fiber& wxy = witness(group_.multiply(x, y));
      return fiber_mul(fiber_mul(wx, wy), fiber_adjoint(wxy));
    }
  }
  return Fiber::identity(k_);
}

bool TwistedSystem::compatible(const TwistedSystem& other) const {
  if (this == &other) return true;
  if (kind_ != other.kind_ || k_ != other.k_) return false;
  if (!group_.same_as(other.group_)) return false;
  switch (kind_) {
    case Kind::Trivial:
    case Kind::PermDiag:
      return true;
    case Kind::NcTorus:
    case Kind::NcTorusPerturbed:
      return theta_rational_ == other.theta_rational_ &&
             theta_num_ == other.theta_num_ && theta_den_ == other.theta_den_ &&
             theta_real_ == other.theta_real_ && perturb_eps_ == other.perturb_eps_;
    case Kind::InnerTable:
      return false;  // distinct tables are distinct systems
  }
  return false;
}

std::string TwistedSystem::describe() const {
  switch (kind_) {
    case Kind::Trivial:
      return group_.describe() + " trivial k=" + std::to_string(k_);
    case Kind::NcTorus:
      return group_.describe() + " nc-torus theta=" +
             (theta_rational_ ? std::to_string(theta_num_) + "/" + std::to_string(theta_den_)
                              : format_double(theta_real_));
    case Kind::NcTorusPerturbed:
      return group_.describe() + " nc-torus (perturbed)";
    case Kind::InnerTable:
      return group_.describe() + " inner M_" + std::to_string(k_);
    case Kind::PermDiag:
      return group_.describe() + " perm-diag k=" + std::to_string(k_);
  }
  return "?";
}

double TwistedSystem::theta() const {
  if (kind_ != Kind::NcTorus && kind_ != Kind::NcTorusPerturbed)
    throw InvalidSpec("theta: not a torus system");
  return theta_rational_
             ? static_cast<double>(theta_num_) / static_cast<double>(theta_den_)
             : theta_real_;
}

BundleElement bundle_mul(const TwistedSystem& sys, const BundleElement& p,
                         const BundleElement& q) {
  if (p.a.dim() != q.a.dim()) throw DimensionMismatch("bundle_mul: fiber dims differ");
  BundleElement out;
  out.a = fiber_mul(fiber_mul(p.a, sys.act(p.x, q.a)), sys.cocycle(p.x, q.x));
  out.x = sys.group().multiply(p.x, q.x);
  return out;
}

BundleElement bundle_adjoint(const TwistedSystem& sys, const BundleElement& p) {
  const Point xi = sys.group().inverse(p.x);
  BundleElement out;
  out.a = fiber_mul(fiber_adjoint(sys.cocycle(xi, p.x)), sys.act(xi, fiber_adjoint(p.a)));
  out.x = xi;
  return out;
}

CocycleReport cocycle_check(const TwistedSystem& sys, int radius, int sample_size,
                            std::uint64_t rng_seed) {
  CayleyBall ball(sys.group(), sys.group().standard_generators());
  const std::vector<Point> pts = ball.ball(radius);
  Rng rng(rng_seed);
  const Point e = sys.group().identity();
  const int k = sys.fiber_dim();

  CocycleReport rep;
  auto note = [&](double defect, const std::string& what) {
    if (defect > rep.worst_violation) {
      rep.worst_violation = defect;
      rep.witness = what;
    }
  };

  for (int it = 0; it < sample_size; ++it) {
    const Point x = pts[rng.below(pts.size())];
    const Point y = pts[rng.below(pts.size())];
    const Point z = pts[rng.below(pts.size())];

    Fiber a = Fiber::zero(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a.set(i, j, rng.complex_gaussian());
    const double an = a.operator_norm();
    if (an > 0) a *= Complex(1.0 / an, 0.0);

    // (i) alpha_x(omega(y,z)) omega(x,yz) = omega(x,y) omega(xy,z)
    const Fiber lhs1 = fiber_mul(sys.act(x, sys.cocycle(y, z)),
                                 sys.cocycle(x, sys.group().multiply(y, z)));
    const Fiber rhs1 = fiber_mul(sys.cocycle(x, y),
                                 sys.cocycle(sys.group().multiply(x, y), z));
    note((lhs1 - rhs1).operator_norm(),
         "axiom(i) at " + x.str() + "," + y.str() + "," + z.str());

    // (ii) alpha_x(alpha_y(a)) omega(x,y) = omega(x,y) alpha_{xy}(a)
    const Fiber lhs2 = fiber_mul(sys.act(x, sys.act(y, a)), sys.cocycle(x, y));
    const Fiber rhs2 =
        fiber_mul(sys.cocycle(x, y), sys.act(sys.group().multiply(x, y), a));
    note((lhs2 - rhs2).operator_norm(),
         "axiom(ii) at " + x.str() + "," + y.str());

    // (iii) omega(x,e) = omega(e,y) = 1, alpha_e = id
    note((sys.cocycle(x, e) - sys.unit_fiber()).operator_norm(),
         "axiom(iii) omega(x,e) at " + x.str());
    note((sys.cocycle(e, y) - sys.unit_fiber()).operator_norm(),
         "axiom(iii) omega(e,y) at " + y.str());
    note((sys.act(e, a) - a).operator_norm(), "axiom(iii) alpha_e");

    // omega unitary, alpha isometric
    note(sys.cocycle(x, y).unitary_defect(),
         "omega not unitary at " + x.str() + "," + y.str());
    note(std::abs(sys.act(x, a).operator_norm() - a.operator_norm()),
         "alpha not isometric at " + x.str());
  }

  rep.pass = rep.worst_violation <= 1e-10;
  return rep;
}

}  // namespace fellband

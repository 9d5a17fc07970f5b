#include "fellband/section.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace fellband {

CrossSection::CrossSection(TwistedSystem::Ptr sys) : sys_(std::move(sys)) {
  if (!sys_) throw InvalidSpec("CrossSection: null system");
}

CrossSection CrossSection::delta(TwistedSystem::Ptr sys, const Point& x, Fiber a) {
  CrossSection s(std::move(sys));
  if (a.dim() != s.fiber_dim()) throw DimensionMismatch("delta: fiber dim mismatch");
  if (!a.is_zero()) s.entries_.emplace_back(x, std::move(a));
  return s;
}

CrossSection CrossSection::unit(TwistedSystem::Ptr sys) {
  const double w = sys->group().point_mass();
  Fiber one = Fiber::identity(sys->fiber_dim());
  one *= Complex(1.0 / w, 0.0);
  const Point e = sys->group().identity();
  return delta(std::move(sys), e, std::move(one));
}

Fiber CrossSection::at(const Point& x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const auto& e, const Point& p) { return e.first < p; });
  if (it != entries_.end() && it->first == x) return it->second;
  return Fiber::zero(fiber_dim());
}

void CrossSection::set(const Point& x, Fiber a) {
  if (a.dim() != fiber_dim()) throw DimensionMismatch("set: fiber dim mismatch");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const auto& e, const Point& p) { return e.first < p; });
  if (it != entries_.end() && it->first == x) {
    if (a.is_zero())
      entries_.erase(it);
    else
      it->second = std::move(a);
  } else if (!a.is_zero()) {
    entries_.emplace(it, x, std::move(a));
  }
}

void CrossSection::accumulate(const Point& x, const Fiber& a) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const auto& e, const Point& p) { return e.first < p; });
  if (it != entries_.end() && it->first == x)
    it->second += a;
  else
    entries_.emplace(it, x, a);
}

void CrossSection::check_compatible(const CrossSection& other) const {
  if (!sys_->compatible(other.system()))
    throw SystemMismatch("sections live over different twisted systems");
}

CrossSection& CrossSection::operator+=(const CrossSection& other) {
  check_compatible(other);
  for (const auto& [x, a] : other.entries_) accumulate(x, a);
  budget_ += other.budget_;
  return *this;
}

CrossSection& CrossSection::operator-=(const CrossSection& other) {
  check_compatible(other);
  for (const auto& [x, a] : other.entries_) {
    Fiber neg = a;
    neg *= Complex(-1.0, 0.0);
    accumulate(x, neg);
  }
  budget_ += other.budget_;
  return *this;
}

CrossSection& CrossSection::operator*=(Complex c) {
  for (auto& [x, a] : entries_) a *= c;
  budget_ *= std::abs(c);
  return *this;
}

double CrossSection::norm_l1() const {
  const double w = group().point_mass();
  double s = 0.0;
  for (const auto& [x, a] : entries_) s += a.operator_norm();
  return w * s;
}

double CrossSection::norm_l2() const {
  const double w = group().point_mass();
  double s = 0.0;
  for (const auto& [x, a] : entries_) {
    const double n = a.operator_norm();
    s += n * n;
  }
  return std::sqrt(w * s);
}

double CrossSection::norm_linf() const {
  double s = 0.0;
  for (const auto& [x, a] : entries_) s = std::max(s, a.operator_norm());
  return s;
}

void CrossSection::prune(double rel) {
  if (entries_.empty()) return;
  const double w = group().point_mass();
  const double threshold = rel * norm_l1() / std::max(w, 1e-300);
  double dropped = 0.0;
  std::vector<std::pair<Point, Fiber>> kept;
  kept.reserve(entries_.size());
  for (auto& e : entries_) {
    const double n = e.second.operator_norm();
    if (n < threshold)
      dropped += n;
    else
      kept.push_back(std::move(e));
  }
  entries_ = std::move(kept);
  budget_ += w * dropped;
}

int CrossSection::support_radius(CayleyBall& ball, int r_max) const {
  int r = 0;
  for (const auto& [x, a] : entries_) r = std::max(r, word_length(ball, x, r_max));
  return r;
}

CrossSection convolve(const CrossSection& phi, const CrossSection& psi) {
  if (!phi.system().compatible(psi.system()))
    throw SystemMismatch("convolve: different twisted systems");
  const TwistedSystem& sys = phi.system();
  const GroupModel& g = sys.group();
  const double w = g.point_mass();
  const bool plain = sys.trivial_action() && sys.trivial_twist() && phi.fiber_dim() == 1;

  std::unordered_map<Point, Fiber, PointHash> acc;
  acc.reserve(phi.support_size() + psi.support_size());
  for (const auto& [y, a] : phi.entries()) {
    for (const auto& [z, b] : psi.entries()) {
      const Point target = g.multiply(y, z);
      if (plain) {
        Complex v = w * a.scalar_value() * b.scalar_value();
        auto [it, fresh] = acc.try_emplace(target, Fiber::scalar(v));
        if (!fresh) it->second += Fiber::scalar(v);
      } else {
        Fiber f = fiber_mul(fiber_mul(a, sys.act(y, b)), sys.cocycle(y, z));
        f *= Complex(w, 0.0);
        auto [it, fresh] = acc.try_emplace(target, f);
        if (!fresh) it->second += f;
      }
    }
  }

  // Per-target contributions were accumulated in the deterministic
  // double-loop order above; the hash layout only affects where the totals
  // live, so sorting restores a canonical result.
  std::vector<std::pair<Point, Fiber>> entries(acc.begin(), acc.end());
  std::sort(entries.begin(), entries.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  CrossSection result(phi.system_ptr());
  for (auto& e : entries)
    if (!e.second.is_zero()) result.entries_.push_back(std::move(e));
  result.charge_budget(phi.error_budget() * psi.norm_l1() +
                       psi.error_budget() * phi.norm_l1() +
                       phi.error_budget() * psi.error_budget());
  result.prune();
  return result;
}

CrossSection involution(const CrossSection& phi) {
  const TwistedSystem& sys = phi.system();
  CrossSection out(phi.system_ptr());
  for (const auto& [y, a] : phi.entries()) {
    const BundleElement adj = bundle_adjoint(sys, BundleElement{a, y});
    out.accumulate(adj.x, adj.a);
  }
  out.charge_budget(phi.error_budget());
  return out;
}

CrossSection power(const CrossSection& phi, int n) {
  if (n < 1) throw InvalidSpec("power: n must be >= 1");
  CrossSection base = phi;
  CrossSection result = phi;
  bool have = false;
  int k = n;
  while (k > 0) {
    if (k & 1) {
      result = have ? convolve(result, base) : base;
      have = true;
    }
    k >>= 1;
    if (k > 0) base = convolve(base, base);
  }
  return result;
}

bool is_selfadjoint(const CrossSection& phi, double tol) {
  CrossSection d = phi;
  d -= involution(phi);
  return d.norm_l1() <= tol;
}

CrossSection Unital::absorb() const {
  CrossSection out = part;
  CrossSection u = CrossSection::unit(part.system_ptr());
  u *= scalar;
  out += u;
  return out;
}

Unital unital_mul(const Unital& u, const Unital& v) {
  Unital out(u.part.system_ptr());
  out.scalar = u.scalar * v.scalar;
  out.part = convolve(u.part, v.part);
  CrossSection t1 = v.part;
  t1 *= u.scalar;
  CrossSection t2 = u.part;
  t2 *= v.scalar;
  out.part += t1;
  out.part += t2;
  out.part.prune();
  return out;
}

Unital unital_add(const Unital& u, const Unital& v) {
  Unital out = u;
  out.scalar += v.scalar;
  out.part += v.part;
  return out;
}

Unital unital_scale(Complex c, const Unital& u) {
  Unital out = u;
  out.scalar *= c;
  out.part *= c;
  return out;
}

}  // namespace fellband

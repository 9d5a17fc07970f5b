#ifndef FELLBAND_TEST_HELPERS_HPP
#define FELLBAND_TEST_HELPERS_HPP

#include <fellband/calculus.hpp>
#include <fellband/group.hpp>
#include <fellband/norms.hpp>
#include <fellband/section.hpp>
#include <fellband/system.hpp>

namespace fellband::testing {

inline Point pt(std::initializer_list<std::int64_t> coords) { return Point(coords); }

inline TwistedSystem::Ptr z_scalar() { return TwistedSystem::trivial(GroupModel::zd(1)); }
inline TwistedSystem::Ptr z2_scalar() { return TwistedSystem::trivial(GroupModel::zd(2)); }
inline TwistedSystem::Ptr heis_scalar() { return TwistedSystem::trivial(GroupModel::heis3()); }

inline TwistedSystem::Ptr torus(std::int64_t num, std::int64_t den) {
  return TwistedSystem::nc_torus(GroupModel::zd(2), num, den);
}

// Cyclic{m} with the scalar carry twist W_j = u^j, u = e^{2 pi i beta}.
inline TwistedSystem::Ptr cyclic_carry(std::int64_t m, double beta) {
  return TwistedSystem::inner_cyclic_power(GroupModel::cyclic(m),
                                           Fiber::scalar(std::polar(1.0, kTwoPi * beta)));
}

// Cyclic{m} with an inner M_2 action generated by a rotation unitary.
inline TwistedSystem::Ptr cyclic_m2(std::int64_t m, double angle = 0.7) {
  const double c = std::cos(angle), s = std::sin(angle);
  Fiber u = Fiber::matrix(2, {Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0)});
  return TwistedSystem::inner_cyclic_power(GroupModel::cyclic(m), u);
}

inline TwistedSystem::Ptr cyclic_pauli_x(std::int64_t m = 2) {
  Fiber x = Fiber::matrix(2, {Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0)});
  return TwistedSystem::inner_cyclic_power(GroupModel::cyclic(m), x);
}

inline Fiber random_fiber(Rng& rng, int k) {
  Fiber f = Fiber::zero(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) f.set(i, j, rng.complex_gaussian());
  return f;
}

// Random section supported in the ball of the given radius.
inline CrossSection random_section(TwistedSystem::Ptr sys, Rng& rng, int radius,
                                   int max_points, bool selfadjoint) {
  CayleyBall ball(sys->group(), sys->group().standard_generators());
  const std::vector<Point> pts = ball.ball(radius);
  CrossSection s(sys);
  const int n = std::max(1, std::min<int>(max_points, static_cast<int>(pts.size())));
  for (int i = 0; i < n; ++i) {
    const Point& x = pts[rng.below(pts.size())];
    s.accumulate(x, random_fiber(rng, sys->fiber_dim()));
  }
  s.prune();
  if (selfadjoint) {
    CrossSection adj = involution(s);
    s += adj;
    s *= Complex(0.5, 0.0);
    s.prune();
  }
  return s;
}

// delta_1 + delta_{-1} on Z, or the diamond Laplacian on Z^2 / the twisted torus.
inline CrossSection laplacian(TwistedSystem::Ptr sys) {
  CrossSection s(sys);
  const GroupModel& g = sys->group();
  const GeneratingSet k = g.standard_generators();
  for (const Point& x : k.elements)
    if (!(x == g.identity())) s.accumulate(x, Fiber::identity(sys->fiber_dim()));
  return s;
}

inline CrossSection scalar_delta(TwistedSystem::Ptr sys, const Point& x, Complex c) {
  return CrossSection::delta(sys, x, Fiber::scalar(c));
}

}  // namespace fellband::testing

#endif

#include <doctest.h>

#include <map>
#include <queue>
#include <set>

#include "helpers.hpp"

using namespace fellband;
using fellband::testing::pt;

namespace {

// Independent integer-point oracle: |{x in Z^d : sum |x_i| <= n}|
// = sum_k 2^k C(d,k) C(n,k).
std::size_t zd_ball_count(int d, int n) {
  auto choose = [](std::int64_t a, std::int64_t b) {
    if (b < 0 || b > a) return std::int64_t(0);
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
  };
  std::int64_t total = 0;
  for (int k = 0; k <= d; ++k)
    total += (std::int64_t(1) << k) * choose(d, k) * choose(n, k);
  return static_cast<std::size_t>(total);
}

// Test-local BFS over raw Heisenberg triples, independent of CayleyBall.
int heis_bfs_distance(std::array<std::int64_t, 3> target, int r_max) {
  using T = std::array<std::int64_t, 3>;
  auto mul = [](T a, T b) {
    return T{a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]};
  };
  const std::vector<T> gens = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  std::map<T, int> dist;
  std::queue<T> q;
  dist[{0, 0, 0}] = 0;
  q.push({0, 0, 0});
  while (!q.empty()) {
    const T cur = q.front();
    q.pop();
    const int d = dist[cur];
    if (cur == target) return d;
    if (d >= r_max) continue;
    for (const T& g : gens) {
      const T nxt = mul(cur, g);
      if (dist.emplace(nxt, d + 1).second) q.push(nxt);
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("group axioms hold on sampled elements") {
  Rng rng(11);
  const std::vector<GroupModel> models = {
      GroupModel::zd(1), GroupModel::zd(3), GroupModel::heis3(), GroupModel::cyclic(6),
      GroupModel::direct_sum_z2(10),
      GroupModel::product(GroupModel::zd(1), GroupModel::cyclic(4))};
  for (const GroupModel& g : models) {
    CayleyBall ball(g, g.standard_generators());
    const std::vector<Point> pts = ball.ball(3);
    for (int it = 0; it < 200; ++it) {
      const Point x = pts[rng.below(pts.size())];
      const Point y = pts[rng.below(pts.size())];
      const Point z = pts[rng.below(pts.size())];
      CHECK(g.multiply(x, g.inverse(x)) == g.identity());
      CHECK(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)));
    }
  }
}

TEST_CASE("word length on Z and at the identity") {
  GroupModel g = GroupModel::zd(1);
  CayleyBall ball(g, g.standard_generators());
  CHECK(word_length(ball, pt({5})) == 5);
  CHECK(word_length(ball, pt({0})) == 0);
  CHECK(word_length(ball, pt({-7})) == 7);
}

TEST_CASE("word length of the Heisenberg central element matches a BFS oracle") {
  GroupModel g = GroupModel::heis3();
  CayleyBall ball(g, g.standard_generators());
  const int oracle = heis_bfs_distance({0, 0, 1}, 10);
  REQUIRE(oracle > 0);
  CHECK(word_length(ball, pt({0, 0, 1})) == oracle);
}

TEST_CASE("word length is subadditive on sampled pairs") {
  for (const GroupModel& g : {GroupModel::zd(2), GroupModel::heis3()}) {
    CayleyBall ball(g, g.standard_generators());
    const std::vector<Point> pts = ball.ball(4);
    Rng rng(5);
    for (int it = 0; it < 300; ++it) {
      const Point x = pts[rng.below(pts.size())];
      const Point y = pts[rng.below(pts.size())];
      const int sx = word_length(ball, x);
      const int sy = word_length(ball, y);
      const int sxy = word_length(ball, g.multiply(x, y));
      CHECK(sxy <= sx + sy);
    }
  }
}

TEST_CASE("Z^2 ball sizes match the integer-point oracle") {
  GroupModel g = GroupModel::zd(2);
  CayleyBall ball(g, g.standard_generators());
  for (int n = 0; n <= 12; ++n) {
    CHECK(ball.ball_size(n) == zd_ball_count(2, n));
    CHECK(ball.ball_size(n) == static_cast<std::size_t>(2 * n * n + 2 * n + 1));
  }
}

TEST_CASE("ball sizes are nondecreasing and cover Cyclic{6} at radius 1") {
  GroupModel g = GroupModel::cyclic(6);
  GeneratingSet all;
  all.elements = g.elements();
  CayleyBall ball(g, all);
  CHECK(ball.ball_size(1) == 6);

  GroupModel h = GroupModel::heis3();
  CayleyBall hb(h, h.standard_generators());
  std::size_t prev = 0;
  for (int n = 0; n <= 8; ++n) {
    CHECK(hb.ball_size(n) >= prev);
    prev = hb.ball_size(n);
  }
}

TEST_CASE("ball enumeration budget trips with a partial count") {
  GroupModel g = GroupModel::zd(2);
  CayleyBall ball(g, g.standard_generators(), 50);
  CHECK_THROWS_AS(ball.grow_to(10), BudgetExceeded);
}

TEST_CASE("word length outside the generated range raises NotGenerated") {
  GroupModel g = GroupModel::zd(1);
  CayleyBall ball(g, g.standard_generators());
  CHECK_THROWS_AS(word_length(ball, pt({50}), 10), NotGenerated);
}

TEST_CASE("growth profiles recover the declared order") {
  {
    GroupModel g = GroupModel::zd(1);
    CayleyBall ball(g, g.standard_generators());
    const GrowthProfile p = growth_profile(ball, 32);
    CHECK(p.fitted_order > 0.9);
    CHECK(p.fitted_order < 1.1);
  }
  {
    GroupModel g = GroupModel::zd(3);
    CayleyBall ball(g, g.standard_generators());
    const GrowthProfile p = growth_profile(ball, 16);
    CHECK(p.fitted_order > 2.7);
    CHECK(p.fitted_order < 3.3);
  }
  {
    GroupModel g = GroupModel::heis3();
    CayleyBall ball(g, g.standard_generators());
    const GrowthProfile p = growth_profile(ball, 16);
    CHECK(p.fitted_order > 3.4);
    CHECK(p.fitted_order < 4.6);
  }
  {
    GroupModel g = GroupModel::cyclic(5);
    CayleyBall ball(g, g.standard_generators());
    const GrowthProfile p = growth_profile(ball, 24);
    CHECK(p.fitted_order < 0.2);  // bounded group, slope collapses past the diameter
  }
}

TEST_CASE("element encodings are injective on sampled products") {
  GroupModel g = GroupModel::heis3();
  CayleyBall ball(g, g.standard_generators());
  const std::vector<Point> pts = ball.ball(4);
  std::set<Point> seen(pts.begin(), pts.end());
  CHECK(seen.size() == pts.size());
}

TEST_CASE("normalized measure on finite groups") {
  GroupModel g = GroupModel::cyclic(4);
  CHECK(g.point_mass() == 1.0);
  g.set_normalized_measure(true);
  CHECK(g.point_mass() == doctest::Approx(0.25));
  CHECK_THROWS_AS(GroupModel::zd(1).set_normalized_measure(true), InvalidSpec);
}

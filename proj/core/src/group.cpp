#include "fellband/group.hpp"

#include <algorithm>
#include <cmath>

namespace fellband {

GroupModel GroupModel::zd(int d) {
  if (d < 1 || d > Point::kMaxCoords) throw InvalidSpec("zd: d out of range");
  GroupModel g;
  g.kind_ = Kind::Zd;
  g.coords_ = d;
  g.d_ = d;
  g.growth_order_ = d;
  return g;
}

GroupModel GroupModel::heis3() {
  GroupModel g;
  g.kind_ = Kind::Heis3;
  g.coords_ = 3;
  g.growth_order_ = 4;
  return g;
}

GroupModel GroupModel::cyclic(std::int64_t m) {
  if (m < 1) throw InvalidSpec("cyclic: modulus must be >= 1");
  GroupModel g;
  g.kind_ = Kind::Cyclic;
  g.coords_ = 1;
  g.m_ = m;
  g.growth_order_ = 0;
  return g;
}

GroupModel GroupModel::direct_sum_z2(int active_bits) {
  if (active_bits < 1 || active_bits > 62)
    throw InvalidSpec("direct_sum_z2: active_bits in [1,62]");
  GroupModel g;
  g.kind_ = Kind::DirectSumZ2;
  g.coords_ = 1;
  g.active_bits_ = active_bits;
  g.growth_order_ = 0;
  return g;
}

GroupModel GroupModel::product(GroupModel a, GroupModel b) {
  if (a.coords_ + b.coords_ > Point::kMaxCoords)
    throw InvalidSpec("product: combined encoding too wide");
  GroupModel g;
  g.kind_ = Kind::Product;
  g.coords_ = a.coords_ + b.coords_;
  g.growth_order_ = a.growth_order_ + b.growth_order_;
  g.left_ = std::make_shared<GroupModel>(std::move(a));
  g.right_ = std::make_shared<GroupModel>(std::move(b));
  return g;
}

Point GroupModel::identity() const {
  Point p;
  for (int i = 0; i < coords_; ++i) p.push(0);
  return p;
}

namespace {

inline std::int64_t mod_nonneg(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Point slice(const Point& p, int from, int count) {
  Point q;
  for (int i = 0; i < count; ++i) q.push(p[from + i]);
  return q;
}

Point concat(const Point& a, const Point& b) {
  Point q = a;
  for (int i = 0; i < b.size(); ++i) q.push(b[i]);
  return q;
}

}  // namespace

Point GroupModel::multiply(const Point& x, const Point& y) const {
  switch (kind_) {
    case Kind::Zd: {
      Point p;
      for (int i = 0; i < d_; ++i) p.push(x[i] + y[i]);
      return p;
    }
    case Kind::Heis3: {
      // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b')
      Point p;
      p.push(x[0] + y[0]);
      p.push(x[1] + y[1]);
      p.push(x[2] + y[2] + x[0] * y[1]);
      return p;
    }
    case Kind::Cyclic: {
      Point p;
      p.push(mod_nonneg(x[0] + y[0], m_));
      return p;
    }
    case Kind::DirectSumZ2: {
      Point p;
      p.push(x[0] ^ y[0]);
      return p;
    }
    case Kind::Product: {
      const int lc = left_->coord_count();
      return concat(left_->multiply(slice(x, 0, lc), slice(y, 0, lc)),
                    right_->multiply(slice(x, lc, coords_ - lc),
                                     slice(y, lc, coords_ - lc)));
    }
  }
  throw InvalidSpec("multiply: unknown kind");
}

Point GroupModel::inverse(const Point& x) const {
  switch (kind_) {
    case Kind::Zd: {
      Point p;
      for (int i = 0; i < d_; ++i) p.push(-x[i]);
      return p;
    }
    case Kind::Heis3: {
      // (a,b,c)^{-1} = (-a,-b,ab-c)
      Point p;
      p.push(-x[0]);
      p.push(-x[1]);
      p.push(x[0] * x[1] - x[2]);
      return p;
    }
    case Kind::Cyclic: {
      Point p;
      p.push(mod_nonneg(-x[0], m_));
      return p;
    }
    case Kind::DirectSumZ2:
      return x;  // every element is an involution
    case Kind::Product: {
      const int lc = left_->coord_count();
      return concat(left_->inverse(slice(x, 0, lc)),
                    right_->inverse(slice(x, lc, coords_ - lc)));
    }
  }
  throw InvalidSpec("inverse: unknown kind");
}

bool GroupModel::is_finite() const {
  switch (kind_) {
    case Kind::Cyclic:
    case Kind::DirectSumZ2:
      return true;
    case Kind::Product:
      return left_->is_finite() && right_->is_finite();
    default:
      return false;
  }
}

std::int64_t GroupModel::order() const {
  if (!is_finite()) throw InvalidSpec("order: group is infinite");
  switch (kind_) {
    case Kind::Cyclic:
      return m_;
    case Kind::DirectSumZ2:
      return std::int64_t(1) << active_bits_;
    case Kind::Product:
      return left_->order() * right_->order();
    default:
      throw InvalidSpec("order: unreachable");
  }
}

std::vector<Point> GroupModel::elements() const {
  if (!is_finite()) throw InvalidSpec("elements: group is infinite");
  std::vector<Point> out;
  switch (kind_) {
    case Kind::Cyclic:
      for (std::int64_t i = 0; i < m_; ++i) {
        Point p;
        p.push(i);
        out.push_back(p);
      }
      break;
    case Kind::DirectSumZ2:
      for (std::int64_t mask = 0; mask < (std::int64_t(1) << active_bits_); ++mask) {
        Point p;
        p.push(mask);
        out.push_back(p);
      }
      break;
    case Kind::Product: {
      for (const Point& a : left_->elements())
        for (const Point& b : right_->elements()) out.push_back(concat(a, b));
      break;
    }
    default:
      throw InvalidSpec("elements: unreachable");
  }
  std::sort(out.begin(), out.end());
  return out;
}

GeneratingSet GroupModel::standard_generators() const {
  GeneratingSet k;
  k.symmetric = true;
  k.elements.push_back(identity());
  switch (kind_) {
    case Kind::Zd:
      for (int i = 0; i < d_; ++i) {
        Point p = identity(), q = identity();
        p[i] = 1;
        q[i] = -1;
        k.elements.push_back(p);
        k.elements.push_back(q);
      }
      break;
    case Kind::Heis3: {
      for (int i : {0, 1}) {
        Point p = identity(), q = identity();
        p[i] = 1;
        q[i] = -1;
        k.elements.push_back(p);
        k.elements.push_back(q);
      }
      break;
    }
    case Kind::Cyclic: {
      if (m_ > 1) {
        Point p = identity(), q = identity();
        p[0] = 1;
        q[0] = m_ - 1;
        k.elements.push_back(p);
        if (q != p) k.elements.push_back(q);
      }
      break;
    }
    case Kind::DirectSumZ2:
      for (int i = 0; i < active_bits_; ++i) {
        Point p = identity();
        p[0] = std::int64_t(1) << i;
        k.elements.push_back(p);
      }
      break;
    case Kind::Product: {
      const GeneratingSet kl = left_->standard_generators();
      const GeneratingSet kr = right_->standard_generators();
      const Point el = left_->identity(), er = right_->identity();
      for (const Point& a : kl.elements)
        if (!(a == el)) k.elements.push_back(concat(a, er));
      for (const Point& b : kr.elements)
        if (!(b == er)) k.elements.push_back(concat(el, b));
      break;
    }
  }
  std::sort(k.elements.begin(), k.elements.end());
  k.elements.erase(std::unique(k.elements.begin(), k.elements.end()), k.elements.end());
  return k;
}

void GroupModel::set_normalized_measure(bool on) {
  if (on && !is_finite())
    throw InvalidSpec("normalized measure requires a finite group");
  point_mass_ = on ? 1.0 / static_cast<double>(order()) : 1.0;
}

std::string GroupModel::describe() const {
  switch (kind_) {
    case Kind::Zd:
      return "Z^" + std::to_string(d_);
    case Kind::Heis3:
      return "Heis3";
    case Kind::Cyclic:
      return "Z/" + std::to_string(m_);
    case Kind::DirectSumZ2:
      return "(Z/2)^(" + std::to_string(active_bits_) + ")";
    case Kind::Product:
      return left_->describe() + " x " + right_->describe();
  }
  return "?";
}

bool GroupModel::same_as(const GroupModel& other) const {
  if (kind_ != other.kind_ || coords_ != other.coords_) return false;
  switch (kind_) {
    case Kind::Zd:
      return d_ == other.d_;
    case Kind::Cyclic:
      return m_ == other.m_;
    case Kind::DirectSumZ2:
      return active_bits_ == other.active_bits_;
    case Kind::Product:
      return left_->same_as(*other.left_) && right_->same_as(*other.right_);
    default:
      return true;
  }
}

CayleyBall::CayleyBall(const GroupModel& group, GeneratingSet gens,
                       std::size_t element_budget)
    : group_(group), gens_(std::move(gens)), budget_(element_budget) {
  if (gens_.elements.empty()) throw InvalidSpec("CayleyBall: empty generating set");
  const Point e = group_.identity();
  if (std::find(gens_.elements.begin(), gens_.elements.end(), e) == gens_.elements.end())
    throw InvalidSpec("CayleyBall: generating set must contain the identity");
  if (gens_.symmetric) {
    for (const Point& g : gens_.elements) {
      const Point gi = group_.inverse(g);
      if (std::find(gens_.elements.begin(), gens_.elements.end(), gi) ==
          gens_.elements.end())
        throw InvalidSpec("CayleyBall: generating set not closed under inverse");
    }
  }
  shells_.push_back({e});
  index_.emplace(e, 0);
}

void CayleyBall::grow_to(int n) {
  while (grown_radius() < n && !exhausted_) {
    const std::vector<Point>& frontier = shells_.back();
    std::vector<Point> next;
    for (const Point& x : frontier) {
      for (const Point& g : gens_.elements) {
        Point y = group_.multiply(x, g);
        auto [it, inserted] = index_.emplace(y, grown_radius() + 1);
        (void)it;
        if (inserted) {
          next.push_back(y);
          if (index_.size() > budget_)
            throw BudgetExceeded("ball enumeration budget exceeded at radius " +
                                     std::to_string(grown_radius() + 1),
                                 index_.size());
        }
      }
    }
    if (next.empty()) {
      exhausted_ = true;
      return;
    }
    std::sort(next.begin(), next.end());
    shells_.push_back(std::move(next));
  }
}

const std::vector<Point>& CayleyBall::shell(int n) {
  grow_to(n);
  static const std::vector<Point> empty;
  if (n > grown_radius()) return empty;
  return shells_[static_cast<std::size_t>(n)];
}

std::vector<Point> CayleyBall::ball(int n) {
  grow_to(n);
  std::vector<Point> out;
  for (int r = 0; r <= std::min(n, grown_radius()); ++r)
    out.insert(out.end(), shells_[static_cast<std::size_t>(r)].begin(),
               shells_[static_cast<std::size_t>(r)].end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CayleyBall::ball_size(int n) {
  grow_to(n);
  std::size_t total = 0;
  for (int r = 0; r <= std::min(n, grown_radius()); ++r)
    total += shells_[static_cast<std::size_t>(r)].size();
  return total;
}

std::optional<int> CayleyBall::distance(const Point& x, int r_max) {
  auto it = index_.find(x);
  if (it != index_.end()) return it->second;
  while (grown_radius() < r_max && !exhausted_) {
    grow_to(grown_radius() + 1);
    it = index_.find(x);
    if (it != index_.end()) return it->second;
  }
  return std::nullopt;
}

int word_length(CayleyBall& ball, const Point& x, int r_max) {
  auto d = ball.distance(x, r_max);
  if (!d)
    throw NotGenerated("element " + x.str() + " not generated within radius " +
                       std::to_string(r_max));
  return *d;
}

GrowthProfile growth_profile(CayleyBall& ball, int n_max) {
  if (n_max < 4) throw InvalidSpec("growth_profile: n_max must be >= 4");
  GrowthProfile prof;
  for (int n = 1; n <= n_max; ++n) {
    prof.radii.push_back(n);
    prof.sizes.push_back(ball.ball_size(n));
  }
  std::vector<double> lx, ly;
  for (std::size_t i = prof.radii.size() / 2; i < prof.radii.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(prof.radii[i])));
    ly.push_back(std::log(static_cast<double>(prof.sizes[i])));
  }
  const LineFit fit = fit_line(lx, ly);
  prof.fitted_order = fit.slope;
  prof.residual = fit.residual;
  return prof;
}

}  // namespace fellband

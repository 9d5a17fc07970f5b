#ifndef FELLBAND_POINT_HPP
#define FELLBAND_POINT_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>

#include "fellband/common.hpp"

namespace fellband {

// Canonical encoding of a group element: a short tuple of integers whose
// meaning is fixed by the owning GroupModel (Z^d coordinates, Heisenberg
// triple, cyclic residue, bitmask, or the concatenation for products).
// Lexicographic order on (len, coords) gives the deterministic iteration
// order used throughout; equality of encodings is equality of elements.
struct Point {
  static constexpr int kMaxCoords = 6;

  std::array<std::int64_t, kMaxCoords> v{};
  std::uint8_t len = 0;

  Point() = default;
  explicit Point(std::initializer_list<std::int64_t> coords) {
    for (std::int64_t c : coords) push(c);
  }

  void push(std::int64_t c) {
    if (len >= kMaxCoords) throw InvalidSpec("Point: too many coordinates");
    v[len++] = c;
  }

  std::int64_t operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  int size() const { return len; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.len != b.len) return false;
    for (int i = 0; i < a.len; ++i)
      if (a.v[static_cast<std::size_t>(i)] != b.v[static_cast<std::size_t>(i)]) return false;
    return true;
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.len != b.len) return a.len < b.len;
    for (int i = 0; i < a.len; ++i) {
      const auto ai = a.v[static_cast<std::size_t>(i)];
      const auto bi = b.v[static_cast<std::size_t>(i)];
      if (ai != bi) return ai < bi;
    }
    return false;
  }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < len; ++i) {
      if (i) s += ",";
      s += std::to_string(v[static_cast<std::size_t>(i)]);
    }
    s += ")";
    return s;
  }
};

struct PointHash {
  std::size_t operator()(const Point& p) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.len;
    for (int i = 0; i < p.len; ++i) {
      std::uint64_t x = static_cast<std::uint64_t>(p.v[static_cast<std::size_t>(i)]);
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      h ^= (x ^ (x >> 31)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace fellband

#endif

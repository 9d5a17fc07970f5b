#ifndef FELLBAND_FIBER_HPP
#define FELLBAND_FIBER_HPP

#include <vector>

#include "fellband/common.hpp"

namespace fellband {

// Element of the coefficient C*-algebra: a k x k complex matrix, with k = 1
// (plain scalars) stored inline so the scalar-fiber hot paths never allocate.
// The norm is the largest singular value, which is the C*-norm for M_k.
class Fiber {
 public:
  Fiber() = default;  // scalar zero

  static Fiber scalar(Complex z) {
    Fiber f;
    f.s_ = z;
    return f;
  }
  static Fiber zero(int k);
  static Fiber identity(int k);
  static Fiber matrix(int k, std::vector<Complex> row_major);

  int dim() const { return k_; }
  bool is_scalar() const { return k_ == 1; }

  Complex at(int i, int j) const {
    return k_ == 1 ? s_ : m_[static_cast<std::size_t>(i * k_ + j)];
  }
  void set(int i, int j, Complex z) {
    if (k_ == 1)
      s_ = z;
    else
      m_[static_cast<std::size_t>(i * k_ + j)] = z;
  }
  Complex scalar_value() const { return s_; }

  Fiber& operator+=(const Fiber& other);
  Fiber& operator-=(const Fiber& other);
  Fiber& operator*=(Complex c);
  friend Fiber operator+(Fiber a, const Fiber& b) { return a += b; }
  friend Fiber operator-(Fiber a, const Fiber& b) { return a -= b; }
  friend Fiber operator*(Complex c, Fiber a) { return a *= c; }

  double operator_norm() const;  // largest singular value
  double frobenius() const;
  bool is_zero(double tol = 0.0) const { return frobenius() <= tol; }

  friend Fiber fiber_mul(const Fiber& a, const Fiber& b);
  friend Fiber fiber_adjoint(const Fiber& a);

  // max |(U^* U - I)_{ij}|, 0 for a perfect unitary
  double unitary_defect() const;

 private:
  Complex s_{0.0, 0.0};
  int k_ = 1;
  std::vector<Complex> m_;  // row-major k*k when k > 1
};

Fiber fiber_mul(const Fiber& a, const Fiber& b);
Fiber fiber_adjoint(const Fiber& a);

}  // namespace fellband

#endif

#include "fellband/fiber.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace fellband {

Fiber Fiber::zero(int k) {
  if (k < 1) throw DimensionMismatch("Fiber: dimension must be >= 1");
  Fiber f;
  f.k_ = k;
  if (k > 1) f.m_.assign(static_cast<std::size_t>(k) * k, Complex(0, 0));
  return f;
}

Fiber Fiber::identity(int k) {
  Fiber f = zero(k);
  if (k == 1) {
    f.s_ = Complex(1, 0);
  } else {
    for (int i = 0; i < k; ++i) f.m_[static_cast<std::size_t>(i * k + i)] = Complex(1, 0);
  }
  return f;
}

Fiber Fiber::matrix(int k, std::vector<Complex> row_major) {
  if (static_cast<int>(row_major.size()) != k * k)
    throw DimensionMismatch("Fiber::matrix: wrong entry count");
  Fiber f = zero(k);
  if (k == 1)
    f.s_ = row_major[0];
  else
    f.m_ = std::move(row_major);
  return f;
}

Fiber& Fiber::operator+=(const Fiber& other) {
  if (k_ != other.k_) throw DimensionMismatch("Fiber: dimension mismatch in +");
  if (k_ == 1) {
    s_ += other.s_;
  } else {
    for (std::size_t i = 0; i < m_.size(); ++i) m_[i] += other.m_[i];
  }
  return *this;
}

Fiber& Fiber::operator-=(const Fiber& other) {
  if (k_ != other.k_) throw DimensionMismatch("Fiber: dimension mismatch in -");
  if (k_ == 1) {
    s_ -= other.s_;
  } else {
    for (std::size_t i = 0; i < m_.size(); ++i) m_[i] -= other.m_[i];
  }
  return *this;
}

Fiber& Fiber::operator*=(Complex c) {
  if (k_ == 1) {
    s_ *= c;
  } else {
    for (auto& z : m_) z *= c;
  }
  return *this;
}

double Fiber::operator_norm() const {
  if (k_ == 1) return std::abs(s_);
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      m(m_.data(), k_, k_);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double Fiber::frobenius() const {
  if (k_ == 1) return std::abs(s_);
  double ss = 0.0;
  for (const auto& z : m_) ss += std::norm(z);
  return std::sqrt(ss);
}

Fiber fiber_mul(const Fiber& a, const Fiber& b) {
  if (a.k_ != b.k_) throw DimensionMismatch("fiber_mul: dimension mismatch");
  if (a.k_ == 1) return Fiber::scalar(a.s_ * b.s_);
  const int k = a.k_;
  Fiber c = Fiber::zero(k);
  for (int i = 0; i < k; ++i)
    for (int l = 0; l < k; ++l) {
      const Complex ail = a.m_[static_cast<std::size_t>(i * k + l)];
      if (ail == Complex(0, 0)) continue;
      for (int j = 0; j < k; ++j)
        c.m_[static_cast<std::size_t>(i * k + j)] +=
            ail * b.m_[static_cast<std::size_t>(l * k + j)];
    }
  return c;
}

Fiber fiber_adjoint(const Fiber& a) {
  if (a.k_ == 1) return Fiber::scalar(std::conj(a.s_));
  const int k = a.k_;
  Fiber c = Fiber::zero(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      c.m_[static_cast<std::size_t>(i * k + j)] =
          std::conj(a.m_[static_cast<std::size_t>(j * k + i)]);
  return c;
}

double Fiber::unitary_defect() const {
  const Fiber d = fiber_mul(fiber_adjoint(*this), *this) - identity(k_);
  double worst = 0.0;
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) worst = std::max(worst, std::abs(d.at(i, j)));
  return worst;
}

}  // namespace fellband

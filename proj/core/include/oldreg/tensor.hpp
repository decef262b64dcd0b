#pragma once

#include <array>
#include <cmath>
#include <cstddef>

// Small fixed-size tensor kernels for the model's coupling algebra.
// Dimension is a compile-time parameter restricted to 2 or 3; symmetric
// tensors store the upper triangle only, so symmetry of results such as
// coupling_b holds by construction, not by cancellation.

namespace oldreg {

template <int D>
concept ValidDim = (D == 2 || D == 3);

template <int D>
  requires ValidDim<D>
class FullTensor;

template <int D>
  requires ValidDim<D>
class SymTensor {
public:
  static constexpr int dim = D;
  static constexpr int ncomp = D * (D + 1) / 2;

  constexpr SymTensor() : e_{} {}

  // Upper-triangle index: 2D -> [00, 01, 11]; 3D -> [00, 01, 02, 11, 12, 22].
  static constexpr int tri_index(int i, int j) {
    if (i > j) std::swap(i, j);
    return i * D - i * (i - 1) / 2 + (j - i);
  }

  constexpr double operator()(int i, int j) const { return e_[tri_index(i, j)]; }
  constexpr double& at(int i, int j) { return e_[tri_index(i, j)]; }

  constexpr double comp(int k) const { return e_[k]; }
  constexpr double& comp(int k) { return e_[k]; }

  static constexpr SymTensor identity() {
    SymTensor t;
    for (int i = 0; i < D; ++i) t.at(i, i) = 1.0;
    return t;
  }

  SymTensor& operator+=(const SymTensor& o) {
    for (int k = 0; k < ncomp; ++k) e_[k] += o.e_[k];
    return *this;
  }
  SymTensor& operator-=(const SymTensor& o) {
    for (int k = 0; k < ncomp; ++k) e_[k] -= o.e_[k];
    return *this;
  }
  SymTensor& operator*=(double s) {
    for (int k = 0; k < ncomp; ++k) e_[k] *= s;
    return *this;
  }

  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }
  friend SymTensor operator*(SymTensor a, double s) { return a *= s; }

  FullTensor<D> full() const;

private:
  std::array<double, ncomp> e_;
};

template <int D>
  requires ValidDim<D>
class FullTensor {
public:
  static constexpr int dim = D;

  constexpr FullTensor() : e_{} {}

  constexpr double operator()(int i, int j) const { return e_[i * D + j]; }
  constexpr double& operator()(int i, int j) { return e_[i * D + j]; }

  static constexpr FullTensor identity() {
    FullTensor t;
    for (int i = 0; i < D; ++i) t(i, i) = 1.0;
    return t;
  }

  FullTensor transpose() const {
    FullTensor t;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) t(i, j) = (*this)(j, i);
    return t;
  }

  FullTensor& operator+=(const FullTensor& o) {
    for (int k = 0; k < D * D; ++k) e_[k] += o.e_[k];
    return *this;
  }
  FullTensor& operator-=(const FullTensor& o) {
    for (int k = 0; k < D * D; ++k) e_[k] -= o.e_[k];
    return *this;
  }
  FullTensor& operator*=(double s) {
    for (int k = 0; k < D * D; ++k) e_[k] *= s;
    return *this;
  }

  friend FullTensor operator+(FullTensor a, const FullTensor& b) { return a += b; }
  friend FullTensor operator-(FullTensor a, const FullTensor& b) { return a -= b; }
  friend FullTensor operator*(double s, FullTensor a) { return a *= s; }
  friend FullTensor operator*(FullTensor a, double s) { return a *= s; }

private:
  std::array<double, D * D> e_;
};

template <int D>
  requires ValidDim<D>
FullTensor<D> SymTensor<D>::full() const {
  FullTensor<D> t;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) t(i, j) = (*this)(i, j);
  return t;
}

template <int D>
SymTensor<D> sym_part(const FullTensor<D>& g) {
  SymTensor<D> s;
  for (int i = 0; i < D; ++i)
    for (int j = i; j < D; ++j) s.at(i, j) = 0.5 * (g(i, j) + g(j, i));
  return s;
}

template <int D>
FullTensor<D> skew_part(const FullTensor<D>& g) {
  FullTensor<D> w;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) w(i, j) = 0.5 * (g(i, j) - g(j, i));
  return w;
}

// Frobenius pairings.  The symmetric-storage pairing weights off-diagonal
// components twice so it equals the full-matrix double contraction.
template <int D>
double ddot(const FullTensor<D>& a, const FullTensor<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) s += a(i, j) * b(i, j);
  return s;
}

template <int D>
double ddot(const SymTensor<D>& a, const SymTensor<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) {
    s += a(i, i) * b(i, i);
    for (int j = i + 1; j < D; ++j) s += 2.0 * a(i, j) * b(i, j);
  }
  return s;
}

template <int D>
double ddot(const FullTensor<D>& a, const SymTensor<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) s += a(i, j) * b(i, j);
  return s;
}

template <int D>
double ddot(const SymTensor<D>& a, const FullTensor<D>& b) {
  return ddot(b, a);
}

template <int D>
double norm_sq(const SymTensor<D>& a) {
  return ddot(a, a);
}

template <int D>
double norm_sq(const FullTensor<D>& a) {
  return ddot(a, a);
}

template <int D>
double frobenius_norm(const SymTensor<D>& a) {
  return std::sqrt(norm_sq(a));
}

template <int D>
double frobenius_norm(const FullTensor<D>& a) {
  return std::sqrt(norm_sq(a));
}

namespace detail {

// M = W T + a D T with D = sym(grad_v), W = skew(grad_v).
template <int D>
FullTensor<D> wt_plus_a_dt(const FullTensor<D>& grad_v, const SymTensor<D>& t, double a) {
  FullTensor<D> m;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      double s = 0.0;
      for (int k = 0; k < D; ++k) {
        const double w_ik = 0.5 * (grad_v(i, k) - grad_v(k, i));
        const double d_ik = 0.5 * (grad_v(i, k) + grad_v(k, i));
        s += (w_ik + a * d_ik) * t(k, j);
      }
      m(i, j) = s;
    }
  }
  return m;
}

}  // namespace detail

// Objective-derivative coupling in the stress equation:
//   B(v,T) = W T - T W + a (D T + T D),  a in [-1, 1] selects the frame
// (lower convected -1, corotational 0, upper convected +1).  Since
// (W T)^T = -T W and (D T)^T = T D, B = M + M^T with M = W T + a D T, which
// is what gets assembled: the result is symmetric by construction.
// Total function: `a` is validated at configuration time only.
template <int D>
SymTensor<D> coupling_b(const FullTensor<D>& grad_v, const SymTensor<D>& t, double a) {
  const FullTensor<D> m = detail::wt_plus_a_dt(grad_v, t, a);
  SymTensor<D> b;
  for (int i = 0; i < D; ++i)
    for (int j = i; j < D; ++j) b.at(i, j) = m(i, j) + m(j, i);
  return b;
}

// Dual coupling appearing in the momentum weak form:
//   A(T,psi) = -T psi + (T psi)^T + a (T psi + (T psi)^T)
//            = (a - 1) P + (a + 1) P^T,  P = T psi.
// Generally non-symmetric.  Satisfies grad_v : A(T,psi) = B(v,T) : psi
// pointwise for symmetric T, psi.
template <int D>
FullTensor<D> coupling_a(const SymTensor<D>& t, const SymTensor<D>& psi, double a) {
  FullTensor<D> p;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      double s = 0.0;
      for (int k = 0; k < D; ++k) s += t(i, k) * psi(k, j);
      p(i, j) = s;
    }
  FullTensor<D> r;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) r(i, j) = (a - 1.0) * p(i, j) + (a + 1.0) * p(j, i);
  return r;
}

using SymTensor2 = SymTensor<2>;
using SymTensor3 = SymTensor<3>;
using FullTensor2 = FullTensor<2>;
using FullTensor3 = FullTensor<3>;

}  // namespace oldreg

#pragma once

// Dense tensor-algebra primitives over an arbitrary field scalar.
//
// Index convention: a configuration (t_1, ..., t_L) with t_i in {1..N} maps
// to the flat index sum_i (t_i - 1) * N^(L - i). Site 1 is the most
// significant digit, matching |t_1> (x) ... (x) |t_L>. kron() follows the
// same big-endian order, so kron(a, b) puts a on the slow index.

#include "masep/errors.hpp"
#include "masep/rational.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace masep {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using QMat = Mat<Rat>;
using QVec = Vec<Rat>;
using Index = Eigen::Index;

/// Configuration codec for (C^N)^{(x) L}.
struct TensorSpace {
  int local_dim = 2;
  int factors = 1;

  Index dimension() const {
    Index d = 1;
    for (int i = 0; i < factors; ++i) d *= local_dim;
    return d;
  }

  /// Species labels are 1-based.
  Index index_of(std::span<const int> config) const {
    Index idx = 0;
    for (int t : config) idx = idx * local_dim + (t - 1);
    return idx;
  }

  std::vector<int> config_of(Index idx) const {
    std::vector<int> config(static_cast<std::size_t>(factors));
    for (int i = factors - 1; i >= 0; --i) {
      config[static_cast<std::size_t>(i)] = static_cast<int>(idx % local_dim) + 1;
      idx /= local_dim;
    }
    return config;
  }
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidDimension, what);
}

inline Index product(std::span<const int> dims) {
  Index p = 1;
  for (int d : dims) p *= d;
  return p;
}

/// Splits a flat index around factor `f` (0-based) into (hi, digit, lo).
struct FactorSplit {
  Index stride;  // product of dims after f
  Index width;   // dims[f]

  Index reduced(Index full) const {
    const Index hi = full / (width * stride);
    const Index lo = full % stride;
    return hi * stride + lo;
  }
  Index digit(Index full) const { return (full / stride) % width; }
  Index expand(Index reduced, Index digit) const {
    const Index hi = reduced / stride;
    const Index lo = reduced % stride;
    return (hi * width + digit) * stride + lo;
  }
};

inline FactorSplit split_at(std::span<const int> dims, int factor) {
  Index stride = 1;
  for (std::size_t i = static_cast<std::size_t>(factor) + 1; i < dims.size(); ++i) stride *= dims[i];
  return {stride, dims[static_cast<std::size_t>(factor)]};
}

}  // namespace detail

template <typename DerivedA, typename DerivedB>
Mat<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Mat<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      const Scalar aij = a(i, j);
      if (aij == Scalar(0)) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()).setZero();
      } else {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = b * aij;
      }
    }
  }
  return out;
}

/// Embeds an operator acting on k local factors into the full space, with
/// its i-th tensor factor placed on `sites[i]` (1-based, distinct, any
/// order). embed_on_sites(R, {2, 1}, space) is R_21.
template <typename Derived>
Mat<typename Derived::Scalar> embed_on_sites(const Eigen::MatrixBase<Derived>& op,
                                             std::span<const int> sites,
                                             const TensorSpace& space) {
  using Scalar = typename Derived::Scalar;
  const int k = static_cast<int>(sites.size());
  const TensorSpace local{space.local_dim, k};
  detail::require(k >= 1 && op.rows() == local.dimension() && op.cols() == local.dimension(),
                  "operator dimension is not N^k for the given sites");
  for (int i = 0; i < k; ++i) {
    detail::require(sites[i] >= 1 && sites[i] <= space.factors, "site out of range");
    for (int j = 0; j < i; ++j) detail::require(sites[i] != sites[j], "repeated site");
  }

  const Index dim = space.dimension();
  std::vector<Index> weight(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Index w = 1;
    for (int s = sites[i]; s < space.factors; ++s) w *= space.local_dim;
    weight[static_cast<std::size_t>(i)] = w;
  }
  const auto local_index = [&](Index full) {
    Index idx = 0;
    for (int i = 0; i < k; ++i) {
      idx = idx * space.local_dim + (full / weight[static_cast<std::size_t>(i)]) % space.local_dim;
    }
    return idx;
  };
  const auto with_local = [&](Index full, Index loc) {
    for (int i = k - 1; i >= 0; --i) {
      const Index w = weight[static_cast<std::size_t>(i)];
      const Index old_digit = (full / w) % space.local_dim;
      const Index new_digit = loc % space.local_dim;
      loc /= space.local_dim;
      full += (new_digit - old_digit) * w;
    }
    return full;
  };

  Mat<Scalar> out = Mat<Scalar>::Zero(dim, dim);
  for (Index col = 0; col < dim; ++col) {
    const Index j = local_index(col);
    for (Index i = 0; i < op.rows(); ++i) {
      const Scalar& v = op(i, j);
      if (v == Scalar(0)) continue;
      out(with_local(col, i), col) = v;
    }
  }
  return out;
}

/// Id (x) ... (x) op (x) ... (x) Id with op covering sites
/// first_site .. first_site + k - 1 (1-based).
template <typename Derived>
Mat<typename Derived::Scalar> embed(const Eigen::MatrixBase<Derived>& op, int first_site,
                                    const TensorSpace& space) {
  int k = 0;
  Index d = 1;
  while (d < op.rows()) {
    d *= space.local_dim;
    ++k;
  }
  detail::require(k >= 1 && d == op.rows() && op.rows() == op.cols(),
                  "operator dimension " + std::to_string(op.rows()) + " is not a power of N");
  detail::require(first_site >= 1 && first_site + k - 1 <= space.factors,
                  "operator does not fit on the lattice");
  std::vector<int> sites(static_cast<std::size_t>(k));
  std::iota(sites.begin(), sites.end(), first_site);
  return embed_on_sites(op, sites, space);
}

/// Contracts tensor factor `traced_factor` (1-based) of a square matrix on
/// the space of dimensions `dims`.
template <typename Derived>
Mat<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& m, int traced_factor,
                                            std::span<const int> dims) {
  using Scalar = typename Derived::Scalar;
  detail::require(traced_factor >= 1 && traced_factor <= static_cast<int>(dims.size()),
                  "traced factor out of range");
  detail::require(m.rows() == m.cols() && m.rows() == detail::product(dims),
                  "matrix dimension does not match factor dimensions");
  const auto split = detail::split_at(dims, traced_factor - 1);
  const Index out_dim = m.rows() / split.width;
  Mat<Scalar> out = Mat<Scalar>::Zero(out_dim, out_dim);
  for (Index r = 0; r < out_dim; ++r) {
    for (Index c = 0; c < out_dim; ++c) {
      Scalar acc(0);
      for (Index t = 0; t < split.width; ++t) acc += m(split.expand(r, t), split.expand(c, t));
      out(r, c) = acc;
    }
  }
  return out;
}

/// Transposes the indices of one tensor factor (1-based) only.
template <typename Derived>
Mat<typename Derived::Scalar> partial_transpose(const Eigen::MatrixBase<Derived>& m, int factor,
                                                std::span<const int> dims) {
  using Scalar = typename Derived::Scalar;
  detail::require(factor >= 1 && factor <= static_cast<int>(dims.size()), "factor out of range");
  detail::require(m.rows() == m.cols() && m.rows() == detail::product(dims),
                  "matrix dimension does not match factor dimensions");
  const auto split = detail::split_at(dims, factor - 1);
  Mat<Scalar> out(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r) {
    const Index rr = split.reduced(r);
    const Index rt = split.digit(r);
    for (Index c = 0; c < m.cols(); ++c) {
      const Index cr = split.reduced(c);
      const Index ct = split.digit(c);
      out(r, c) = m(split.expand(rr, ct), split.expand(cr, rt));
    }
  }
  return out;
}

/// Reduced row echelon form over an exact field. Pivots are taken as the
/// first nonzero entry in scan order, which makes the result deterministic.
/// Returns the pivot column of each pivot row.
template <typename Scalar>
std::vector<Index> row_reduce(Mat<Scalar>& a) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Index pivot = -1;
    for (Index r = row; r < a.rows(); ++r) {
      if (a(r, col) != Scalar(0)) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) a.row(pivot).swap(a.row(row));
    const Scalar inv = Scalar(1) / a(row, col);
    for (Index c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (Index r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == Scalar(0)) continue;
      const Scalar f = a(r, col);
      for (Index c = col; c < a.cols(); ++c) {
        if (a(row, c) != Scalar(0)) a(r, c) -= f * a(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Exact inverse. Throws Error{SingularMatrix}.
template <typename Derived>
Mat<typename Derived::Scalar> invert(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require(m.rows() == m.cols(), "invert requires a square matrix");
  const Index n = m.rows();
  Mat<Scalar> aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = Mat<Scalar>::Identity(n, n);
  const auto pivots = row_reduce(aug);
  if (static_cast<Index>(pivots.size()) < n || (n > 0 && pivots[static_cast<std::size_t>(n - 1)] != n - 1)) {
    throw Error(ErrorKind::SingularMatrix, "matrix of size " + std::to_string(n) + " is singular");
  }
  return aug.rightCols(n);
}

/// Exact basis of the right kernel, one column vector per free variable.
template <typename Derived>
std::vector<Vec<typename Derived::Scalar>> nullspace(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> a = m;
  const auto pivots = row_reduce(a);
  std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
  for (Index p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  std::vector<Vec<Scalar>> basis;
  for (Index free = 0; free < a.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Vec<Scalar> v = Vec<Scalar>::Zero(a.cols());
    v(free) = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v(pivots[r]) = -a(static_cast<Index>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <typename Scalar>
Index rank(Mat<Scalar> a) {
  return static_cast<Index>(row_reduce(a).size());
}

/// Permutation operator P on C^N (x) C^N.
template <typename Scalar = Rat>
Mat<Scalar> swap_operator(int n) {
  const Index d = static_cast<Index>(n) * n;
  Mat<Scalar> p = Mat<Scalar>::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(static_cast<Index>(j) * n + i, static_cast<Index>(i) * n + j) = Scalar(1);
  }
  return p;
}

/// Anti-diagonal reversal U on C^N (species t <-> N + 1 - t).
template <typename Scalar = Rat>
Mat<Scalar> reversal_operator(int n) {
  Mat<Scalar> u = Mat<Scalar>::Zero(n, n);
  for (int i = 0; i < n; ++i) u(i, n - 1 - i) = Scalar(1);
  return u;
}

/// Column sums of a generator; all zero for a Markov matrix.
template <typename Derived>
bool has_zero_column_sums(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  for (Index c = 0; c < m.cols(); ++c) {
    Scalar s(0);
    for (Index r = 0; r < m.rows(); ++r) s += m(r, c);
    if (s != Scalar(0)) return false;
  }
  return true;
}

template <typename Derived>
bool has_nonnegative_off_diagonal(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (r != c && m(r, c) < Scalar(0)) return false;
    }
  }
  return true;
}

template <typename Derived>
bool is_markov_generator(const Eigen::MatrixBase<Derived>& m) {
  return has_zero_column_sums(m) && has_nonnegative_off_diagonal(m);
}

/// Casts an exact matrix to double for the floating-point consumers.
inline Mat<double> to_double(const QMat& m) {
  Mat<double> out(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).to_double();
  }
  return out;
}

}  // namespace masep

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ioscm/dmg.hpp"
#include "ioscm/error.hpp"

namespace ioscm {

/// Gaussian law of `names`: mean and covariance in that order.
template <typename Scalar = double>
struct GaussianLaw {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  std::vector<NodeId> names;
  Vector mean;
  Matrix cov;

  Eigen::Index index(const NodeId& v) const {
    auto it = std::find(names.begin(), names.end(), v);
    if (it == names.end()) throw Error(ErrorCode::UnknownNode, "variable " + v + " is not part of the law", v);
    return static_cast<Eigen::Index>(it - names.begin());
  }
};

/// Affine Gaussian kernel: target | given ~ N(intercept + coef * given, cov).
template <typename Scalar = double>
struct GaussianKernel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  std::vector<NodeId> target;
  std::vector<NodeId> given;
  Vector intercept;
  Matrix coef;
  Matrix cov;

  Eigen::Index target_index(const NodeId& v) const { return find_in(target, v); }
  Eigen::Index given_index(const NodeId& v) const { return find_in(given, v); }
  bool has_given(const NodeId& v) const { return std::find(given.begin(), given.end(), v) != given.end(); }

 private:
  static Eigen::Index find_in(const std::vector<NodeId>& list, const NodeId& v) {
    auto it = std::find(list.begin(), list.end(), v);
    if (it == list.end()) throw Error(ErrorCode::UnknownNode, "variable " + v + " is not part of the kernel", v);
    return static_cast<Eigen::Index>(it - list.begin());
  }
};

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> select(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m, const std::vector<Eigen::Index>& rows,
    const std::vector<Eigen::Index>& cols) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> select(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v,
                                                const std::vector<Eigen::Index>& rows) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out(i) = v(rows[i]);
  return out;
}

// Solves cc * X = rhs, raising SingularConditioning when cc is singular.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> solve_conditioning(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& cc,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& rhs) {
  if (cc.rows() == 0) return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(0, rhs.cols());
  Eigen::FullPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(cc);
  lu.setThreshold(Scalar(1e-12));
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularConditioning, "conditioning covariance block is singular");
  return lu.solve(rhs);
}

}  // namespace detail

// Kernel of `target` given `cond` and the kernel's own given variables.
// Every variable of target and cond must be a target of k.
template <typename Scalar>
GaussianKernel<Scalar> conditional(const GaussianKernel<Scalar>& k, const std::vector<NodeId>& target,
                                   const std::vector<NodeId>& cond) {
  using Matrix = typename GaussianKernel<Scalar>::Matrix;
  std::vector<Eigen::Index> ti, ci;
  for (const auto& v : target) ti.push_back(k.target_index(v));
  for (const auto& v : cond) ci.push_back(k.target_index(v));
  std::vector<Eigen::Index> all_cols(k.given.size());
  for (std::size_t i = 0; i < all_cols.size(); ++i) all_cols[i] = static_cast<Eigen::Index>(i);

  const Matrix s_tc = detail::select(k.cov, ti, ci);
  const Matrix s_cc = detail::select(k.cov, ci, ci);
  const Matrix gain = detail::solve_conditioning<Scalar>(s_cc, s_tc.transpose()).transpose();

  GaussianKernel<Scalar> out;
  out.target = target;
  out.given = cond;
  out.given.insert(out.given.end(), k.given.begin(), k.given.end());
  out.intercept = detail::select(k.intercept, ti) - gain * detail::select(k.intercept, ci);
  out.coef.resize(target.size(), out.given.size());
  out.coef.leftCols(cond.size()) = gain;
  out.coef.rightCols(k.given.size()) = detail::select(k.coef, ti, all_cols) - gain * detail::select(k.coef, ci, all_cols);
  out.cov = detail::select(k.cov, ti, ti) - gain * s_tc.transpose();
  return out;
}

template <typename Scalar>
GaussianKernel<Scalar> marginal(const GaussianKernel<Scalar>& k, const std::vector<NodeId>& keep) {
  return conditional(k, keep, {});
}

// Integrates the targets of `inner` out of `outer`: ∫ outer(t | z, a) inner(z | b) dz,
// a kernel of outer's targets given outer's remaining variables and inner's given.
template <typename Scalar>
GaussianKernel<Scalar> compose(const GaussianKernel<Scalar>& outer, const GaussianKernel<Scalar>& inner) {
  using Matrix = typename GaussianKernel<Scalar>::Matrix;
  GaussianKernel<Scalar> out;
  out.target = outer.target;
  for (const auto& v : outer.given)
    if (std::find(inner.target.begin(), inner.target.end(), v) == inner.target.end()) out.given.push_back(v);
  for (const auto& v : inner.given)
    if (std::find(out.given.begin(), out.given.end(), v) == out.given.end()) out.given.push_back(v);

  const auto nt = static_cast<Eigen::Index>(outer.target.size());
  Matrix a_z = Matrix::Zero(nt, static_cast<Eigen::Index>(inner.target.size()));
  for (std::size_t i = 0; i < inner.target.size(); ++i)
    if (outer.has_given(inner.target[i])) a_z.col(i) = outer.coef.col(outer.given_index(inner.target[i]));

  out.intercept = outer.intercept + a_z * inner.intercept;
  out.cov = outer.cov + a_z * inner.cov * a_z.transpose();
  out.coef = Matrix::Zero(nt, static_cast<Eigen::Index>(out.given.size()));
  for (std::size_t j = 0; j < out.given.size(); ++j) {
    const auto& v = out.given[j];
    if (outer.has_given(v)) out.coef.col(j) += outer.coef.col(outer.given_index(v));
    if (inner.has_given(v)) out.coef.col(j) += a_z * inner.coef.col(inner.given_index(v));
  }
  return out;
}

// Largest absolute difference between two kernels over the same targets;
// given variables missing from one side count as zero coefficients.
template <typename Scalar>
Scalar kernel_distance(const GaussianKernel<Scalar>& a, const GaussianKernel<Scalar>& b) {
  if (a.target.size() != b.target.size())
    throw Error(ErrorCode::MalformedQuery, "kernels are over different targets");
  std::vector<Eigen::Index> order;
  for (const auto& v : a.target) order.push_back(b.target_index(v));
  std::vector<Eigen::Index> all(a.target.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);

  using std::abs;
  Scalar d = (a.intercept - detail::select(b.intercept, order)).cwiseAbs().maxCoeff();
  d = std::max(d, (a.cov - detail::select(b.cov, order, order)).cwiseAbs().maxCoeff());
  std::vector<NodeId> vars = a.given;
  for (const auto& v : b.given)
    if (!a.has_given(v)) vars.push_back(v);
  for (const auto& v : vars) {
    for (std::size_t i = 0; i < a.target.size(); ++i) {
      const Scalar ca = a.has_given(v) ? a.coef(i, a.given_index(v)) : Scalar(0);
      const Scalar cb = b.has_given(v) ? b.coef(order[i], b.given_index(v)) : Scalar(0);
      d = std::max(d, Scalar(abs(ca - cb)));
    }
  }
  return d;
}

// Partial correlation of a and b given c, from the Schur complement of the
// covariance. A variable that is deterministic given c has correlation 0.
template <typename Scalar>
Scalar partial_correlation(const GaussianLaw<Scalar>& law, const NodeId& a, const NodeId& b,
                           const std::vector<NodeId>& c) {
  using Matrix = typename GaussianLaw<Scalar>::Matrix;
  std::vector<Eigen::Index> ab{law.index(a), law.index(b)}, ci;
  for (const auto& v : c) ci.push_back(law.index(v));
  const Matrix s_ab = detail::select(law.cov, ab, ab);
  const Matrix s_ac = detail::select(law.cov, ab, ci);
  const Matrix s_cc = detail::select(law.cov, ci, ci);
  const Matrix schur = s_ab - s_ac * detail::solve_conditioning<Scalar>(s_cc, s_ac.transpose());
  using std::sqrt;
  const Scalar eps(1e-14);
  if (schur(0, 0) <= eps || schur(1, 1) <= eps) return Scalar(0);
  return schur(0, 1) / sqrt(schur(0, 0) * schur(1, 1));
}

// Every pair (va, vb) of a × b has vanishing partial correlation given c.
template <typename Scalar>
bool ci_gaussian(const GaussianLaw<Scalar>& law, const NodeSet& a, const NodeSet& b, const NodeSet& c,
                 Scalar tol = Scalar(1e-9)) {
  const std::vector<NodeId> cond(c.begin(), c.end());
  using std::abs;
  for (const auto& x : a)
    for (const auto& y : b)
      if (abs(partial_correlation(law, x, y, cond)) >= tol) return false;
  return true;
}

}  // namespace ioscm

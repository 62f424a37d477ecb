#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ioscm/dmg.hpp"
#include "ioscm/error.hpp"
#include "ioscm/gaussian_kernel.hpp"

namespace ioscm {

/// Linear-Gaussian ioSCM: X_V = B X_V + Γ x_J + ε with ε ~ N(μ, Ω).
///
/// Edges are read off the sparsity: v→w iff B(w,v) ≠ 0, j→v iff Γ(v,j) ≠ 0,
/// v↔w iff Ω(v,w) ≠ 0. Feedback is allowed as long as I − B is invertible.
template <typename Scalar = double>
class LinearScm {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LinearScm(std::vector<NodeId> outputs, std::vector<NodeId> inputs, Matrix b, Matrix gamma, Matrix omega, Vector mu)
      : outputs_(std::move(outputs)),
        inputs_(std::move(inputs)),
        b_(std::move(b)),
        gamma_(std::move(gamma)),
        omega_(std::move(omega)),
        mu_(std::move(mu)) {
    const auto n = static_cast<Eigen::Index>(outputs_.size());
    const auto k = static_cast<Eigen::Index>(inputs_.size());
    if (b_.rows() != n || b_.cols() != n) throw Error(ErrorCode::InvalidModel, "B must be |V|x|V|", "B");
    if (gamma_.rows() != n || gamma_.cols() != k) throw Error(ErrorCode::InvalidModel, "Gamma must be |V|x|J|", "Gamma");
    if (omega_.rows() != n || omega_.cols() != n) throw Error(ErrorCode::InvalidModel, "Omega must be |V|x|V|", "Omega");
    if (mu_.size() != n) throw Error(ErrorCode::InvalidModel, "mu must have |V| entries", "mu");
    NodeSet seen;
    for (const auto& v : outputs_)
      if (!seen.insert(v).second) throw Error(ErrorCode::InvalidModel, "duplicate node " + v, v);
    for (const auto& v : inputs_)
      if (!seen.insert(v).second) throw Error(ErrorCode::InvalidModel, "duplicate node " + v, v);
    for (Eigen::Index i = 0; i < n; ++i)
      if (b_(i, i) != Scalar(0))
        throw Error(ErrorCode::InvalidModel, "B has a nonzero diagonal entry at " + outputs_[i], outputs_[i]);
    using std::abs;
    const Scalar scale = std::max(Scalar(1), omega_.cwiseAbs().maxCoeff());
    if (n > 0 && (omega_ - omega_.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
      throw Error(ErrorCode::InvalidModel, "Omega must be symmetric", "Omega");
    if (n > 0) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(omega_);
      if (eig.eigenvalues().minCoeff() < Scalar(-1e-10) * scale)
        throw Error(ErrorCode::InvalidModel, "Omega must be positive semidefinite", "Omega");
    }
    Eigen::FullPivLU<Matrix> lu(Matrix::Identity(n, n) - b_);
    lu.setThreshold(Scalar(1e-10));
    if (n > 0 && !lu.isInvertible()) throw Error(ErrorCode::SingularSystem, "I - B is singular", "B");
    solve_ = n > 0 ? Matrix(lu.inverse()) : Matrix(0, 0);
  }

  const std::vector<NodeId>& outputs() const { return outputs_; }
  const std::vector<NodeId>& inputs() const { return inputs_; }
  const Matrix& b() const { return b_; }
  const Matrix& gamma() const { return gamma_; }
  const Matrix& omega() const { return omega_; }
  const Vector& mu() const { return mu_; }
  // (I − B)^{-1}
  const Matrix& solver() const { return solve_; }

  Eigen::Index output_index(const NodeId& v) const { return find_in(outputs_, v); }
  Eigen::Index input_index(const NodeId& v) const { return find_in(inputs_, v); }

  Dmg graph() const {
    DmgBuilder builder;
    for (const auto& v : outputs_) builder.output(v);
    for (const auto& j : inputs_) builder.input(j);
    const auto n = static_cast<Eigen::Index>(outputs_.size());
    for (Eigen::Index w = 0; w < n; ++w) {
      for (Eigen::Index v = 0; v < n; ++v) {
        if (v != w && b_(w, v) != Scalar(0)) builder.edge(outputs_[v], outputs_[w]);
        if (v < w && omega_(v, w) != Scalar(0)) builder.bi(outputs_[v], outputs_[w]);
      }
      for (Eigen::Index j = 0; j < gamma_.cols(); ++j)
        if (gamma_(w, j) != Scalar(0)) builder.edge(inputs_[j], outputs_[w]);
    }
    return builder.build();
  }

  // Raises InvalidModel unless the sparsity pattern matches `declared` exactly.
  void check_graph(const Dmg& declared) const {
    if (!(graph() == declared))
      throw Error(ErrorCode::InvalidModel, "coefficient sparsity does not match the declared graph", "graph");
  }

 private:
  static Eigen::Index find_in(const std::vector<NodeId>& list, const NodeId& v) {
    auto it = std::find(list.begin(), list.end(), v);
    if (it == list.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + v + "'", v);
    return static_cast<Eigen::Index>(it - list.begin());
  }

  std::vector<NodeId> outputs_;
  std::vector<NodeId> inputs_;
  Matrix b_;
  Matrix gamma_;
  Matrix omega_;
  Vector mu_;
  Matrix solve_;
};

template <typename Scalar>
GaussianLaw<Scalar> observational_law(const LinearScm<Scalar>& m,
                                      const typename LinearScm<Scalar>::Vector& xj) {
  if (xj.size() != static_cast<Eigen::Index>(m.inputs().size()))
    throw Error(ErrorCode::MalformedQuery, "input vector must have |J| entries", "xj");
  GaussianLaw<Scalar> law;
  law.names = m.outputs();
  law.mean = m.solver() * (m.gamma() * xj + m.mu());
  law.cov = m.solver() * m.omega() * m.solver().transpose();
  return law;
}

// Law of the outputs as an affine kernel in the inputs.
template <typename Scalar>
GaussianKernel<Scalar> law_kernel(const LinearScm<Scalar>& m) {
  GaussianKernel<Scalar> k;
  k.target = m.outputs();
  k.given = m.inputs();
  k.intercept = m.solver() * m.mu();
  k.coef = m.solver() * m.gamma();
  k.cov = m.solver() * m.omega() * m.solver().transpose();
  return k;
}

// Joint law of outputs and inputs (in that order) when the inputs are drawn
// from N(mean_j, cov_j) independently of the noise.
template <typename Scalar>
GaussianLaw<Scalar> joint_law(const LinearScm<Scalar>& m, const typename LinearScm<Scalar>::Vector& mean_j,
                              const typename LinearScm<Scalar>::Matrix& cov_j) {
  using Matrix = typename LinearScm<Scalar>::Matrix;
  const auto n = static_cast<Eigen::Index>(m.outputs().size());
  const auto k = static_cast<Eigen::Index>(m.inputs().size());
  if (mean_j.size() != k || cov_j.rows() != k || cov_j.cols() != k)
    throw Error(ErrorCode::MalformedQuery, "input law must be over |J| variables", "inputs");
  const Matrix tg = m.solver() * m.gamma();
  GaussianLaw<Scalar> law;
  law.names = m.outputs();
  law.names.insert(law.names.end(), m.inputs().begin(), m.inputs().end());
  law.mean.resize(n + k);
  law.mean.head(n) = m.solver() * (m.gamma() * mean_j + m.mu());
  law.mean.tail(k) = mean_j;
  law.cov.resize(n + k, n + k);
  law.cov.topLeftCorner(n, n) = tg * cov_j * tg.transpose() + m.solver() * m.omega() * m.solver().transpose();
  law.cov.topRightCorner(n, k) = tg * cov_j;
  law.cov.bottomLeftCorner(k, n) = cov_j * tg.transpose();
  law.cov.bottomRightCorner(k, k) = cov_j;
  return law;
}

// Perfect intervention keeping w as outputs: rows w of B and Γ are zeroed and
// the noise of w becomes a point mass at the given value.
template <typename Scalar>
LinearScm<Scalar> intervene_scm(const LinearScm<Scalar>& m, const std::map<NodeId, Scalar>& values) {
  auto b = m.b();
  auto gamma = m.gamma();
  auto omega = m.omega();
  auto mu = m.mu();
  for (const auto& [v, x] : values) {
    const auto i = m.output_index(v);
    b.row(i).setZero();
    gamma.row(i).setZero();
    omega.row(i).setZero();
    omega.col(i).setZero();
    mu(i) = x;
  }
  return LinearScm<Scalar>(m.outputs(), m.inputs(), b, gamma, omega, mu);
}

// Perfect intervention in the i/o form: w leave the outputs and are appended
// to the inputs.
template <typename Scalar>
LinearScm<Scalar> intervene_as_inputs(const LinearScm<Scalar>& m, const NodeSet& w) {
  using Matrix = typename LinearScm<Scalar>::Matrix;
  using Vector = typename LinearScm<Scalar>::Vector;
  std::vector<Eigen::Index> keep, moved;
  std::vector<NodeId> outputs, inputs = m.inputs();
  for (const auto& v : w) m.output_index(v);
  for (std::size_t i = 0; i < m.outputs().size(); ++i) {
    if (w.count(m.outputs()[i])) {
      moved.push_back(static_cast<Eigen::Index>(i));
      inputs.push_back(m.outputs()[i]);
    } else {
      keep.push_back(static_cast<Eigen::Index>(i));
      outputs.push_back(m.outputs()[i]);
    }
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  const auto k = static_cast<Eigen::Index>(m.inputs().size());
  Matrix gamma(n, k + static_cast<Eigen::Index>(moved.size()));
  Matrix b(n, n), omega(n, n);
  Vector mu(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    gamma.row(r).head(k) = m.gamma().row(keep[r]);
    for (std::size_t c = 0; c < moved.size(); ++c) gamma(r, k + static_cast<Eigen::Index>(c)) = m.b()(keep[r], moved[c]);
    for (Eigen::Index c = 0; c < n; ++c) {
      b(r, c) = m.b()(keep[r], keep[c]);
      omega(r, c) = m.omega()(keep[r], keep[c]);
    }
    mu(r) = m.mu()(keep[r]);
  }
  return LinearScm<Scalar>(outputs, inputs, b, gamma, omega, mu);
}

template <typename Scalar>
bool ci_gaussian(const LinearScm<Scalar>& m, const typename LinearScm<Scalar>::Vector& xj, const NodeSet& a,
                 const NodeSet& b, const NodeSet& c) {
  return ci_gaussian(observational_law(m, xj), a, b, c);
}

// n i.i.d. draws of the outputs, one row per draw.
template <typename Scalar>
typename LinearScm<Scalar>::Matrix sample(const LinearScm<Scalar>& m, const typename LinearScm<Scalar>::Vector& xj,
                                          std::size_t n, std::uint64_t seed) {
  using Matrix = typename LinearScm<Scalar>::Matrix;
  using Vector = typename LinearScm<Scalar>::Vector;
  if (n == 0) throw Error(ErrorCode::MalformedQuery, "sample size must be positive", "n");
  if (xj.size() != static_cast<Eigen::Index>(m.inputs().size()))
    throw Error(ErrorCode::MalformedQuery, "input vector must have |J| entries", "xj");
  const auto d = static_cast<Eigen::Index>(m.outputs().size());
  Matrix root = Matrix::Zero(d, d);
  if (d > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m.omega());
    root = eig.eigenvectors() * eig.eigenvalues().cwiseMax(Scalar(0)).cwiseSqrt().asDiagonal();
  }
  const Vector shift = m.gamma() * xj + m.mu();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(static_cast<Eigen::Index>(n), d);
  Vector z(d);
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r) {
    for (Eigen::Index i = 0; i < d; ++i) z(i) = Scalar(normal(rng));
    out.row(r) = (m.solver() * (shift + root * z)).transpose();
  }
  return out;
}

}  // namespace ioscm

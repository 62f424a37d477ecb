#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "ioscm/error.hpp"
#include "ioscm/gaussian_kernel.hpp"
#include "ioscm/linear_scm.hpp"
#include "ioscm/model_json.hpp"

using namespace ioscm;
using Scm = LinearScm<double>;
using Matrix = Scm::Matrix;
using Vector = Scm::Vector;

namespace {

Scm two_cycle(double coupling) {
  Matrix b(2, 2);
  b << 0, coupling, coupling, 0;
  return Scm({"y", "z"}, {}, b, Matrix(2, 0), Matrix::Identity(2, 2), Vector::Zero(2));
}

// a → b → c with unit coefficients, or a → b ← c.
Scm three_node(bool collider) {
  Matrix b = Matrix::Zero(3, 3);
  b(1, 0) = 1.0;
  if (collider)
    b(1, 2) = 1.0;
  else
    b(2, 1) = 1.0;
  return Scm({"a", "b", "c"}, {}, b, Matrix(3, 0), Matrix::Identity(3, 3), Vector::Zero(3));
}

}  // namespace

TEST(Law, NoEdges) {
  Matrix gamma(2, 1);
  gamma << 2.0, -1.0;
  Matrix omega(2, 2);
  omega << 1.0, 0.3, 0.3, 2.0;
  Vector mu(2);
  mu << 0.5, 1.5;
  const Scm m({"a", "b"}, {"j"}, Matrix::Zero(2, 2), gamma, omega, mu);
  Vector xj(1);
  xj << 3.0;
  const auto law = observational_law(m, xj);
  EXPECT_NEAR(law.mean(0), 6.5, 1e-15);
  EXPECT_NEAR(law.mean(1), -1.5, 1e-15);
  EXPECT_TRUE(law.cov.isApprox(omega));
  EXPECT_TRUE(m.graph().has_bidirected("a", "b"));
  EXPECT_TRUE(m.graph().has_directed("j", "a"));
}

TEST(Law, TwoCycleCovariance) {
  const Scm m = two_cycle(0.5);
  Matrix ib(2, 2);
  ib << 1.0, -0.5, -0.5, 1.0;
  const Matrix inv = ib.inverse();
  EXPECT_TRUE(observational_law(m, Vector(0)).cov.isApprox(inv * inv.transpose(), 1e-14));
  EXPECT_TRUE(m.graph().has_directed("y", "z"));
  EXPECT_TRUE(m.graph().has_directed("z", "y"));
}

TEST(Law, SingularSystem) {
  try {
    two_cycle(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
  }
}

TEST(Law, RejectsBadOmega) {
  Matrix omega(2, 2);
  omega << 1.0, 2.0, 2.0, 1.0;
  try {
    Scm({"a", "b"}, {}, Matrix::Zero(2, 2), Matrix(2, 0), omega, Vector::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidModel);
  }
}

TEST(Intervene, TwoCycleDoY) {
  const auto law = observational_law(intervene_scm(two_cycle(0.5), {{"y", 1.0}}), Vector(0));
  EXPECT_NEAR(law.mean(0), 1.0, 1e-15);
  EXPECT_NEAR(law.mean(1), 0.5, 1e-15);
  EXPECT_NEAR(law.cov(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(law.cov(1, 1), 1.0, 1e-15);
}

TEST(Intervene, AllOutputsIsDeterministic) {
  const auto law = observational_law(intervene_scm(three_node(false), {{"a", 1.0}, {"b", 2.0}, {"c", 3.0}}),
                                     Vector(0));
  EXPECT_NEAR(law.cov.norm(), 0.0, 1e-15);
  EXPECT_NEAR(law.mean(2), 3.0, 1e-15);
}

TEST(Intervene, AsInputsMatchesPointMass) {
  const Scm m = two_cycle(0.5);
  const Scm k = intervene_as_inputs(m, {"y"});
  EXPECT_EQ(k.inputs(), std::vector<NodeId>{"y"});
  Vector x(1);
  x << 1.0;
  EXPECT_NEAR(observational_law(k, x).mean(0), 0.5, 1e-15);
}

TEST(Ci, IndependentNoises) {
  const Scm m({"a", "b", "c"}, {}, Matrix::Zero(3, 3), Matrix(3, 0), Matrix::Identity(3, 3), Vector::Zero(3));
  EXPECT_TRUE(ci_gaussian(m, Vector(0), {"a"}, {"b", "c"}, {}));
}

TEST(Ci, ChainAndCollider) {
  const auto chain = observational_law(three_node(false), Vector(0));
  EXPECT_NEAR(partial_correlation(chain, "a", "c", {"b"}), 0.0, 1e-12);
  EXPECT_GT(std::abs(partial_correlation(chain, "a", "c", {})), 0.1);
  const auto collider = observational_law(three_node(true), Vector(0));
  EXPECT_NEAR(partial_correlation(collider, "a", "c", {}), 0.0, 1e-12);
  EXPECT_NEAR(partial_correlation(collider, "a", "c", {"b"}), -0.5, 1e-12);
}

TEST(Ci, SingularConditioning) {
  Matrix omega = Matrix::Ones(2, 2);
  const Scm m({"a", "b"}, {}, Matrix::Zero(2, 2), Matrix(2, 0), omega, Vector::Zero(2));
  GaussianLaw<double> law = observational_law(m, Vector(0));
  try {
    partial_correlation(law, "a", "a", {"a", "b"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularConditioning);
  }
}

TEST(Sample, CovarianceConverges) {
  gen::Rng rng(21);
  const Scm m = gen::random_linear_scm(rng, fixtures::chain_into_cycle());
  const Matrix x = sample(m, Vector(0), 100000, 5);
  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix cov = centered.transpose() * centered / double(x.rows() - 1);
  const Matrix truth = observational_law(m, Vector(0)).cov;
  for (Eigen::Index i = 0; i < truth.rows(); ++i)
    for (Eigen::Index j = 0; j < truth.cols(); ++j)
      EXPECT_NEAR(cov(i, j), truth(i, j), 0.05 * std::sqrt(truth(i, i) * truth(j, j))) << i << "," << j;
  EXPECT_EQ(sample(m, Vector(0), 20, 3), sample(m, Vector(0), 20, 3));
}

TEST(Kernel, ConditionalOfBivariate) {
  GaussianKernel<double> k;
  k.target = {"a", "b"};
  k.intercept = Vector::Zero(2);
  k.coef = Matrix(2, 0);
  k.cov = Matrix(2, 2);
  k.cov << 1.0, 0.5, 0.5, 2.0;
  const auto c = conditional(k, {"b"}, {"a"});
  EXPECT_NEAR(c.coef(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(c.cov(0, 0), 1.75, 1e-15);
}

TEST(Kernel, ComposeRecoversMarginal) {
  gen::Rng rng(22);
  const Scm m = gen::random_linear_scm(rng, fixtures::front_door());
  const auto law = law_kernel(m);
  const auto outer = conditional(law, {"Y"}, {"X", "Z"});
  const auto inner = conditional(law, {"Z"}, {"X"});
  const auto direct = conditional(law, {"Y"}, {"X"});
  EXPECT_LT(kernel_distance(compose(outer, inner), direct), 1e-12);
}

TEST(Kernel, LongDoubleInstantiation) {
  using L = LinearScm<long double>;
  L::Matrix b(2, 2);
  b << 0, 0.5L, 0.5L, 0;
  const L m({"y", "z"}, {}, b, L::Matrix(2, 0), L::Matrix::Identity(2, 2), L::Vector::Zero(2));
  const auto law = observational_law(m, L::Vector(0));
  EXPECT_NEAR(static_cast<double>(law.cov(0, 1)), 1.0 / 0.5625, 1e-15);
  EXPECT_NEAR(static_cast<double>(law.cov(0, 0)), 1.25 / 0.5625, 1e-15);
  EXPECT_FALSE(ci_gaussian(law, NodeSet{"y"}, NodeSet{"z"}, NodeSet{}, 1e-9L));
}

TEST(ModelJson, LinearRoundTrip) {
  gen::Rng rng(23);
  const Scm m = gen::random_linear_scm(rng, fixtures::bow());
  const auto j = model_to_json(m);
  const Model back = model_from_json(j);
  ASSERT_TRUE(back.is_linear());
  EXPECT_TRUE(back.linear->b().isApprox(m.b()));
  EXPECT_EQ(model_to_json(*back.linear), j);
}

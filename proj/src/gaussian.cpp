// Copyright 2026 The advbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "advbound/gaussian.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "advbound/error.hpp"
#include "advbound/random.hpp"

namespace advbound {
namespace {

constexpr std::size_t kQuadratureNodes = 200;
constexpr std::size_t kCheckNodes = 400;
constexpr double kQuadratureWarnRel = 1e-8;
constexpr double kShiftRelTol = 1e-10;
constexpr int kBisectionCap = 200;

QuadratureRule golub_welsch(std::size_t n) {
  // Jacobi matrix of the Hermite recurrence: zero diagonal, sqrt(k/2) off it.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail(ErrorKind::kNumeric, "Gauss-Hermite eigensolve failed");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double root_pi = std::sqrt(std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    rule.nodes[i] = solver.eigenvalues()[col];
    const double v0 = solver.eigenvectors()(0, col);
    rule.weights[i] = root_pi * v0 * v0;
  }
  return rule;
}

double mixture_loss(double mean, double variance, double intercept, double prior_plus,
                    std::size_t nodes) {
  const double plus = normal_expectation([&](double t) { return softplus(-(t + intercept)); },
                                         mean, variance, nodes);
  const double minus = normal_expectation([&](double t) { return softplus(-(t - intercept)); },
                                          mean, variance, nodes);
  return prior_plus * plus + (1.0 - prior_plus) * minus;
}

Eigen::VectorXd l2_shift(const GaussianProblem& prob) {
  const Eigen::VectorXd& mu = prob.mu();
  const double eps = prob.spec().eps;
  if (mu.norm() <= eps) return mu;
  if (eps == 0.0) return Eigen::VectorXd::Zero(mu.size());
  // z(lambda) = (Sigma^{-1} + lambda I)^{-1} Sigma^{-1} mu = U diag(1/(1 + lambda s_i)) U' mu.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(prob.sigma());
  const Eigen::VectorXd spectrum = eig.eigenvalues();
  const Eigen::VectorXd rotated = eig.eigenvectors().transpose() * mu;
  auto shift = [&](double lambda) {
    Eigen::VectorXd scaled(rotated.size());
    for (Eigen::Index i = 0; i < rotated.size(); ++i) {
      scaled[i] = rotated[i] / (1.0 + lambda * spectrum[i]);
    }
    return Eigen::VectorXd(eig.eigenvectors() * scaled);
  };
  double hi = 1.0;
  for (int i = 0; shift(hi).norm() >= eps; ++i) {
    if (i > 2000) fail(ErrorKind::kNumeric, "optimal_shift: cannot bracket the multiplier");
    hi *= 2.0;
  }
  double lo = 0.0;
  for (int i = 0; i < kBisectionCap; ++i) {
    const double norm_hi = shift(hi).norm();
    if (std::abs(norm_hi - eps) <= kShiftRelTol * eps) break;
    const double mid = 0.5 * (lo + hi);
    (shift(mid).norm() > eps ? lo : hi) = mid;
  }
  return shift(hi);  // feasible side of the bracket
}

}  // namespace

GaussianProblem::GaussianProblem(Eigen::VectorXd mu, Eigen::MatrixXd sigma, double prior_plus,
                                 NeighborhoodSpec spec)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), prior_plus_(prior_plus),
      spec_(std::move(spec)) {
  if (mu_.size() == 0) fail(ErrorKind::kDimension, "mean vector is empty");
  if (sigma_.rows() != mu_.size() || sigma_.cols() != mu_.size()) {
    fail(ErrorKind::kDimension, "covariance shape does not match the mean");
  }
  if (!(prior_plus_ > 0.0 && prior_plus_ < 1.0)) {
    fail(ErrorKind::kUsage, "prior must lie strictly between 0 and 1");
  }
  spec_.validate();
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail(ErrorKind::kNumeric, "covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success) fail(ErrorKind::kNumeric, "covariance is not positive definite");
  chol_ = llt.matrixL();
  diagonal_ = sigma_.isDiagonal(0.0);
}

GaussianProblem GaussianProblem::diagonal(Eigen::VectorXd mu, const Eigen::VectorXd& variances,
                                          double prior_plus, NeighborhoodSpec spec) {
  Eigen::MatrixXd sigma = variances.asDiagonal();
  return GaussianProblem(std::move(mu), std::move(sigma), prior_plus, std::move(spec));
}

GaussianProblem GaussianProblem::with_eps(double eps) const {
  GaussianProblem copy = *this;
  copy.spec_.eps = eps;
  copy.spec_.validate();
  return copy;
}

const QuadratureRule& gauss_hermite(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
  if (n < 2) fail(ErrorKind::kUsage, "Gauss-Hermite rule needs at least 2 nodes");
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(golub_welsch(n));
  return *slot;
}

Eigen::VectorXd optimal_shift(const GaussianProblem& prob) {
  switch (prob.spec().norm) {
    case Norm::kL2:
      return l2_shift(prob);
    case Norm::kLinf: {
      if (!prob.is_diagonal()) {
        fail(ErrorKind::kUnsupported, "linf shift needs a diagonal covariance");
      }
      const double eps = prob.spec().eps;
      return prob.mu().cwiseMax(-eps).cwiseMin(eps);
    }
    case Norm::kCustom:
      break;
  }
  fail(ErrorKind::kUnsupported, "optimal shift supports only l2 and linf neighborhoods");
}

GaussianSolution closed_form_loss(const GaussianProblem& prob) {
  GaussianSolution sol;
  sol.z_star = optimal_shift(prob);
  const Eigen::VectorXd gap = prob.mu() - sol.z_star;
  const Eigen::VectorXd whitened = prob.sigma().llt().solve(gap);
  sol.w_star = 2.0 * whitened;
  sol.intercept = std::log(prob.prior_plus() / prob.prior_minus());
  // Under either (shifted) class, y * w'x ~ Normal(2m, 4m), m = gap' Sigma^{-1} gap.
  const double m = std::max(gap.dot(whitened), 0.0);
  const double mean = 2.0 * m;
  const double variance = 4.0 * m;
  sol.loss_nats = mixture_loss(mean, variance, sol.intercept, prob.prior_plus(), kQuadratureNodes);
  const double check = mixture_loss(mean, variance, sol.intercept, prob.prior_plus(), kCheckNodes);
  sol.quadrature_rel_diff =
      std::abs(sol.loss_nats - check) / std::max(std::abs(check), std::numeric_limits<double>::min());
  sol.precision_warning = sol.quadrature_rel_diff > kQuadratureWarnRel;
  return sol;
}

namespace {

void append_sample(const GaussianProblem& prob, Label label, std::mt19937_64& rng,
                   std::normal_distribution<double>& normal, std::vector<double>& points) {
  Eigen::VectorXd xi(prob.mu().size());
  for (Eigen::Index k = 0; k < xi.size(); ++k) xi[k] = normal(rng);
  const Eigen::VectorXd x = label_value(label) * prob.mu() + prob.cholesky_factor() * xi;
  points.insert(points.end(), x.data(), x.data() + x.size());
}

}  // namespace

LabeledDataset sample_mixture(const GaussianProblem& prob, std::size_t n, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::kUsage, "need at least two samples");
  auto rng = make_rng(seed, 0);
  std::bernoulli_distribution coin(prob.prior_plus());
  std::normal_distribution<double> normal;
  std::vector<double> points;
  std::vector<Label> labels;
  points.reserve(n * prob.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const Label label = coin(rng) ? Label::kPlus : Label::kMinus;
    append_sample(prob, label, rng, normal, points);
    labels.push_back(label);
  }
  std::vector<std::uint32_t> counts(n, 1);
  return LabeledDataset::from_rows(prob.dim(), std::move(points), std::move(labels),
                                   std::move(counts));
}

LabeledDataset sample_mixture_per_class(const GaussianProblem& prob, std::size_t n_per_class,
                                        std::uint64_t seed) {
  if (n_per_class == 0) fail(ErrorKind::kUsage, "need at least one sample per class");
  std::vector<double> points;
  std::vector<Label> labels;
  points.reserve(2 * n_per_class * prob.dim());
  const Label classes[2] = {Label::kPlus, Label::kMinus};
  for (std::uint64_t stream = 0; stream < 2; ++stream) {
    auto rng = make_rng(seed, 1 + stream);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < n_per_class; ++i) {
      append_sample(prob, classes[stream], rng, normal, points);
      labels.push_back(classes[stream]);
    }
  }
  std::vector<std::uint32_t> counts(labels.size(), 1);
  return LabeledDataset::from_rows(prob.dim(), std::move(points), std::move(labels),
                                   std::move(counts));
}

GaussianProblem diagonal_preset(std::size_t dim, double scale, std::uint64_t seed,
                                NeighborhoodSpec spec) {
  if (dim == 0) fail(ErrorKind::kDimension, "dimension must be positive");
  auto rng = make_rng(seed, 99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd variances(static_cast<Eigen::Index>(dim));
  Eigen::VectorXd mu(static_cast<Eigen::Index>(dim));
  const double root_d = std::sqrt(static_cast<double>(dim));
  for (Eigen::Index i = 0; i < variances.size(); ++i) {
    variances[i] = 1.0 - unif(rng);  // (0, 1]
    mu[i] = scale * variances[i] / root_d;
  }
  return GaussianProblem::diagonal(std::move(mu), variances, 0.5, std::move(spec));
}

}  // namespace advbound

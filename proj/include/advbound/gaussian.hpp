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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "advbound/dataset.hpp"
#include "advbound/geometry.hpp"

namespace advbound {

// P = p * N(mu, Sigma) + (1 - p) * N(-mu, Sigma), attacked inside x + eps*Delta.
class GaussianProblem {
 public:
  // Throws kNumeric if sigma is not symmetric positive definite, kUsage if the
  // prior is outside (0, 1), kDimension on shape mismatch.
  GaussianProblem(Eigen::VectorXd mu, Eigen::MatrixXd sigma, double prior_plus,
                  NeighborhoodSpec spec);
  static GaussianProblem diagonal(Eigen::VectorXd mu, const Eigen::VectorXd& variances,
                                  double prior_plus, NeighborhoodSpec spec);

  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  double prior_plus() const { return prior_plus_; }
  double prior_minus() const { return 1.0 - prior_plus_; }
  const NeighborhoodSpec& spec() const { return spec_; }
  std::size_t dim() const { return static_cast<std::size_t>(mu_.size()); }
  bool is_diagonal() const { return diagonal_; }

  GaussianProblem with_eps(double eps) const;

  // Lower-triangular Cholesky factor of sigma.
  const Eigen::MatrixXd& cholesky_factor() const { return chol_; }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd chol_;
  double prior_plus_;
  NeighborhoodSpec spec_;
  bool diagonal_;
};

struct GaussianSolution {
  Eigen::VectorXd z_star;  // optimal per-class mean shift (adversary)
  Eigen::VectorXd w_star;  // 2 Sigma^{-1} (mu - z*)
  double intercept = 0.0;  // ln(p / (1 - p))
  double loss_nats = 0.0;
  // Relative difference between 200- and 400-node quadrature; the warning
  // flag is raised above 1e-8.
  double quadrature_rel_diff = 0.0;
  bool precision_warning = false;
};

// argmin (mu - z)' Sigma^{-1} (mu - z) over z in eps*Delta. L2 with any SPD
// sigma, or Linf with diagonal sigma.
Eigen::VectorXd optimal_shift(const GaussianProblem& prob);

GaussianSolution closed_form_loss(const GaussianProblem& prob);

// Gauss-Hermite rule for weight exp(-x^2): nodes ascending, weights sum to
// sqrt(pi).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_hermite(std::size_t n);

// E[f(T)] for T ~ Normal(mean, variance) using an n-node rule.
template <typename F>
double normal_expectation(F&& f, double mean, double variance, std::size_t n) {
  const QuadratureRule& rule = gauss_hermite(n);
  const double spread = std::sqrt(2.0 * std::max(variance, 0.0));
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mean + spread * rule.nodes[i]);
  }
  return acc / std::sqrt(std::numbers::pi);
}

// ln(1 + e^t), stable for any t.
inline double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

// Labels drawn from the prior, then x ~ N(y mu, Sigma).
LabeledDataset sample_mixture(const GaussianProblem& prob, std::size_t n, std::uint64_t seed);
// Exactly n_per_class points from each component.
LabeledDataset sample_mixture_per_class(const GaussianProblem& prob, std::size_t n_per_class,
                                        std::uint64_t seed);

// Diagonal preset: Sigma_ii ~ U(0, 1), mu_i = scale * Sigma_ii / sqrt(d),
// equal priors. Deterministic in seed.
GaussianProblem diagonal_preset(std::size_t dim, double scale, std::uint64_t seed,
                                NeighborhoodSpec spec);

}  // namespace advbound

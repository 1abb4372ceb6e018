// Copyright 2026 The qdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Derivative-free multi-start local search on the real embedding of complex
// unit spheres, with optional projection onto a constraint variety.
//
// The fidelity objectives in this library are piecewise: the support of
// E(psi) has a generic rank almost everywhere and drops rank on a
// lower-dimensional set, where the objective can jump down. A plain local
// search never lands on such a set, so each rank stratum is searched
// separately: trial points are pulled onto {rank <= r} by a Levenberg-
// Marquardt solve on the tail of the singular spectrum before the objective
// is evaluated.

#ifndef QDISC_SEARCH_HPP
#define QDISC_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qdisc/core.hpp"

namespace qdisc {

struct OptimizerConfig {
  int starts = 64;
  int max_iters = 500;
  double step_tol = 1e-10;
  double value_tol = 1e-9;
  std::uint64_t seed = 0;
  // Worker threads for independent starts; 0 means hardware concurrency.
  // Results do not depend on this value.
  int threads = 0;

  // Throws DomainError on nonpositive counts or tolerances.
  void validate() const;
};

// Every start failed to converge. Carries the best value seen anyway.
class OptimizerError : public Error {
 public:
  OptimizerError(const std::string& what, double best_value)
      : Error(what), best_value_(best_value) {}
  double best_value() const { return best_value_; }

 private:
  double best_value_;
};

namespace search {

using RealVector = Eigen::VectorXd;

struct Problem {
  int n = 0;
  std::function<double(const RealVector&)> objective;
  // Zero exactly on the feasible set. Unset means unconstrained.
  std::function<RealVector(const RealVector&)> residual;
  double residual_tol = 1e-11;
  std::function<RealVector(std::mt19937_64&)> sample;
  // Re-normalizes / gauge-fixes an accepted point; must not change the
  // objective or the residual.
  std::function<void(RealVector&)> canonicalize;
};

struct LocalResult {
  RealVector x;
  double value = 1.0;
  bool feasible = false;
  bool converged = false;
  int iterations = 0;
  int start_index = -1;
};

// Independent stream for (seed, tag, index); identical on every schedule.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

// Gauss-Newton / Levenberg-Marquardt on the residual starting at x0.
// Returns nullopt if ||residual|| does not fall below residual_tol.
std::optional<RealVector> project(const Problem& problem, const RealVector& x0);

// Compass search from x0 (projected when the problem is constrained).
LocalResult local_search(const Problem& problem, const RealVector& x0, const OptimizerConfig& config);

// Runs config.starts local searches, start i seeded by make_stream(seed, tag, i).
std::vector<LocalResult> multistart(const Problem& problem, const OptimizerConfig& config,
                                    std::uint64_t tag);

// Central-difference gradient norm of the (projected) objective.
double gradient_norm(const Problem& problem, const RealVector& x, double h = 1e-6);

// Calls fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

// Real <-> complex embedding: x = (Re v_0, Im v_0, Re v_1, ...).
Vector to_complex(const RealVector& x);
RealVector to_real(const Vector& v);
// Gaussian vector in R^{2 dim}; normalized it is Haar-uniform on the sphere.
RealVector random_sphere_point(int dim, std::mt19937_64& rng);

}  // namespace search
}  // namespace qdisc

#endif  // QDISC_SEARCH_HPP

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

#include "qdisc/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace qdisc {

void OptimizerConfig::validate() const {
  if (starts < 1) throw DomainError("optimizer: starts must be >= 1");
  if (max_iters < 1) throw DomainError("optimizer: max_iters must be >= 1");
  if (!(step_tol > 0.0) || !(value_tol > 0.0)) {
    throw DomainError("optimizer: tolerances must be positive");
  }
  if (threads < 0) throw DomainError("optimizer: threads must be >= 0");
}

namespace search {
namespace {

constexpr double kInitialStep = 0.25;
constexpr double kMaxStep = 0.5;
constexpr int kMaxProjectIters = 60;

bool constrained(const Problem& p) { return static_cast<bool>(p.residual); }

void canonical(const Problem& p, RealVector& x) {
  if (p.canonicalize) p.canonicalize(x);
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(tag), hi(tag), lo(index), hi(index)};
  return std::mt19937_64(seq);
}

std::optional<RealVector> project(const Problem& problem, const RealVector& x0) {
  RealVector x = x0;
  RealVector r = problem.residual(x);
  double rn = r.norm();
  double lambda = 1e-6;
  const int n = static_cast<int>(x.size());
  for (int it = 0; it < kMaxProjectIters && rn > problem.residual_tol; ++it) {
    Eigen::MatrixXd jac(r.size(), n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
      RealVector xh = x;
      xh[j] += h;
      jac.col(j) = (problem.residual(xh) - r) / h;
    }
    const Eigen::MatrixXd a = jac.transpose() * jac;
    const RealVector g = jac.transpose() * r;
    const double scale = std::max(a.diagonal().maxCoeff(), 1e-300);
    bool accepted = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd damped = a;
      damped.diagonal().array() += lambda * scale;
      const RealVector delta = damped.ldlt().solve(-g);
      RealVector xt = x + delta;
      const RealVector rt = problem.residual(xt);
      const double rtn = rt.norm();
      if (std::isfinite(rtn) && rtn < rn) {
        x = std::move(xt);
        r = rt;
        rn = rtn;
        lambda = std::max(lambda / 5.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;
  }
  if (!(rn <= problem.residual_tol)) return std::nullopt;
  canonical(problem, x);
  return x;
}

LocalResult local_search(const Problem& problem, const RealVector& x0, const OptimizerConfig& config) {
  LocalResult out;
  RealVector x = x0;
  canonical(problem, x);
  if (constrained(problem)) {
    auto p = project(problem, x);
    if (!p) return out;
    x = std::move(*p);
  }
  out.feasible = true;
  double f = problem.objective(x);
  double step = kInitialStep;
  const int n = problem.n;
  int iter = 0;
  while (iter < config.max_iters) {
    if (step < config.step_tol) {
      out.converged = true;
      break;
    }
    ++iter;
    bool improved = false;
    bool all_collapsed = constrained(problem);
    for (int i = 0; i < n && !improved; ++i) {
      for (double sign : {1.0, -1.0}) {
        RealVector y = x;
        y[i] += sign * step;
        if (constrained(problem)) {
          auto p = project(problem, y);
          if (!p) continue;
          y = std::move(*p);
          if ((y - x).norm() > 1e-9) all_collapsed = false;
        } else {
          canonical(problem, y);
        }
        const double fy = problem.objective(y);
        if (fy < f) {
          x = std::move(y);
          f = fy;
          improved = true;
          break;
        }
      }
    }
    if (improved) {
      step = std::min(2.0 * step, kMaxStep);
    } else if (all_collapsed) {
      // Every poll direction projects back onto x: the feasible set is
      // locally a point.
      out.converged = true;
      break;
    } else {
      step *= 0.5;
    }
  }
  if (!out.converged && step < config.step_tol) out.converged = true;
  out.x = std::move(x);
  out.value = f;
  out.iterations = iter;
  return out;
}

std::vector<LocalResult> multistart(const Problem& problem, const OptimizerConfig& config,
                                    std::uint64_t tag) {
  config.validate();
  std::vector<LocalResult> results(config.starts);
  parallel_for(config.starts, config.threads, [&](int i) {
    auto rng = make_stream(config.seed, tag, static_cast<std::uint64_t>(i));
    const RealVector x0 = problem.sample(rng);
    results[i] = local_search(problem, x0, config);
    results[i].start_index = i;
  });
  return results;
}

double gradient_norm(const Problem& problem, const RealVector& x, double h) {
  double sum = 0.0;
  for (int i = 0; i < problem.n; ++i) {
    RealVector xp = x;
    RealVector xm = x;
    xp[i] += h;
    xm[i] -= h;
    if (constrained(problem)) {
      auto pp = project(problem, xp);
      auto pm = project(problem, xm);
      if (!pp || !pm) continue;
      xp = std::move(*pp);
      xm = std::move(*pm);
    }
    const double gi = (problem.objective(xp) - problem.objective(xm)) / (2.0 * h);
    sum += gi * gi;
  }
  return std::sqrt(sum);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

Vector to_complex(const RealVector& x) {
  Vector v(x.size() / 2);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(x[2 * i], x[2 * i + 1]);
  return v;
}

RealVector to_real(const Vector& v) {
  RealVector x(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    x[2 * i] = v[i].real();
    x[2 * i + 1] = v[i].imag();
  }
  return x;
}

RealVector random_sphere_point(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector x(2 * dim);
  for (auto& e : x) e = normal(rng);
  return x / x.norm();
}

}  // namespace search
}  // namespace qdisc

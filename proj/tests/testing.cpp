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

#include "testing.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <utility>

#include <Eigen/Eigenvalues>

namespace qdisc::testing {
namespace {

constexpr int kPolar = 400;
constexpr int kAzimuth = 800;
constexpr int kRefineSeeds = 8;
constexpr double kGolden = 0.6180339887498949;

Vector bloch_state(double t, double p) {
  Vector v(2);
  v << std::cos(t / 2), std::polar(std::sin(t / 2), p);
  return v;
}

double oracle_value(const KrausChannel& ch, double t, double p) {
  const Vector psi = bloch_state(t, p);
  Matrix rho = Matrix::Zero(2, 2);
  for (const auto& k : ch.kraus()) rho += k * psi * psi.adjoint() * k.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  const double top = es.eigenvalues().maxCoeff();
  double overlap = 0.0;
  for (int i = 0; i < 2; ++i) {
    if (es.eigenvalues()[i] > 1e-10 * top) overlap += std::norm(es.eigenvectors().col(i).dot(psi));
  }
  return std::sqrt(std::min(overlap, 1.0));
}

// Golden-section search of f on [lo, hi]; returns the best point seen.
template <typename F>
std::pair<double, double> golden(F f, double lo, double hi, int iters) {
  double a = lo;
  double b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  std::pair<double, double> best = f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
      if (f1 < best.second) best = {x1, f1};
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
      if (f2 < best.second) best = {x2, f2};
    }
  }
  return best;
}

}  // namespace

const std::vector<double>& family_angles() {
  static const std::vector<double> angles{kPi / 6, kPi / 4, kPi / 3, 0.4, 1.2};
  return angles;
}

std::vector<TestChannel> qubit_rotations() {
  std::vector<TestChannel> out;
  for (double t : family_angles()) out.push_back({make_rotation_channel(t), t});
  return out;
}

std::vector<TestChannel> qubit_replace() {
  std::vector<TestChannel> out;
  for (double t : family_angles()) out.push_back({make_replace_channel(t), t});
  return out;
}

KrausChannel qutrit_replace(double theta) {
  Matrix k1 = Matrix::Zero(3, 3);
  k1(0, 0) = std::cos(theta);
  k1(1, 0) = std::sin(theta);
  Matrix k2 = Matrix::Zero(3, 3);
  k2(1, 1) = 1.0;
  Matrix k3 = Matrix::Zero(3, 3);
  k3(2, 2) = 1.0;
  return KrausChannel({k1, k2, k3}, "qutrit_replace:" + format_angle(theta));
}

KrausChannel qutrit_rotation(double theta) {
  Matrix u = Matrix::Identity(3, 3);
  u.topLeftCorner(2, 2) = rotation_matrix(theta);
  return KrausChannel({u}, "qutrit_rotation:" + format_angle(theta));
}

std::vector<TestChannel> all_test_channels() {
  std::vector<TestChannel> out = qubit_rotations();
  for (auto& c : qubit_replace()) out.push_back(std::move(c));
  out.push_back({make_unitary_channel(pauli_z(), "Z"), kPi / 2});
  out.push_back({KrausChannel::identity(2), std::nullopt});
  out.push_back({make_amplitude_damping(0.5), std::nullopt});
  out.push_back({make_depolarizing(0.5), std::nullopt});
  out.push_back({qutrit_replace(kPi / 6), kPi / 6});
  out.push_back({qutrit_replace(kPi / 3), kPi / 3});
  out.push_back({qutrit_rotation(0.4), 0.4});
  return out;
}

double bloch_oracle_f1(const KrausChannel& channel) {
  struct Cell {
    double value;
    double t;
    double p;
  };
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(kPolar) * kAzimuth);
  const double dt = kPi / (kPolar - 1);
  const double dp = 2 * kPi / kAzimuth;
  for (int i = 0; i < kPolar; ++i) {
    for (int j = 0; j < kAzimuth; ++j) {
      const double t = i * dt;
      const double p = j * dp;
      cells.push_back({oracle_value(channel, t, p), t, p});
    }
  }
  std::partial_sort(cells.begin(), cells.begin() + kRefineSeeds, cells.end(),
                    [](const Cell& a, const Cell& b) { return a.value < b.value; });
  double best = cells.front().value;
  for (int s = 0; s < kRefineSeeds; ++s) {
    double t = cells[s].t;
    double p = cells[s].p;
    double ht = dt;
    double hp = dp;
    for (int sweep = 0; sweep < 6; ++sweep) {
      const auto [t_new, vt] = golden([&](double x) { return oracle_value(channel, x, p); },
                                      std::max(0.0, t - ht), std::min(kPi, t + ht), 40);
      if (vt <= oracle_value(channel, t, p)) t = t_new;
      const auto [p_new, vp] = golden([&](double x) { return oracle_value(channel, t, x); },
                                      p - hp, p + hp, 40);
      if (vp <= oracle_value(channel, t, p)) p = p_new;
      best = std::min({best, vt, vp});
      ht *= 0.5;
      hp *= 0.5;
    }
  }
  return best;
}

Vector random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(n(rng), n(rng));
  return v / v.norm();
}

Matrix random_density(int dim, int rank, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.1, 1.0);
  Matrix rho = Matrix::Zero(dim, dim);
  double total = 0.0;
  for (int k = 0; k < rank; ++k) {
    const Vector v = random_state(dim, rng);
    const double weight = w(rng);
    rho += weight * v * v.adjoint();
    total += weight;
  }
  rho /= total;
  return 0.5 * (rho + rho.adjoint());
}

KrausChannel random_channel(int dim, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(dim * m, dim);
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) g(i, j) = Complex(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix v = qr.householderQ() * Matrix::Identity(dim * m, dim);
  std::vector<Matrix> kraus;
  for (int i = 0; i < m; ++i) kraus.push_back(v.middleRows(i * dim, dim));
  return KrausChannel(std::move(kraus), "random");
}

PairInstance random_pair_instance(int dim, bool feasible, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    PairInstance p;
    // Rank below dim so that source_b generically leaves the support.
    const int rank = 1 + static_cast<int>(rng() % static_cast<unsigned>(dim - 1));
    p.source_a = random_density(dim, rank, rng);
    p.source_b = random_state(dim, rng);
    const Projector supp = support_projector(p.source_a);
    p.source_fidelity = std::min(1.0, (supp.matrix * p.source_b).norm());
    double r = 0.0;
    if (feasible) {
      r = p.source_fidelity + (1.0 - p.source_fidelity) * u(rng);
    } else {
      if (p.source_fidelity < 2e-3) continue;
      r = (p.source_fidelity - 1e-3) * u(rng);
    }
    p.target_a = random_state(dim, rng);
    Vector chi = random_state(dim, rng);
    chi -= p.target_a.dot(chi) * p.target_a;
    chi.normalize();
    const Complex phase = std::polar(1.0, 2 * kPi * u(rng));
    p.target_b = phase * (r * p.target_a + std::sqrt(std::max(0.0, 1.0 - r * r)) * chi);
    return p;
  }
}

std::string write_temp(const std::string& stem, const std::string& text) {
  static int counter = 0;
  const auto path = std::filesystem::temp_directory_path() /
                    ("qdisc_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                     "_" + stem);
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

}  // namespace qdisc::testing

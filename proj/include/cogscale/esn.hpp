// Copyright 2026 The CogScale Authors
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

// Echo state network baseline: sparse random reservoir, leaky tanh update,
// ridge readout selected on the validation split, and the grid sweep.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCore>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogscale/config.hpp"
#include "cogscale/core.hpp"
#include "cogscale/dataset.hpp"
#include "cogscale/hash.hpp"
#include "cogscale/metrics.hpp"
#include "cogscale/parallel.hpp"
#include "cogscale/rng.hpp"

namespace cogscale {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EsnConfig {
  std::int64_t n_units = 100;
  double leaking_rate = 0.5;
  double spectral_radius = 0.9;
  double input_scaling = 1.0;
  double density = 0.1;
  double bias_scaling = 0.1;
  // Caps the expected nonzeros per reservoir row; 0 disables the cap. Keeps
  // large reservoirs at a fixed cost per unit.
  std::int64_t max_in_degree = 100;
  std::uint64_t seed = 0;
};

inline std::vector<std::string> validate(const EsnConfig& c) {
  std::vector<std::string> v;
  if (c.n_units < 1) v.push_back("n_units must be at least 1");
  if (!(c.leaking_rate > 0.0 && c.leaking_rate <= 1.0)) v.push_back("leaking_rate must lie in (0, 1]");
  if (!(c.spectral_radius > 0.0)) v.push_back("spectral_radius must be positive");
  if (!(c.input_scaling > 0.0)) v.push_back("input_scaling must be positive");
  if (!(c.density > 0.0 && c.density <= 1.0)) v.push_back("density must lie in (0, 1]");
  if (!(c.bias_scaling >= 0.0)) v.push_back("bias_scaling must be non-negative");
  if (c.max_in_degree < 0) v.push_back("max_in_degree must be non-negative");
  return v;
}

/// Connection probability actually used: density, lowered so the expected
/// row count stays at most max_in_degree.
inline double effective_density(double density, std::int64_t n_units, std::int64_t max_in_degree) {
  if (max_in_degree <= 0) return density;
  return std::min(density, static_cast<double>(max_in_degree) / static_cast<double>(n_units));
}

// --- spectral radius --------------------------------------------------------------

struct SpectralEstimate {
  double radius = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Dominant eigenvalue magnitude by block power iteration with a
/// Rayleigh-Ritz step. A block of several vectors is needed because the
/// dominant eigenvalues of a real random matrix usually form a complex
/// conjugate pair, where single-vector power iteration oscillates.
///
/// Stops after `max_iter` iterations, or once the estimate changes by less
/// than `tol` relative and the dominant Ritz pair has relative residual
/// below `residual_tol`. The residual check matters: the largest Ritz value
/// can stall for one iteration long before it has converged.
inline SpectralEstimate spectral_radius(const SparseMatrix& w, RngStream& stream,
                                        int max_iter = 500, double tol = 1e-6, int block = 16,
                                        double residual_tol = 1e-6) {
  const Eigen::Index n = w.rows();
  if (n == 0 || w.cols() != n) throw std::invalid_argument("spectral_radius: need a square matrix");
  const Eigen::Index m = std::min<Eigen::Index>(block, n);
  Eigen::MatrixXd q(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) q(i, j) = draw_uniform(stream, -1.0, 1.0);
  }
  auto orthonormalize = [&](const Eigen::MatrixXd& z) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(n, m));
  };
  q = orthonormalize(q);
  SpectralEstimate est;
  double prev = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    // Row-major operand: each sparse entry then updates one contiguous row.
    const RowMatrix qr = q;
    const Eigen::MatrixXd z = RowMatrix(w * qr);
    const Eigen::MatrixXd h = q.transpose() * z;
    const Eigen::EigenSolver<Eigen::MatrixXd> es(h, true);
    const auto& ev = es.eigenvalues();
    Eigen::Index top = 0;
    for (Eigen::Index k = 1; k < ev.size(); ++k) {
      if (std::abs(ev(k)) > std::abs(ev(top))) top = k;
    }
    const double r = std::abs(ev(top));
    est.radius = r;
    est.iterations = it;
    if (prev >= 0.0 && std::abs(r - prev) <= tol * r) {
      const Eigen::VectorXcd y = es.eigenvectors().col(top);
      const Eigen::VectorXcd v = q.cast<std::complex<double>>() * y;
      const Eigen::VectorXcd wv = z.cast<std::complex<double>>() * y;
      const double vn = v.norm();
      if (r == 0.0 || vn == 0.0 || (wv - ev(top) * v).norm() <= residual_tol * r * vn) {
        est.converged = true;
        break;
      }
    }
    prev = r;
    q = orthonormalize(z);
  }
  return est;
}

/// Reference value from a dense eigensolver; O(n^3), for tests and small n.
inline double dense_spectral_radius(const Eigen::MatrixXd& w) {
  const auto ev = Eigen::EigenSolver<Eigen::MatrixXd>(w, false).eigenvalues();
  double r = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) r = std::max(r, std::abs(ev(k)));
  return r;
}

// --- reservoir --------------------------------------------------------------------

struct Reservoir {
  SparseMatrix w;      // n x n
  Eigen::MatrixXd w_in;  // n x d_in
  Eigen::VectorXd b;   // n
  double leaking_rate = 1.0;

  Eigen::Index units() const { return w.rows(); }
};

/// Unscaled draw shared by every grid point of one seed: W with entries in
/// [-1, 1] and its measured spectral radius, W_in in [-1, 1], and the bias.
struct ReservoirBase {
  SparseMatrix w;
  double radius = 0.0;
  Eigen::MatrixXd w_in;
  Eigen::VectorXd b;
  double density = 0.0;  // effective connection probability
  int attempts = 1;
};

namespace detail {

// Substream ids inside one reservoir seed.
inline constexpr std::uint64_t kInputStream = 1;
inline constexpr std::uint64_t kBiasStream = 2;
inline constexpr std::uint64_t kPowerStream = 3;
inline constexpr std::uint64_t kWeightStream = 16;  // + attempt

inline SparseMatrix random_sparse(std::int64_t n, double p, RngStream& s) {
  SparseMatrix w(n, n);
  w.reserve(static_cast<Eigen::Index>(std::ceil(static_cast<double>(n) * static_cast<double>(n) * p * 1.2)) + n);
  for (std::int64_t i = 0; i < n; ++i) {
    w.startVec(i);
    for (std::int64_t j = 0; j < n; ++j) {
      if (draw_uniform(s, 0.0, 1.0) < p) w.insertBack(i, j) = draw_uniform(s, -1.0, 1.0);
    }
  }
  w.finalize();
  return w;
}

}  // namespace detail

inline ReservoirBase build_reservoir_base(std::int64_t n_units, std::int64_t d_in, double density,
                                          double bias_scaling, std::int64_t max_in_degree,
                                          std::uint64_t seed) {
  const Seed root{seed};
  ReservoirBase base;
  base.density = effective_density(density, n_units, max_in_degree);
  constexpr int kMaxAttempts = 3;
  for (int attempt = 0;; ++attempt) {
    RngStream ws = derive_stream(root, detail::kWeightStream + static_cast<std::uint64_t>(attempt));
    base.w = detail::random_sparse(n_units, base.density, ws);
    RngStream ps = derive_stream(root, detail::kPowerStream);
    base.radius = spectral_radius(base.w, ps).radius;
    base.attempts = attempt + 1;
    if (base.radius >= 1e-12) break;
    if (attempt + 1 == kMaxAttempts) {
      throw NumericError("reservoir has zero spectral radius after " + std::to_string(kMaxAttempts) +
                         " draws; raise density or n_units");
    }
  }
  RngStream is = derive_stream(root, detail::kInputStream);
  base.w_in.resize(n_units, d_in);
  for (std::int64_t i = 0; i < n_units; ++i) {
    for (std::int64_t j = 0; j < d_in; ++j) base.w_in(i, j) = draw_uniform(is, -1.0, 1.0);
  }
  RngStream bs = derive_stream(root, detail::kBiasStream);
  base.b.resize(n_units);
  for (std::int64_t i = 0; i < n_units; ++i) {
    base.b(i) = bias_scaling > 0.0 ? draw_uniform(bs, -bias_scaling, bias_scaling) : 0.0;
  }
  return base;
}

inline Reservoir scale_reservoir(const ReservoirBase& base, double leaking_rate,
                                 double spectral_radius, double input_scaling) {
  Reservoir r;
  r.w = base.w * (spectral_radius / base.radius);
  r.w_in = base.w_in * input_scaling;
  r.b = base.b;
  r.leaking_rate = leaking_rate;
  return r;
}

inline Reservoir build_reservoir(const EsnConfig& c, std::int64_t d_in) {
  if (auto v = validate(c); !v.empty()) throw ConfigError(v);
  const auto base = build_reservoir_base(c.n_units, d_in, c.density, c.bias_scaling,
                                         c.max_in_degree, c.seed);
  return scale_reservoir(base, c.leaking_rate, c.spectral_radius, c.input_scaling);
}

// --- state collection -------------------------------------------------------------

/// tanh as 1 - 2 / (exp(2x) + 1). Eigen vectorizes exp but not tanh for
/// doubles; this form is about ten times faster and within a few ulp.
template <class Derived>
auto fast_tanh(const Eigen::ArrayBase<Derived>& x) {
  return 1.0 - 2.0 / ((2.0 * x).exp() + 1.0);
}

/// States x(0..T-1) for one input sequence, starting from `initial` (zero by
/// default): x(t) = (1 - a) x(t-1) + a tanh(W x(t-1) + W_in u(t) + b).
inline Eigen::MatrixXd run_states(const Reservoir& r, const Matrix& inputs,
                                  const std::optional<Eigen::VectorXd>& initial = std::nullopt) {
  const Eigen::Index n = r.units();
  if (inputs.cols() != r.w_in.cols()) throw std::invalid_argument("run_states: input width mismatch");
  Eigen::VectorXd x = initial ? *initial : Eigen::VectorXd::Zero(n);
  if (x.size() != n) throw std::invalid_argument("run_states: initial state size mismatch");
  const double a = r.leaking_rate;
  Eigen::MatrixXd out(inputs.rows(), n);
  for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
    const Eigen::VectorXd u = inputs.row(t).transpose().cast<double>();
    const Eigen::VectorXd pre = r.w * x + r.w_in * u + r.b;
    x = (1.0 - a) * x.array() + a * fast_tanh(pre.array());
    if (!x.allFinite()) throw NumericError("non-finite reservoir state at step " + std::to_string(t));
    out.row(t) = x.transpose();
  }
  return out;
}

/// Masked-step states of a list of samples, one row per masked step in
/// (sample, step) order, with a trailing constant 1 column for the bias.
struct StateRows {
  RowMatrix x;
  std::vector<Eigen::Index> offsets;  // first row of each sample
};

/// Runs samples through the reservoir in batches (one column per sample) and
/// keeps only masked rows. Equivalent to run_states per sample.
inline StateRows collect_states(const Reservoir& r, const std::vector<Sample>& samples,
                                std::size_t batch = 64) {
  const Eigen::Index n = r.units();
  StateRows out;
  out.offsets.resize(samples.size());
  Eigen::Index rows = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.offsets[i] = rows;
    rows += static_cast<Eigen::Index>(samples[i].masked_steps());
  }
  out.x.resize(rows, n + 1);
  out.x.col(n).setOnes();
  const double a = r.leaking_rate;
  const auto d_in = r.w_in.cols();
  std::size_t first = 0;
  while (first < samples.size()) {
    // A batch is a run of consecutive samples with equal length.
    std::size_t last = first + 1;
    while (last < samples.size() && last - first < batch &&
           samples[last].steps() == samples[first].steps()) {
      ++last;
    }
    const auto bsz = static_cast<Eigen::Index>(last - first);
    const auto steps = static_cast<Eigen::Index>(samples[first].steps());
    // Row-major blocks make the sparse product a sequence of contiguous
    // row updates, several times faster than column-major here.
    RowMatrix s = RowMatrix::Zero(n, bsz);
    RowMatrix u(d_in, bsz);
    RowMatrix pre(n, bsz);
    std::vector<Eigen::Index> cursor(out.offsets.begin() + static_cast<std::ptrdiff_t>(first),
                                     out.offsets.begin() + static_cast<std::ptrdiff_t>(last));
    for (Eigen::Index t = 0; t < steps; ++t) {
      for (Eigen::Index k = 0; k < bsz; ++k) {
        const auto& in = samples[first + static_cast<std::size_t>(k)].input;
        if (in.cols() != d_in) throw std::invalid_argument("collect_states: input width mismatch");
        u.col(k) = in.row(t).transpose().cast<double>();
      }
      pre.noalias() = r.w * s;
      pre.noalias() += r.w_in * u;
      pre.colwise() += r.b;
      s = (1.0 - a) * s.array() + a * fast_tanh(pre.array());
      if (!s.allFinite()) throw NumericError("non-finite reservoir state at step " + std::to_string(t));
      for (Eigen::Index k = 0; k < bsz; ++k) {
        const auto& smp = samples[first + static_cast<std::size_t>(k)];
        if (smp.eval_mask[static_cast<std::size_t>(t)]) {
          out.x.row(cursor[static_cast<std::size_t>(k)]++).head(n) = s.col(k).transpose();
        }
      }
    }
    first = last;
  }
  return out;
}

/// Masked targets stacked in the same row order as collect_states.
inline Eigen::MatrixXd masked_targets(const std::vector<Sample>& samples) {
  Eigen::Index rows = 0;
  Eigen::Index d_out = samples.empty() ? 0 : samples.front().target.cols();
  for (const auto& s : samples) rows += static_cast<Eigen::Index>(s.masked_steps());
  Eigen::MatrixXd y(rows, d_out);
  Eigen::Index k = 0;
  for (const auto& s : samples) {
    for (Eigen::Index t = 0; t < s.target.rows(); ++t) {
      if (s.eval_mask[static_cast<std::size_t>(t)]) y.row(k++) = s.target.row(t).cast<double>();
    }
  }
  return y;
}

/// Scores stacked masked-row predictions against their samples.
inline SplitScore score_rows(MetricKind kind, const Eigen::MatrixXd& pred,
                             const std::vector<Sample>& samples,
                             const std::vector<Eigen::Index>& offsets) {
  MetricAccumulator acc(kind);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(s.target.rows(), s.target.cols());
    Eigen::Index k = offsets[i];
    for (Eigen::Index t = 0; t < s.target.rows(); ++t) {
      if (s.eval_mask[static_cast<std::size_t>(t)]) full.row(t) = pred.row(k++);
    }
    acc.add(full, s);
  }
  return {acc.score(), acc.n_evaluated()};
}

// --- ridge readout ------------------------------------------------------------------

/// Largest relative residual of the regularized system accepted for a ridge
/// value; worse solves are treated as singular and skipped.
inline constexpr double kRidgeResidualTol = 1e-6;

/// Solves W_out = Y^T X (X^T X + lambda I)^-1 for a sequence of lambdas,
/// reusing the Gram matrix. With fewer rows than columns the equivalent dual
/// form W_out = ((X X^T + lambda I)^-1 Y)^T X is used, which at lambda = 0
/// gives the minimum-norm interpolant.
class RidgeSolver {
 public:
  RidgeSolver(const RowMatrix& x, const Eigen::MatrixXd& y) : x_(x), y_(y) {
    if (x.rows() != y.rows()) throw std::invalid_argument("RidgeSolver: row count mismatch");
    if (x.rows() == 0) throw std::invalid_argument("RidgeSolver: no training rows");
    dual_ = x.rows() < x.cols();
    if (dual_) {
      gram_ = Eigen::MatrixXd::Zero(x.rows(), x.rows());
      gram_.selfadjointView<Eigen::Lower>().rankUpdate(x);
      rhs_ = y;
    } else {
      gram_ = Eigen::MatrixXd::Zero(x.cols(), x.cols());
      gram_.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
      rhs_.noalias() = x.transpose() * y;
    }
    gram_ = gram_.selfadjointView<Eigen::Lower>();
  }

  bool dual() const noexcept { return dual_; }

  struct Result {
    Eigen::MatrixXd w_out;  // d_out x cols(X)
    double residual = 0.0;
  };

  /// Empty when the system is numerically singular for this lambda.
  std::optional<Result> solve(double lambda, std::string* why = nullptr) const {
    Eigen::MatrixXd m = gram_;
    m.diagonal().array() += lambda;
    Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(m);  // factorizes in place
    auto fail = [&](const std::string& reason) -> std::optional<Result> {
      if (why) *why = reason;
      return std::nullopt;
    };
    if (llt.info() != Eigen::Success) return fail("Cholesky factorization failed");
    auto apply = [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd { return gram_ * v + lambda * v; };
    Eigen::MatrixXd z = llt.solve(rhs_);
    z += llt.solve(rhs_ - apply(z));  // one step of iterative refinement
    const double rhs_norm = rhs_.norm();
    const double res = rhs_norm > 0 ? (rhs_ - apply(z)).norm() / rhs_norm : apply(z).norm();
    if (!z.allFinite()) return fail("non-finite solution");
    if (!(res <= kRidgeResidualTol)) return fail("relative residual " + std::to_string(res));
    Result r;
    r.residual = res;
    if (dual_) r.w_out.noalias() = z.transpose() * x_;
    else r.w_out = z.transpose();
    return r;
  }

 private:
  const RowMatrix& x_;
  const Eigen::MatrixXd& y_;
  bool dual_ = false;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd rhs_;
};

struct ReadoutSolution {
  Eigen::MatrixXd w_out;  // d_out x (n_units + 1)
  double ridge = 0.0;
  double validation_score = 0.0;
  std::size_t validation_steps = 0;
  std::vector<std::pair<double, double>> tried;  // (lambda, validation score)
  std::vector<std::string> warnings;
};

/// Fits one readout per lambda and keeps the one with the lowest validation
/// score (first in grid order on ties).
inline ReadoutSolution fit_readout(const StateRows& train, const std::vector<Sample>& train_samples,
                                   const StateRows& valid, const std::vector<Sample>& valid_samples,
                                   MetricKind metric, const std::vector<double>& ridge_grid) {
  if (ridge_grid.empty()) throw std::invalid_argument("fit_readout: empty ridge grid");
  const Eigen::MatrixXd y = masked_targets(train_samples);
  RidgeSolver solver(train.x, y);
  std::optional<ReadoutSolution> best;
  std::vector<std::string> warnings;
  std::vector<std::pair<double, double>> tried;
  for (double lambda : ridge_grid) {
    std::string why;
    auto sol = solver.solve(lambda, &why);
    if (!sol) {
      warnings.push_back("ridge " + std::to_string(lambda) + " skipped: " + why);
      continue;
    }
    const Eigen::MatrixXd pred = valid.x * sol->w_out.transpose();
    const SplitScore vs = score_rows(metric, pred, valid_samples, valid.offsets);
    tried.emplace_back(lambda, vs.score);
    if (!best || vs.score < best->validation_score) {
      best = ReadoutSolution{std::move(sol->w_out), lambda, vs.score, vs.n_evaluated, {}, {}};
    }
  }
  if (!best) throw NumericError("every ridge value failed: " + (warnings.empty() ? "" : warnings.back()));
  best->tried = std::move(tried);
  best->warnings = std::move(warnings);
  return *std::move(best);
}

// --- sweep ----------------------------------------------------------------------------

struct EsnGrid {
  std::vector<double> leaking_rates{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> spectral_radii{0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5};
  std::vector<double> input_scalings{0.1, 1.0, 10.0};
  std::vector<double> ridges{0.0, 1e-8, 1e-6, 1e-4, 1e-2, 1.0, 1e2};

  std::size_t points() const {
    return leaking_rates.size() * spectral_radii.size() * input_scalings.size();
  }
  friend bool operator==(const EsnGrid&, const EsnGrid&) = default;
};

inline void to_json(nlohmann::json& j, const EsnGrid& g) {
  j = {{"leaking_rates", g.leaking_rates},
       {"spectral_radii", g.spectral_radii},
       {"input_scalings", g.input_scalings},
       {"ridges", g.ridges}};
}

/// Missing keys keep their defaults.
inline void from_json(const nlohmann::json& j, EsnGrid& g) {
  g.leaking_rates = j.value("leaking_rates", g.leaking_rates);
  g.spectral_radii = j.value("spectral_radii", g.spectral_radii);
  g.input_scalings = j.value("input_scalings", g.input_scalings);
  g.ridges = j.value("ridges", g.ridges);
}

struct EsnPoint {
  double leaking_rate = 0.0;
  double spectral_radius = 0.0;
  double input_scaling = 0.0;
};

/// Grid points in nested order: leaking rate, then spectral radius, then
/// input scaling.
inline std::vector<EsnPoint> grid_points(const EsnGrid& g) {
  std::vector<EsnPoint> out;
  for (double a : g.leaking_rates) {
    for (double r : g.spectral_radii) {
      for (double s : g.input_scalings) out.push_back({a, r, s});
    }
  }
  return out;
}

struct EsnSweepOptions {
  std::int64_t n_units = 100;
  double density = 0.1;
  double bias_scaling = 0.1;
  std::int64_t max_in_degree = 100;
  std::vector<std::uint64_t> seeds{0};
  std::string difficulty;  // label copied into reports
  std::int64_t budget = 0;  // label copied into reports
  std::size_t threads = default_threads();
};

inline nlohmann::json esn_params(const EsnPoint& p, std::int64_t n_units) {
  return {{"leaking_rate", p.leaking_rate},
          {"spectral_radius", p.spectral_radius},
          {"input_scaling", p.input_scaling},
          {"n_units", n_units}};
}

/// Identity of one ESN run: dataset, model settings, grid point and seed.
inline std::string esn_run_hash(const Dataset& d, const EsnSweepOptions& o, const EsnGrid& g,
                                const EsnPoint& p, std::uint64_t seed) {
  nlohmann::json j = {{"model", "esn"},
                      {"config", config_to_json(d.config)},
                      {"dataset_seed", d.seed.value},
                      {"params", esn_params(p, o.n_units)},
                      {"density", o.density},
                      {"bias_scaling", o.bias_scaling},
                      {"max_in_degree", o.max_in_degree},
                      {"ridges", g.ridges},
                      {"budget", o.budget},
                      {"seed", seed}};
  return config_hash(j);
}

/// Builds, fits and scores one grid point. Failures are recorded in the
/// report's error field instead of thrown.
inline EvalReport esn_run_point(const Dataset& d, const ReservoirBase& base, const EsnGrid& g,
                                const EsnPoint& p, std::uint64_t seed,
                                const EsnSweepOptions& o) {
  EvalReport rep;
  rep.task = std::string(task_name(d.task()));
  rep.difficulty = o.difficulty;
  rep.model = "esn";
  rep.budget = o.budget;
  rep.seed = seed;
  rep.metric = std::string(metric_name(d.metric()));
  rep.params = esn_params(p, o.n_units);
  rep.config_hash = esn_run_hash(d, o, g, p, seed);
  try {
    const Reservoir r = scale_reservoir(base, p.leaking_rate, p.spectral_radius, p.input_scaling);
    const StateRows tr = collect_states(r, d.train);
    const StateRows va = collect_states(r, d.valid);
    const ReadoutSolution sol = fit_readout(tr, d.train, va, d.valid, d.metric(), g.ridges);
    const StateRows te = collect_states(r, d.test);
    const Eigen::MatrixXd pred = te.x * sol.w_out.transpose();
    rep.valid = SplitScore{sol.validation_score, sol.validation_steps};
    rep.test = score_rows(d.metric(), pred, d.test, te.offsets);
    rep.info["ridge"] = sol.ridge;
    rep.info["density"] = base.density;
    auto tried = nlohmann::json::array();
    for (const auto& [lambda, score] : sol.tried) tried.push_back({lambda, score});
    rep.info["valid_by_ridge"] = tried;
    if (!sol.warnings.empty()) rep.info["warnings"] = sol.warnings;
  } catch (const std::exception& e) {
    rep.valid.reset();
    rep.test.reset();
    rep.error = e.what();
  }
  return rep;
}

/// Runs every (seed, grid point) pair, skipping hashes listed in `skip`.
/// Reports come back in (seed, grid point) order regardless of threads.
inline std::vector<EvalReport> esn_sweep(
    const Dataset& d, const EsnGrid& g, const EsnSweepOptions& o,
    const std::function<bool(const std::string&)>& skip = {},
    const std::function<void(const EvalReport&)>& on_report = {}) {
  if (g.points() == 0 || g.ridges.empty()) throw std::invalid_argument("esn_sweep: empty grid");
  if (o.seeds.empty()) throw std::invalid_argument("esn_sweep: no seeds");
  const auto points = grid_points(g);
  struct Job {
    std::size_t seed_index;
    std::size_t point_index;
  };
  std::vector<Job> jobs;
  std::vector<bool> seed_needed(o.seeds.size(), false);
  for (std::size_t s = 0; s < o.seeds.size(); ++s) {
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (skip && skip(esn_run_hash(d, o, g, points[k], o.seeds[s]))) continue;
      jobs.push_back({s, k});
      seed_needed[s] = true;
    }
  }
  std::vector<std::optional<ReservoirBase>> bases(o.seeds.size());
  std::vector<std::string> base_errors(o.seeds.size());
  parallel_for(o.seeds.size(), o.threads, [&](std::size_t s) {
    if (!seed_needed[s]) return;
    try {
      bases[s] = build_reservoir_base(o.n_units, static_cast<std::int64_t>(d.d_in), o.density,
                                      o.bias_scaling, o.max_in_degree, o.seeds[s]);
    } catch (const std::exception& e) {
      base_errors[s] = e.what();
    }
  });
  std::vector<EvalReport> out(jobs.size());
  std::mutex report_mutex;
  parallel_for(jobs.size(), o.threads, [&](std::size_t j) {
    const auto [s, k] = jobs[j];
    if (bases[s]) {
      out[j] = esn_run_point(d, *bases[s], g, points[k], o.seeds[s], o);
    } else {
      EvalReport rep;
      rep.task = std::string(task_name(d.task()));
      rep.difficulty = o.difficulty;
      rep.model = "esn";
      rep.budget = o.budget;
      rep.seed = o.seeds[s];
      rep.metric = std::string(metric_name(d.metric()));
      rep.params = esn_params(points[k], o.n_units);
      rep.config_hash = esn_run_hash(d, o, g, points[k], o.seeds[s]);
      rep.error = base_errors[s];
      out[j] = std::move(rep);
    }
    if (on_report) {
      std::lock_guard lock(report_mutex);
      on_report(out[j]);
    }
  });
  return out;
}

}  // namespace cogscale

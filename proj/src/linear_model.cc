// Copyright 2026 The ArchLens Authors.
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

#include "archlens/linear_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "archlens/error.h"
#include "archlens/rng.h"
#include "binary_io.h"

namespace archlens {

namespace {

constexpr std::array<char, 4> kModelMagic = {'C', 'L', 'M', 'D'};
constexpr std::uint32_t kModelVersion = 1;

// Armijo sufficient-decrease constant for the line search.
constexpr double kArmijo = 1e-4;

double sign_of(Label label) { return label == Label::kDetective ? 1.0 : -1.0; }

// log(1 + exp(-m))
double logistic_loss(double margin) {
  if (margin > 0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

// 1 / (1 + exp(m))
double sigmoid_neg(double margin) {
  if (margin >= 0) {
    const double e = std::exp(-margin);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(margin));
}

void check_training_input(const Matrix &x, std::span<const Label> labels) {
  if (x.rows() == 0) throw Error("cannot train on an empty training set");
  if (labels.size() != x.rows()) {
    throw Error("label count " + std::to_string(labels.size()) +
                " does not match row count " + std::to_string(x.rows()));
  }
  const auto positives = std::count(labels.begin(), labels.end(), Label::kDetective);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(labels.size())) {
    throw Error("training data contains a single class");
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw Error("training features contain a non-finite value");
  }
}

LinearModel train_logreg(const Matrix &x, std::span<const Label> labels,
                         std::span<const double> weights,
                         const TrainConfig &config, TrainReport &report) {
  const std::size_t d = x.cols();
  LogisticObjective objective(x, labels, weights, config.l2_lambda);
  std::vector<double> params(d + 1, 0.0);
  std::vector<double> grad(d + 1);
  std::vector<double> trial(d + 1);

  double f = objective.gradient(params, grad);
  report.objective_trace.push_back(f);
  double step = 1.0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const double gnorm2 = std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
    if (gnorm2 == 0.0) {
      report.converged = true;
      break;
    }
    step *= 2.0;
    double f_trial = 0.0;
    while (true) {
      for (std::size_t j = 0; j <= d; ++j) trial[j] = params[j] - step * grad[j];
      f_trial = objective.value(trial);
      if (f_trial <= f - kArmijo * step * gnorm2) break;
      step *= 0.5;
      if (step < 1e-20) break;
    }
    if (step < 1e-20) {
      // No representable step decreases the objective any further.
      report.converged = true;
      break;
    }
    params.swap(trial);
    const double decrease = f - f_trial;
    f = objective.gradient(params, grad);
    report.objective_trace.push_back(f);
    report.epochs = epoch;
    if (decrease < config.tolerance) {
      report.converged = true;
      break;
    }
  }

  LinearModel model;
  model.kind = ModelKind::kLogReg;
  model.weights.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(d));
  model.bias = params[d];
  return model;
}

// Pegasos-style stochastic subgradient descent. The bias is handled as an
// extra constant-1 feature and regularized with the weights. The iterate is
// averaged from the second epoch on; the returned model is the epoch-end
// average with the lowest objective seen.
LinearModel train_svm(const Matrix &x, std::span<const Label> labels,
                      std::span<const double> weights, const TrainConfig &config,
                      TrainReport &report) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const double lambda = config.l2_lambda;
  const double radius = 1.0 / std::sqrt(lambda);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = sign_of(labels[i]);
  // Rescaled so the mean per-example weight is 1.
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = weights[i] * static_cast<double>(n) / wsum;

  std::vector<double> w(d + 1, 0.0);  // last slot is the bias
  std::vector<double> avg(d + 1, 0.0);
  std::vector<double> best(d + 1, 0.0);
  std::uint64_t averaged = 0;
  std::uint64_t t = 0;

  auto objective_of = [&](const std::vector<double> &v) {
    std::span<const double> vw(v.data(), d);
    return hinge_objective(x, labels, weights, lambda, vw, v[d]) +
           0.5 * lambda * v[d] * v[d];
  };

  double best_obj = objective_of(best);
  report.objective_trace.push_back(best_obj);
  double previous = best_obj;

  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      auto row = x.row(i);
      const double margin = y[i] * (dot(row, std::span<const double>(w.data(), d)) + w[d]);
      const double shrink = 1.0 - eta * lambda;
      for (double &v : w) v *= shrink;
      if (margin < 1.0) {
        const double g = eta * s[i] * y[i];
        for (std::size_t j = 0; j < d; ++j) w[j] += g * row[j];
        w[d] += g;
      }
      const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
      if (norm > radius) {
        const double scale = radius / norm;
        for (double &v : w) v *= scale;
      }
      if (epoch > 1) {
        ++averaged;
        const double inv = 1.0 / static_cast<double>(averaged);
        for (std::size_t j = 0; j <= d; ++j) avg[j] += (w[j] - avg[j]) * inv;
      }
    }

    const std::vector<double> &candidate = epoch > 1 ? avg : w;
    const double obj = objective_of(candidate);
    if (obj < best_obj) {
      best_obj = obj;
      best = candidate;
    }
    report.objective_trace.push_back(best_obj);
    report.epochs = epoch;
    if (epoch > 1 && std::abs(previous - obj) < config.tolerance) {
      report.converged = true;
      break;
    }
    previous = obj;
  }

  LinearModel model;
  model.kind = ModelKind::kLinearSvm;
  model.weights.assign(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(d));
  model.bias = best[d];
  return model;
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) {
  return kind == ModelKind::kLogReg ? "logreg" : "svm";
}

Scaler Scaler::fit(const Matrix &x) {
  Scaler s;
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += row[j];
  }
  for (double &m : s.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - s.mean[j];
      s.stddev[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(s.stddev[j] / static_cast<double>(n));
    // Rounding in the mean leaves constant columns with a tiny nonzero spread.
    const bool constant = sd <= 1e-12 * std::max(1.0, std::abs(s.mean[j]));
    s.stddev[j] = constant ? 1.0 : sd;
  }
  return s;
}

void Scaler::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - mean[j]) / stddev[j];
}

std::vector<double> sample_weights(std::span<const Label> labels,
                                   ClassWeighting weighting) {
  std::vector<double> out(labels.size(), 1.0);
  if (weighting == ClassWeighting::kNone) return out;
  const auto n = static_cast<double>(labels.size());
  const auto pos = static_cast<double>(
      std::count(labels.begin(), labels.end(), Label::kDetective));
  const double neg = n - pos;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double n_class = labels[i] == Label::kDetective ? pos : neg;
    out[i] = n / (2.0 * n_class);
  }
  return out;
}

LogisticObjective::LogisticObjective(const Matrix &x, std::span<const Label> labels,
                                     std::span<const double> weights,
                                     double l2_lambda)
    : x_(x),
      y_(labels.size()),
      weights_(weights.begin(), weights.end()),
      weight_sum_(std::accumulate(weights.begin(), weights.end(), 0.0)),
      l2_(l2_lambda) {
  for (std::size_t i = 0; i < labels.size(); ++i) y_[i] = sign_of(labels[i]);
}

double LogisticObjective::value(std::span<const double> params) const {
  const std::size_t d = x_.cols();
  std::span<const double> w = params.first(d);
  const double b = params[d];
  double loss = 0.0;
  for (std::size_t i = 0; i < x_.rows(); ++i) {
    loss += weights_[i] * logistic_loss(y_[i] * (dot(x_.row(i), w) + b));
  }
  return loss / weight_sum_ + 0.5 * l2_ * dot(w, w);
}

double LogisticObjective::gradient(std::span<const double> params,
                                   std::span<double> grad) const {
  const std::size_t d = x_.cols();
  std::span<const double> w = params.first(d);
  const double b = params[d];
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < x_.rows(); ++i) {
    auto row = x_.row(i);
    const double margin = y_[i] * (dot(row, w) + b);
    loss += weights_[i] * logistic_loss(margin);
    const double coef = -y_[i] * weights_[i] * sigmoid_neg(margin) / weight_sum_;
    if (coef == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) grad[j] += coef * row[j];
    grad[d] += coef;
  }
  for (std::size_t j = 0; j < d; ++j) grad[j] += l2_ * w[j];
  return loss / weight_sum_ + 0.5 * l2_ * dot(w, w);
}

double hinge_objective(const Matrix &x, std::span<const Label> labels,
                       std::span<const double> weights, double l2_lambda,
                       std::span<const double> w, double b) {
  double loss = 0.0;
  double wsum = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double margin = sign_of(labels[i]) * (dot(x.row(i), w) + b);
    loss += weights[i] * std::max(0.0, 1.0 - margin);
    wsum += weights[i];
  }
  return loss / wsum + 0.5 * l2_lambda * dot(w, w);
}

LinearModel train(const Matrix &features, std::span<const Label> labels,
                  const TrainConfig &config, TrainReport *report) {
  check_training_input(features, labels);
  if (!(config.l2_lambda > 0) || config.max_epochs <= 0 || !(config.tolerance > 0)) {
    throw Error("training configuration values must be positive");
  }

  std::optional<Scaler> scaler;
  Matrix scaled;
  const Matrix *x = &features;
  if (config.standardize.value_or(false)) {
    scaler = Scaler::fit(features);
    scaled = Matrix(features.rows(), features.cols());
    for (std::size_t i = 0; i < features.rows(); ++i) {
      scaler->apply(features.row(i), scaled.row(i));
    }
    x = &scaled;
  }

  const std::vector<double> weights = sample_weights(labels, config.class_weighting);
  TrainReport local;
  TrainReport &r = report != nullptr ? *report : local;
  r = TrainReport{};
  LinearModel model = config.kind == ModelKind::kLogReg
                          ? train_logreg(*x, labels, weights, config, r)
                          : train_svm(*x, labels, weights, config, r);
  model.scaler = std::move(scaler);
  return model;
}

double decision_score(const LinearModel &model, std::span<const double> x) {
  const std::size_t d = model.weights.size();
  if (x.size() != d) {
    throw Error("feature dimension " + std::to_string(x.size()) +
                " does not match model dimension " + std::to_string(d));
  }
  double score = model.bias;
  if (model.scaler) {
    for (std::size_t j = 0; j < d; ++j) {
      score += model.weights[j] * (x[j] - model.scaler->mean[j]) / model.scaler->stddev[j];
    }
  } else {
    score += dot(model.weights, x);
  }
  return score;
}

Label predict(const LinearModel &model, std::span<const double> x) {
  return decision_score(model, x) > 0.0 ? Label::kDetective : Label::kNonDetective;
}

void save_model(const LinearModel &model, std::ostream &out) {
  out.write(kModelMagic.data(), kModelMagic.size());
  binary::put<std::uint32_t>(out, kModelVersion);
  binary::put<std::uint8_t>(out, model.kind == ModelKind::kLogReg ? 0 : 1);
  binary::put<std::uint32_t>(out, static_cast<std::uint32_t>(model.weights.size()));
  for (double w : model.weights) binary::put_f64(out, w);
  binary::put_f64(out, model.bias);
  binary::put<std::uint8_t>(out, model.scaler ? 1 : 0);
  if (model.scaler) {
    for (double m : model.scaler->mean) binary::put_f64(out, m);
    for (double s : model.scaler->stddev) binary::put_f64(out, s);
  }
}

LinearModel load_model(std::istream &in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kModelMagic) {
    throw FormatError("not a model file (bad magic)");
  }
  binary::Reader reader(in, magic.size());
  const auto version = reader.get<std::uint32_t>("header");
  if (version != kModelVersion) {
    throw FormatError("unsupported model version " + std::to_string(version));
  }
  LinearModel model;
  const auto kind = reader.get<std::uint8_t>("header");
  if (kind > 1) throw CorruptionError(8, "unknown model kind");
  model.kind = kind == 0 ? ModelKind::kLogReg : ModelKind::kLinearSvm;
  const auto dim = reader.get<std::uint32_t>("header");
  model.weights.resize(dim);
  for (double &w : model.weights) w = reader.get_f64("weights");
  model.bias = reader.get_f64("bias");
  const auto has_scaler = reader.get<std::uint8_t>("scaler flag");
  if (has_scaler > 1) throw CorruptionError(reader.offset() - 1, "bad scaler flag");
  if (has_scaler == 1) {
    Scaler s;
    s.mean.resize(dim);
    s.stddev.resize(dim);
    for (double &m : s.mean) m = reader.get_f64("scaler mean");
    for (double &v : s.stddev) v = reader.get_f64("scaler std");
    model.scaler = std::move(s);
  }
  if (!reader.at_end()) {
    throw CorruptionError(reader.offset(), "trailing bytes after model");
  }
  return model;
}

void save_model(const LinearModel &model, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  save_model(model, out);
}

LinearModel load_model(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");
  return load_model(in);
}

}  // namespace archlens

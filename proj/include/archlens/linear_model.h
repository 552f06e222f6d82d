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

// Binary linear classifiers: L2-regularized logistic regression trained by
// full-batch gradient descent with backtracking line search, and a linear
// SVM trained by epoch-ordered subgradient descent with an averaged iterate.
// Detective is the positive class (+1).

#ifndef ARCHLENS_LINEAR_MODEL_H_
#define ARCHLENS_LINEAR_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "archlens/dataset.h"
#include "archlens/matrix.h"

namespace archlens {

enum class ModelKind { kLogReg, kLinearSvm };
enum class ClassWeighting { kNone, kInverseFrequency };

std::string_view model_kind_name(ModelKind kind);

// Per-feature standardization fitted on training rows.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // zero-variance features get 1

  static Scaler fit(const Matrix &x);
  void apply(std::span<const double> in, std::span<double> out) const;

  bool operator==(const Scaler &) const = default;
};

struct TrainConfig {
  ModelKind kind = ModelKind::kLogReg;
  double l2_lambda = 1e-2;
  int max_epochs = 500;
  // Stop when one epoch lowers the objective by less than this.
  double tolerance = 1e-6;
  std::uint64_t seed = 42;
  ClassWeighting class_weighting = ClassWeighting::kInverseFrequency;
  // Unset means "use the pipeline default" (see resolve_scaling); train()
  // itself treats unset as off.
  std::optional<bool> standardize;
};

struct LinearModel {
  ModelKind kind = ModelKind::kLogReg;
  std::vector<double> weights;
  double bias = 0.0;
  std::optional<Scaler> scaler;

  bool operator==(const LinearModel &) const = default;
};

struct TrainReport {
  // Objective of the model that would be returned, recorded after
  // initialization and after every epoch.
  std::vector<double> objective_trace;
  int epochs = 0;
  bool converged = false;
};

// Throws Error when only one class is present, rows are empty, or a feature
// is non-finite.
LinearModel train(const Matrix &features, std::span<const Label> labels,
                  const TrainConfig &config, TrainReport *report = nullptr);

// w . scale(x) + b. Throws Error on a dimension mismatch.
double decision_score(const LinearModel &model, std::span<const double> x);

// Detective iff the score is strictly positive.
Label predict(const LinearModel &model, std::span<const double> x);

// Per-example weights. With inverse-frequency weighting each class gets
// n / (2 * n_class); otherwise every weight is 1.
std::vector<double> sample_weights(std::span<const Label> labels,
                                   ClassWeighting weighting);

// Weighted mean logistic loss plus (lambda / 2) |w|^2 over params = [w..., b].
// The bias is not regularized.
class LogisticObjective {
 public:
  LogisticObjective(const Matrix &x, std::span<const Label> labels,
                    std::span<const double> weights, double l2_lambda);

  double value(std::span<const double> params) const;
  // Writes the gradient into `grad` and returns the objective value.
  double gradient(std::span<const double> params, std::span<double> grad) const;

 private:
  const Matrix &x_;
  std::vector<double> y_;
  std::vector<double> weights_;
  double weight_sum_;
  double l2_;
};

// Weighted mean hinge loss plus (lambda / 2) |w|^2.
double hinge_objective(const Matrix &x, std::span<const Label> labels,
                       std::span<const double> weights, double l2_lambda,
                       std::span<const double> w, double b);

// Versioned little-endian binary: "CLMD" | u32 version | u8 kind | u32 dim |
// dim x f64 weights | f64 bias | u8 has_scaler | [dim x f64 mean, dim x f64 std].
void save_model(const LinearModel &model, std::ostream &out);
LinearModel load_model(std::istream &in);
void save_model(const LinearModel &model, const std::filesystem::path &path);
LinearModel load_model(const std::filesystem::path &path);

}  // namespace archlens

#endif  // ARCHLENS_LINEAR_MODEL_H_

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

#include "archlens/clustering.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "archlens/csv.h"
#include "archlens/error.h"
#include "archlens/parallel.h"
#include "archlens/rng.h"
#include "archlens/text.h"

namespace archlens {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<int> nearest_centroids(const Matrix &x, const Matrix &centroids) {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(x.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        best_k = static_cast<int>(c);
      }
    }
    out[i] = best_k;
  }
  return out;
}

Matrix seed_plus_plus(const Matrix &x, std::size_t k, Rng &rng) {
  const std::size_t n = x.rows();
  Matrix centroids(k, x.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy_n(x.row(pick).begin(), x.cols(), centroids.row(c).begin());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x.row(i), centroids.row(c)));
      total += d2[i];
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      // Every point coincides with a chosen centre.
      pick = rng.below(n);
      continue;
    }
    double target = rng.uniform() * total;
    pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= d2[i];
      if (target < 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  return centroids;
}

// Centroids as member means. Empty clusters take the point farthest from its
// current centroid (among points whose cluster keeps at least one member).
void update_centroids(const Matrix &x, std::vector<int> &assignments,
                      Matrix &centroids) {
  const std::size_t k = centroids.rows();
  const std::size_t d = x.cols();
  std::vector<std::size_t> sizes(k, 0);
  Matrix sums(k, d);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto c = static_cast<std::size_t>(assignments[i]);
    ++sizes[c];
    auto src = x.row(i);
    auto dst = sums.row(c);
    for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] == 0) continue;
    auto dst = centroids.row(c);
    auto src = sums.row(c);
    for (std::size_t j = 0; j < d; ++j) dst[j] = src[j] / static_cast<double>(sizes[c]);
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    double far = -1.0;
    std::size_t far_i = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto own = static_cast<std::size_t>(assignments[i]);
      if (sizes[own] < 2) continue;
      const double dist = squared_distance(x.row(i), centroids.row(own));
      if (dist > far) {
        far = dist;
        far_i = i;
      }
    }
    --sizes[static_cast<std::size_t>(assignments[far_i])];
    assignments[far_i] = static_cast<int>(c);
    sizes[c] = 1;
    std::copy_n(x.row(far_i).begin(), d, centroids.row(c).begin());
  }
}

ClusterResult run_lloyd(const Matrix &x, const KMeansOptions &options, Rng &rng) {
  ClusterResult r;
  r.centroids = seed_plus_plus(x, options.k, rng);
  r.assignments = nearest_centroids(x, r.centroids);
  r.inertia_trace.push_back(inertia_of(x, r.assignments, r.centroids));
  for (int it = 1; it <= options.max_iterations; ++it) {
    std::vector<int> previous = r.assignments;
    update_centroids(x, r.assignments, r.centroids);
    r.assignments = nearest_centroids(x, r.centroids);
    r.inertia_trace.push_back(inertia_of(x, r.assignments, r.centroids));
    r.iterations = it;
    if (r.assignments == previous) break;
  }
  // Final centroids are the exact means of the final assignment.
  update_centroids(x, r.assignments, r.centroids);
  r.inertia = inertia_of(x, r.assignments, r.centroids);
  if (r.inertia < r.inertia_trace.back()) r.inertia_trace.push_back(r.inertia);
  return r;
}

double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

PcaResult pca_project(const Matrix &x, std::size_t out_dim) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (out_dim == 0 || out_dim > d) throw Error("invalid projection dimension");
  if (n < out_dim || n < 2) {
    throw Error("projection needs at least " + std::to_string(std::max<std::size_t>(out_dim, 2)) +
                " rows");
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw Error("projection input contains a non-finite value");
  }

  Eigen::Map<const RowMatrix> raw(x.data().data(), static_cast<Eigen::Index>(n),
                                  static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = raw.colwise().mean();
  const RowMatrix centred = raw.rowwise() - mean;
  const double dof = static_cast<double>(n - 1);
  const double total = centred.squaredNorm() / dof;
  if (!(total > 0.0)) throw Error("projection input has zero variance");

  PcaResult result;
  result.mean.assign(mean.data(), mean.data() + d);
  result.total_variance = total;
  result.components = Matrix(out_dim, d);
  result.explained_variance.assign(out_dim, 0.0);

  if (d <= n) {
    const Eigen::MatrixXd cov = (centred.transpose() * centred) / dof;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    for (std::size_t c = 0; c < out_dim; ++c) {
      const auto col = static_cast<Eigen::Index>(d - 1 - c);
      result.explained_variance[c] = std::max(0.0, eig.eigenvalues()(col));
      for (std::size_t j = 0; j < d; ++j) {
        result.components(c, j) = eig.eigenvectors()(static_cast<Eigen::Index>(j), col);
      }
    }
  } else {
    // Fewer rows than columns: work on the n x n Gram matrix instead.
    const Eigen::MatrixXd gram = centred * centred.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const double top = eig.eigenvalues()(static_cast<Eigen::Index>(n - 1));
    for (std::size_t c = 0; c < out_dim; ++c) {
      const auto col = static_cast<Eigen::Index>(n - 1 - c);
      const double mu = eig.eigenvalues()(col);
      if (mu <= 1e-12 * top) continue;  // rank exhausted; leave a zero axis
      result.explained_variance[c] = mu / dof;
      const Eigen::VectorXd axis =
          centred.transpose() * eig.eigenvectors().col(col) / std::sqrt(mu);
      for (std::size_t j = 0; j < d; ++j) {
        result.components(c, j) = axis(static_cast<Eigen::Index>(j));
      }
    }
  }

  for (std::size_t c = 0; c < out_dim; ++c) {
    auto axis = result.components.row(c);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (std::abs(axis[j]) > std::abs(axis[arg])) arg = j;
    }
    if (axis[arg] < 0) {
      for (double &v : axis) v = -v;
    }
  }

  result.coords = Matrix(n, out_dim);
  std::vector<double> row(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) row[j] = x(i, j) - result.mean[j];
    for (std::size_t c = 0; c < out_dim; ++c) {
      result.coords(i, c) = dot(row, result.components.row(c));
    }
  }
  return result;
}

double inertia_of(const Matrix &x, std::span<const int> assignments,
                  const Matrix &centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    total += squared_distance(x.row(i),
                              centroids.row(static_cast<std::size_t>(assignments[i])));
  }
  return total;
}

ClusterResult kmeans(const Matrix &x, const KMeansOptions &options,
                     std::size_t threads) {
  if (options.k < 1 || options.k > x.rows()) {
    throw Error("k-means needs 1 <= k <= rows (k=" + std::to_string(options.k) +
                ", rows=" + std::to_string(x.rows()) + ")");
  }
  if (options.restarts < 1 || options.max_iterations < 1) {
    throw Error("k-means restarts and iterations must be positive");
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw Error("k-means input contains a non-finite value");
  }
  std::vector<ClusterResult> runs(static_cast<std::size_t>(options.restarts));
  parallel_for(
      runs.size(),
      [&](std::size_t r) {
        Rng rng(derive_seed(options.seed, r));
        runs[r] = run_lloyd(x, options, rng);
        runs[r].restart = static_cast<int>(r);
      },
      threads);
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  return std::move(runs[best]);
}

void canonicalize_by_year(ClusterResult &result, std::span<const int> years) {
  const std::size_t k = result.centroids.rows();
  if (years.size() != result.assignments.size()) {
    throw Error("one year is needed per clustered row");
  }
  std::vector<double> sum(k, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < years.size(); ++i) {
    const auto c = static_cast<std::size_t>(result.assignments[i]);
    sum[c] += years[i];
    ++count[c];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto mean_of = [&](std::size_t c) {
    return count[c] == 0 ? std::numeric_limits<double>::infinity()
                         : sum[c] / static_cast<double>(count[c]);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mean_of(a) < mean_of(b); });
  std::vector<int> relabel(k);
  Matrix centroids(k, result.centroids.cols());
  for (std::size_t pos = 0; pos < k; ++pos) {
    relabel[order[pos]] = static_cast<int>(pos);
    std::copy_n(result.centroids.row(order[pos]).begin(), centroids.cols(),
                centroids.row(pos).begin());
  }
  for (int &a : result.assignments) a = relabel[static_cast<std::size_t>(a)];
  result.centroids = std::move(centroids);
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error("label vectors differ in length");
  const double n = static_cast<double>(a.size());
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows;
  std::map<int, double> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0;
  for (const auto &[key, v] : joint) index += choose2(v);
  double sum_rows = 0.0;
  for (const auto &[key, v] : rows) sum_rows += choose2(v);
  double sum_cols = 0.0;
  for (const auto &[key, v] : cols) sum_cols += choose2(v);
  const double expected = n < 2 ? 0.0 : sum_rows * sum_cols / choose2(n);
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

std::vector<ClusterVocabulary> cluster_vocabulary(const Dataset &dataset,
                                                  std::span<const std::string> ids,
                                                  std::span<const int> assignments,
                                                  std::size_t k, std::size_t k_top,
                                                  const CategorySet &categories) {
  if (ids.size() != assignments.size()) {
    throw Error("one cluster assignment is needed per character id");
  }
  std::vector<std::size_t> sizes(k, 0);
  for (int a : assignments) {
    if (a < 0 || static_cast<std::size_t>(a) >= k) throw Error("cluster index out of range");
    ++sizes[static_cast<std::size_t>(a)];
  }
  std::vector<ClusterVocabulary> out;
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] == 0) throw Error("cluster " + std::to_string(c) + " is empty");
    Partition partition;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      partition[ids[i]] = static_cast<std::size_t>(assignments[i]) == c ? 1 : 2;
    }
    const DistinctivenessTable table = group_distinctiveness(dataset, partition, categories);
    ClusterVocabulary cv{static_cast<int>(c), sizes[c], {}};
    for (Category cat : categories.members()) {
      auto rows = rows_in_category(table, cat);
      if (rows.empty()) continue;
      auto top = top_attributes(rows, k_top, Sign::kPositive);
      cv.rows.insert(cv.rows.end(), top.begin(), top.end());
    }
    out.push_back(std::move(cv));
  }
  return out;
}

std::map<std::string, std::pair<double, double>> read_coords_csv(std::istream &in) {
  CsvReader reader(in);
  const std::size_t id_col = reader.column("character_id");
  const std::size_t x_col = reader.column("x");
  const std::size_t y_col = reader.column("y");
  std::map<std::string, std::pair<double, double>> coords;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    std::string id(trim(fields[id_col]));
    const double x = parse_double_field(fields[x_col], "x", reader.line());
    const double y = parse_double_field(fields[y_col], "y", reader.line());
    if (!coords.emplace(id, std::make_pair(x, y)).second) {
      throw ParseError(reader.line(), "duplicate character_id '" + id + "'");
    }
  }
  return coords;
}

void write_assignments_csv(std::span<const AssignmentRow> rows, std::ostream &out) {
  write_csv_row(out, {"character_id", "cluster", "year", "x", "y"});
  for (const AssignmentRow &r : rows) {
    write_csv_row(out, {r.character_id, std::to_string(r.cluster), std::to_string(r.year),
                        format_double(r.x), format_double(r.y)});
  }
}

void write_cluster_vocabulary_csv(std::span<const ClusterVocabulary> clusters,
                                  std::ostream &out) {
  write_csv_row(out, {"cluster", "category", "lemma", "c1", "c2", "n1", "n2", "raw_z",
                      "normalized_z"});
  for (const ClusterVocabulary &cv : clusters) {
    for (const DistinctivenessRow &r : cv.rows) {
      write_csv_row(out, {std::to_string(cv.cluster), category_name(r.category), r.lemma,
                          std::to_string(r.counts.c1), std::to_string(r.counts.c2),
                          std::to_string(r.counts.n1), std::to_string(r.counts.n2),
                          format_double(r.raw_z), format_double(r.normalized_z)});
    }
  }
}

}  // namespace archlens

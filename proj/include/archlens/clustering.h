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

#ifndef ARCHLENS_CLUSTERING_H_
#define ARCHLENS_CLUSTERING_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "archlens/dataset.h"
#include "archlens/distinctiveness.h"
#include "archlens/matrix.h"

namespace archlens {

struct PcaResult {
  Matrix coords;       // rows x out_dim
  Matrix components;   // out_dim x cols, unit rows
  std::vector<double> mean;
  std::vector<double> explained_variance;  // per component, sample variance
  double total_variance = 0.0;
};

// Projects mean-centred rows onto the top `out_dim` principal axes. Each
// axis is signed so that its largest-magnitude loading is positive. Throws
// Error on fewer than out_dim rows, non-finite input, or zero variance.
PcaResult pca_project(const Matrix &x, std::size_t out_dim = 2);

struct KMeansOptions {
  std::size_t k = 3;
  std::uint64_t seed = 42;
  int restarts = 10;
  int max_iterations = 300;
};

struct ClusterResult {
  std::vector<int> assignments;  // per row, in [0, k)
  Matrix centroids;              // k x cols
  double inertia = 0.0;          // sum of squared distances to centroids
  // Inertia after every assignment step of the selected run.
  std::vector<double> inertia_trace;
  int iterations = 0;
  int restart = 0;               // which restart produced this result
};

// k-means++ seeding and Lloyd iterations until the assignment stops changing
// or max_iterations is reached. An emptied cluster is reseeded with the
// point farthest from its centroid. The best of `restarts` runs by
// (inertia, restart index) is returned; restarts may run concurrently.
// Throws Error when k < 1 or k > rows.
ClusterResult kmeans(const Matrix &x, const KMeansOptions &options,
                     std::size_t threads = 0);

// Relabels clusters by ascending mean of `years` over their members (ties
// keep the previous order).
void canonicalize_by_year(ClusterResult &result, std::span<const int> years);

// Sum over rows of the squared distance to the assigned centroid.
double inertia_of(const Matrix &x, std::span<const int> assignments,
                  const Matrix &centroids);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct ClusterVocabulary {
  int cluster = 0;
  std::size_t members = 0;
  std::vector<DistinctivenessRow> rows;  // top positive rows, per category
};

// One-vs-rest distinctiveness for each cluster: members are group 1, the
// other clustered characters group 2. Keeps the top `k_top` strictly positive
// rows of each category. `ids` is aligned with `assignments`. Throws Error on
// an empty cluster.
std::vector<ClusterVocabulary> cluster_vocabulary(const Dataset &dataset,
                                                  std::span<const std::string> ids,
                                                  std::span<const int> assignments,
                                                  std::size_t k, std::size_t k_top,
                                                  const CategorySet &categories);

// CSV `character_id,x,y`.
std::map<std::string, std::pair<double, double>> read_coords_csv(std::istream &in);

struct AssignmentRow {
  std::string character_id;
  int cluster = 0;
  int year = 0;
  double x = 0.0;
  double y = 0.0;
};

// CSV `character_id,cluster,year,x,y`.
void write_assignments_csv(std::span<const AssignmentRow> rows, std::ostream &out);

// CSV `cluster,category,lemma,c1,c2,n1,n2,raw_z,normalized_z`.
void write_cluster_vocabulary_csv(std::span<const ClusterVocabulary> clusters,
                                  std::ostream &out);

}  // namespace archlens

#endif  // ARCHLENS_CLUSTERING_H_

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

#include "archlens/diachronic.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "archlens/error.h"

namespace archlens {

namespace {

// Fits y on the first `degree + 1` powers of the normalized abscissa
// u = (x - centre) / scale. Returns coefficients in u for powers 0..degree.
Eigen::VectorXd fit_normalized(std::span<const std::pair<double, double>> points,
                               int degree, double centre, double scale) {
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(m, degree + 1);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double u = (points[static_cast<std::size_t>(i)].first - centre) / scale;
    double power = 1.0;
    for (int k = 0; k <= degree; ++k) {
      design(i, k) = power;
      power *= u;
    }
    y(i) = points[static_cast<std::size_t>(i)].second;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < degree + 1) throw Error("rank-deficient least-squares design");
  Eigen::VectorXd coef = qr.solve(y);
  // Two rounds of refinement with residuals accumulated in long double; year
  // abscissae make the intercept a small difference of large terms.
  for (int round = 0; round < 2; ++round) {
    Eigen::VectorXd residual(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      long double r = y(i);
      for (int k = 0; k <= degree; ++k) {
        r -= static_cast<long double>(design(i, k)) * coef(k);
      }
      residual(i) = static_cast<double>(r);
    }
    coef += qr.solve(residual);
  }
  return coef;
}

void require_distinct_x(std::span<const std::pair<double, double>> points,
                        std::size_t needed) {
  std::set<double> xs;
  for (const auto &[x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw Error("trend points must be finite");
    }
    xs.insert(x);
  }
  if (xs.size() < needed) {
    throw Error("fit needs at least " + std::to_string(needed) +
                " distinct x values, found " + std::to_string(xs.size()));
  }
}

std::pair<double, double> centre_and_scale(
    std::span<const std::pair<double, double>> points) {
  double centre = 0.0;
  for (const auto &p : points) centre += p.first;
  centre /= static_cast<double>(points.size());
  double scale = 0.0;
  for (const auto &p : points) scale = std::max(scale, std::abs(p.first - centre));
  return {centre, scale};
}

}  // namespace

Dataset select_top_characters(const Dataset &dataset, std::size_t k) {
  if (k == 0) throw Error("top-k selection needs k >= 1");
  std::map<std::string, std::vector<std::size_t>> by_novel;
  for (std::size_t i = 0; i < dataset.characters.size(); ++i) {
    by_novel[dataset.characters[i].novel_id].push_back(i);
  }
  std::vector<bool> keep(dataset.characters.size(), false);
  for (auto &[novel, rows] : by_novel) {
    std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      const CharacterRecord &ca = dataset.characters[a];
      const CharacterRecord &cb = dataset.characters[b];
      if (ca.mention_count != cb.mention_count) return ca.mention_count > cb.mention_count;
      return ca.character_id < cb.character_id;
    });
    for (std::size_t i = 0; i < std::min(k, rows.size()); ++i) keep[rows[i]] = true;
  }
  Dataset out;
  out.embeddings = dataset.embeddings;
  for (std::size_t i = 0; i < dataset.characters.size(); ++i) {
    if (keep[i]) out.characters.push_back(dataset.characters[i]);
  }
  return out;
}

TrendSeries ratio_series(const Dataset &dataset, std::span<const Label> predicted,
                         int bin_width_years) {
  if (predicted.size() != dataset.characters.size()) {
    throw Error("one predicted label is needed per character");
  }
  std::map<int, std::pair<std::int64_t, std::int64_t>> bins;  // detectives, all
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    auto &[detectives, all] = bins[bin_start(dataset.characters[i].year, bin_width_years)];
    if (predicted[i] == Label::kDetective) ++detectives;
    ++all;
  }
  TrendSeries series;
  for (const auto &[start, c] : bins) {
    series.points.push_back(
        {start, static_cast<double>(c.first) / static_cast<double>(c.second), c.second});
  }
  return series;
}

CentralityResult mention_ratios(const Dataset &dataset) {
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> novels;  // sum, count
  for (const CharacterRecord &c : dataset.characters) {
    auto &[sum, count] = novels[c.novel_id];
    sum += c.mention_count;
    ++count;
  }
  CentralityResult result;
  for (const auto &[novel, stats] : novels) {
    if (stats.first == 0) {
      result.warnings.push_back("novel '" + novel +
                                "' excluded: all retained characters have zero mentions");
    }
  }
  for (const CharacterRecord &c : dataset.characters) {
    const auto &[sum, count] = novels[c.novel_id];
    if (sum == 0) continue;
    // count * mentions / sum is the ratio to the mean without forming the
    // mean first.
    const double ratio = static_cast<double>(count) * static_cast<double>(c.mention_count) /
                         static_cast<double>(sum);
    result.records.push_back({c.character_id, c.novel_id, c.year, ratio});
  }
  return result;
}

TrendSeries centrality_series(const Dataset &dataset,
                              const std::unordered_set<std::string> &detective_ids,
                              int bin_width_years, std::vector<std::string> *warnings) {
  CentralityResult ratios = mention_ratios(dataset);
  if (warnings != nullptr) {
    warnings->insert(warnings->end(), ratios.warnings.begin(), ratios.warnings.end());
  }
  std::map<int, std::pair<double, std::int64_t>> bins;  // sum of ratios, count
  for (const CentralityRecord &r : ratios.records) {
    if (!detective_ids.contains(r.character_id)) continue;
    auto &[sum, count] = bins[bin_start(r.year, bin_width_years)];
    sum += r.mention_ratio;
    ++count;
  }
  TrendSeries series;
  for (const auto &[start, b] : bins) {
    series.points.push_back({start, b.first / static_cast<double>(b.second), b.second});
  }
  return series;
}

Quadratic quadratic_fit(std::span<const std::pair<double, double>> points) {
  require_distinct_x(points, 3);
  const auto [m, s] = centre_and_scale(points);
  const Eigen::VectorXd coef = fit_normalized(points, 2, m, s);
  const long double gamma = coef(0);
  const long double beta = coef(1);
  const long double alpha = coef(2);
  const long double lm = m;
  const long double ls = s;
  // Expand alpha u^2 + beta u + gamma with u = (x - m) / s.
  Quadratic q;
  q.a = static_cast<double>(alpha / (ls * ls));
  q.b = static_cast<double>(beta / ls - 2 * alpha * lm / (ls * ls));
  q.c = static_cast<double>(alpha * lm * lm / (ls * ls) - beta * lm / ls + gamma);
  return q;
}

Quadratic linear_fit(std::span<const std::pair<double, double>> points) {
  require_distinct_x(points, 2);
  const auto [m, s] = centre_and_scale(points);
  const Eigen::VectorXd coef = fit_normalized(points, 1, m, s);
  Quadratic q;
  q.b = coef(1) / s;
  q.c = static_cast<double>(static_cast<long double>(coef(0)) -
                            static_cast<long double>(coef(1)) * m / s);
  return q;
}

double residual_sum_of_squares(const Quadratic &fit,
                               std::span<const std::pair<double, double>> points) {
  double rss = 0.0;
  for (const auto &[x, y] : points) {
    const double r = y - fit(x);
    rss += r * r;
  }
  return rss;
}

std::vector<std::pair<double, double>> series_points(const TrendSeries &series) {
  std::vector<std::pair<double, double>> out;
  out.reserve(series.points.size());
  for (const TrendPoint &p : series.points) {
    out.emplace_back(static_cast<double>(p.bin_start), p.value);
  }
  return out;
}

}  // namespace archlens

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


#include "archlens/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "CLI11.hpp"
#include "archlens/chart.h"
#include "archlens/clustering.h"
#include "archlens/csv.h"
#include "archlens/dataset.h"
#include "archlens/diachronic.h"
#include "archlens/distinctiveness.h"
#include "archlens/error.h"
#include "archlens/evaluation.h"
#include "archlens/featurize.h"
#include "archlens/linear_model.h"
#include "archlens/parallel.h"
#include "archlens/synthetic.h"
#include "archlens/text.h"
#include "archlens/trend.h"

namespace archlens {

namespace {

namespace fs = std::filesystem;

using Action = std::function<int()>;

// ---------------------------------------------------------------------------
// Plumbing shared by the commands.

void require_readable(const std::string &path) {
  if (path.empty()) return;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
}

void prepare_output_dir(const std::string &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw FormatError("cannot create output directory '" + dir + "'");
  }
}

void write_file(const fs::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

template <typename Writer>
void emit(const fs::path &path, Writer &&writer) {
  std::ostringstream buffer;
  writer(buffer);
  write_file(path, buffer.str());
}

CategorySet parse_categories(const std::string &text) {
  if (trim(text) == "all") return CategorySet::all();
  return parse_category_set(text);
}

struct DataPaths {
  std::string characters;
  std::string embeddings;
  std::string labels;

  void validate() const {
    require_readable(characters);
    require_readable(embeddings);
    require_readable(labels);
  }
};

void add_data_options(CLI::App *cmd, DataPaths &paths, const std::string &prefix,
                      bool embeddings_required) {
  cmd->add_option("--" + prefix + "characters", paths.characters,
                  "Characters file (one JSON object per line)")
      ->required();
  auto *emb = cmd->add_option("--" + prefix + "embeddings", paths.embeddings,
                              "Binary embeddings file (CEMB)");
  if (embeddings_required) emb->required();
  cmd->add_option("--" + prefix + "labels", paths.labels,
                  "Optional CSV character_id,label overriding gold labels");
}

Dataset load_dataset(const DataPaths &paths, std::ostream &err) {
  std::vector<std::string> warnings;
  Dataset dataset = load_characters(paths.characters, &warnings);
  for (const std::string &w : warnings) err << "warning: " << w << '\n';
  if (!paths.labels.empty()) {
    std::ifstream in(paths.labels);
    if (!in) throw FormatError("cannot open '" + paths.labels + "' for reading");
    apply_labels(dataset, in);
  }
  if (!paths.embeddings.empty()) dataset.embeddings = read_embeddings(paths.embeddings);
  return dataset;
}

struct ModelFlags {
  std::string features = "emb";
  std::string model = "svm";
  std::size_t vocab_size = 1000;
  std::string categories = "agent_verbs,modifiers,possessives";
  double lambda = 1e-2;
  int epochs = 500;
  std::string standardize = "on";
  std::uint64_t seed = 42;

  FeatureSpec feature_spec() const {
    FeatureSpec spec;
    spec.kind = features == "bow" ? FeatureKind::kBoW : FeatureKind::kEmbedding;
    spec.vocab_size = vocab_size;
    spec.categories = parse_categories(categories);
    return spec;
  }

  TrainConfig train_config() const {
    TrainConfig config;
    config.kind = model == "logreg" ? ModelKind::kLogReg : ModelKind::kLinearSvm;
    config.l2_lambda = lambda;
    config.max_epochs = epochs;
    config.standardize = standardize == "on";
    config.seed = seed;
    return config;
  }
};

void add_model_options(CLI::App *cmd, ModelFlags &flags) {
  cmd->add_option("--features", flags.features, "Feature kind")
      ->check(CLI::IsMember({"bow", "emb"}))
      ->capture_default_str();
  cmd->add_option("--model", flags.model, "Classifier")
      ->check(CLI::IsMember({"logreg", "svm"}))
      ->capture_default_str();
  cmd->add_option("--vocab-size", flags.vocab_size, "Bag-of-words vocabulary size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--categories", flags.categories,
                  "Attribute categories for bag-of-words features, comma separated, or 'all'")
      ->capture_default_str();
  cmd->add_option("--lambda", flags.lambda, "L2 regularization strength")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--epochs", flags.epochs, "Maximum training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--standardize", flags.standardize,
                  "Scale features to zero mean and unit variance on the training rows")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Seed for every random choice")->capture_default_str();
}

ChartOptions chart(std::string title, std::string x_label, std::string y_label) {
  ChartOptions o;
  o.title = std::move(title);
  o.x_label = std::move(x_label);
  o.y_label = std::move(y_label);
  return o;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateFlags {
  DataPaths data;
  int min_year = 1700;
  int max_year = 2100;
};

int run_validate(const ValidateFlags &f, std::ostream &out, std::ostream &err) {
  f.data.validate();
  const Dataset dataset = load_dataset(f.data, err);
  const auto findings = validate_dataset(dataset, {f.min_year, f.max_year});
  for (const Finding &finding : findings) {
    out << finding.character_id << ": " << finding.reason << '\n';
  }
  if (findings.empty()) {
    out << "ok: " << dataset.characters.size() << " characters\n";
    return kExitOk;
  }
  return kExitFindings;
}

// ---------------------------------------------------------------------------
// eval

struct EvalFlags {
  DataPaths data;
  ModelFlags model;
  std::string scheme = "stratified:5";
  int error_bin_width = 10;
  std::string out_dir;
};

int run_eval(const EvalFlags &f, std::ostream &out, std::ostream &err) {
  const Scheme scheme = parse_scheme(f.scheme);
  const FeatureSpec spec = f.model.feature_spec();
  const TrainConfig config = f.model.train_config();
  f.data.validate();
  prepare_output_dir(f.out_dir);

  const Dataset dataset = load_dataset(f.data, err);
  if (spec.kind == FeatureKind::kEmbedding && !dataset.embeddings) {
    throw UsageError("--features emb needs --embeddings");
  }
  const SplitPlan plan = make_splits(dataset, scheme, f.model.seed);
  const CvResult cv = cross_validate(dataset, spec, config, plan, default_thread_count());

  const fs::path dir(f.out_dir);
  const std::vector<std::string> header = {
      "features=" + std::string(feature_kind_name(spec.kind)),
      "model=" + std::string(model_kind_name(config.kind)),
      "scheme=" + scheme_name(scheme),
      "standardize=" + f.model.standardize,
      "seed=" + std::to_string(f.model.seed),
  };
  emit(dir / "report.txt", [&](std::ostream &s) { write_report(cv.report, header, s); });
  emit(dir / "folds.csv", [&](std::ostream &s) { write_fold_metrics_csv(cv.report, s); });
  emit(dir / "predictions.csv",
       [&](std::ostream &s) { write_predictions_csv(cv.predictions, s); });
  emit(dir / "error_over_time.csv", [&](std::ostream &s) {
    write_series_csv(error_over_time(cv.predictions, f.error_bin_width), s);
  });
  out << "balanced_accuracy=" << format_double(cv.report.pooled.balanced_accuracy) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// detect

struct DetectFlags {
  DataPaths train;
  DataPaths corpus;
  ModelFlags model;
  std::size_t top_k = 10;
  int bin_width = 5;
  std::string out_dir;
  std::string svg;
};

int run_detect(const DetectFlags &f, std::ostream &out, std::ostream &err) {
  const FeatureSpec spec = f.model.feature_spec();
  const TrainConfig config = resolve_scaling(f.model.train_config());
  f.train.validate();
  f.corpus.validate();
  prepare_output_dir(f.out_dir);

  const Dataset train_set = load_dataset(f.train, err);
  const Dataset corpus = load_dataset(f.corpus, err);
  if (corpus.characters.empty()) throw Error("corpus has no characters");
  if (spec.kind == FeatureKind::kEmbedding && (!train_set.embeddings || !corpus.embeddings)) {
    throw UsageError("--features emb needs training and corpus embeddings");
  }

  const std::vector<std::size_t> rows = labeled_rows(train_set);
  if (rows.empty()) throw Error("training data has no labeled characters");
  const Featurizer featurizer = Featurizer::fit(spec, train_set, rows);
  std::vector<Label> labels;
  for (std::size_t r : rows) labels.push_back(*train_set.characters[r].label);
  const LinearModel model = train(featurizer.transform(train_set, rows), labels, config);

  const Dataset retained = select_top_characters(corpus, f.top_k);
  std::vector<std::size_t> all(retained.characters.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Matrix x = featurizer.transform(retained, all);

  std::vector<Label> predicted;
  std::unordered_set<std::string> detectives;
  const fs::path dir(f.out_dir);
  emit(dir / "predictions.csv", [&](std::ostream &s) {
    write_csv_row(s, {"character_id", "novel_id", "year", "score", "label"});
    for (std::size_t i = 0; i < all.size(); ++i) {
      const CharacterRecord &c = retained.characters[i];
      const double score = decision_score(model, x.row(i));
      const Label label = score > 0.0 ? Label::kDetective : Label::kNonDetective;
      predicted.push_back(label);
      if (label == Label::kDetective) detectives.insert(c.character_id);
      write_csv_row(s, {c.character_id, c.novel_id, std::to_string(c.year),
                        format_double(score), label_name(label)});
    }
  });

  const TrendSeries ratio = ratio_series(retained, predicted, f.bin_width);
  std::vector<std::string> warnings;
  const TrendSeries centrality =
      centrality_series(retained, detectives, f.bin_width, &warnings);
  for (const std::string &w : warnings) err << "warning: " << w << '\n';
  emit(dir / "ratio_series.csv", [&](std::ostream &s) { write_series_csv(ratio, s); });
  emit(dir / "centrality_series.csv",
       [&](std::ostream &s) { write_series_csv(centrality, s); });
  emit(dir / "model.clmd", [&](std::ostream &s) { save_model(model, s); });
  if (!f.svg.empty()) {
    const LineSeries line{"detective ratio", series_points(ratio), true};
    emit(f.svg, [&](std::ostream &s) {
      write_line_chart(std::span(&line, 1),
                       chart("Predicted detective ratio", "year", "ratio"), s);
    });
  }
  out << "characters=" << retained.characters.size() << '\n';
  out << "detectives=" << detectives.size() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// zscore

struct ZscoreFlags {
  DataPaths data;
  std::string partition;
  std::string categories = "all";
  std::size_t top = 0;
  std::string out_path;
  std::string svg;
  std::size_t svg_top = 14;
};

Partition read_partition(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  CsvReader reader(in);
  const std::size_t id_col = reader.column("character_id");
  const std::size_t group_col = reader.column("group");
  Partition partition;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const auto group = parse_int_field(fields[group_col], "group", reader.line());
    if (group != 1 && group != 2) {
      throw ParseError(reader.line(), "group must be 1 or 2");
    }
    partition[std::string(trim(fields[id_col]))] = static_cast<int>(group);
  }
  return partition;
}

int run_zscore(const ZscoreFlags &f, std::ostream &out, std::ostream &err) {
  const CategorySet categories = parse_categories(f.categories);
  f.data.validate();
  require_readable(f.partition);
  const Dataset dataset = load_dataset(f.data, err);

  Partition partition;
  if (!f.partition.empty()) {
    partition = read_partition(f.partition);
  } else {
    for (const CharacterRecord &c : dataset.characters) {
      if (c.label) partition[c.character_id] = *c.label == Label::kDetective ? 1 : 2;
    }
  }
  DistinctivenessTable table = group_distinctiveness(dataset, partition, categories);
  if (f.partition.empty()) {
    table.group1_label = "detective";
    table.group2_label = "non_detective";
  }

  std::vector<DistinctivenessRow> rows;
  for (Category cat : categories.members()) {
    auto in_cat = rows_in_category(table, cat);
    if (f.top > 0) in_cat = top_attributes(in_cat, f.top, Sign::kBoth);
    rows.insert(rows.end(), in_cat.begin(), in_cat.end());
  }
  emit(f.out_path, [&](std::ostream &s) { write_distinctiveness_csv(rows, s); });

  if (!f.svg.empty()) {
    std::vector<BarItem> bars;
    for (Category cat : categories.members()) {
      for (const auto &r : top_attributes(rows_in_category(table, cat), f.svg_top, Sign::kBoth)) {
        bars.push_back({std::string(category_name(cat)) + ": " + r.lemma, r.normalized_z});
      }
    }
    emit(f.svg, [&](std::ostream &s) {
      write_bar_chart(bars,
                      chart(table.group1_label + " vs " + table.group2_label, "normalized z",
                            ""),
                      s);
    });
  }
  out << "rows=" << rows.size() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterFlags {
  DataPaths data;
  std::string predictions;
  bool all = false;
  std::string coords;
  std::string space = "full";
  KMeansOptions kmeans;
  std::size_t top = 14;
  std::string categories = "all";
  std::string out_dir;
  std::string svg;
};

std::unordered_set<std::string> predicted_detectives(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  CsvReader reader(in);
  const std::size_t id_col = reader.column("character_id");
  const std::size_t label_col = reader.column("label");
  std::unordered_set<std::string> ids;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const auto label = parse_label(trim(fields[label_col]));
    if (!label) throw ParseError(reader.line(), "unknown label '" + fields[label_col] + "'");
    if (*label == Label::kDetective) ids.insert(std::string(trim(fields[id_col])));
  }
  return ids;
}

int run_cluster(const ClusterFlags &f, std::ostream &out, std::ostream &err) {
  const CategorySet categories = parse_categories(f.categories);
  f.data.validate();
  require_readable(f.predictions);
  require_readable(f.coords);
  prepare_output_dir(f.out_dir);
  const Dataset dataset = load_dataset(f.data, err);
  const EmbeddingMatrix &emb = *dataset.embeddings;

  std::optional<std::unordered_set<std::string>> chosen;
  if (!f.predictions.empty()) chosen = predicted_detectives(f.predictions);
  std::vector<std::string> ids;
  std::vector<int> years;
  for (const CharacterRecord &c : dataset.characters) {
    bool take = false;
    if (chosen) {
      take = chosen->contains(c.character_id);
    } else if (f.all) {
      take = emb.contains(c.character_id);
    } else {
      take = c.label == Label::kDetective;
    }
    if (!take) continue;
    ids.push_back(c.character_id);
    years.push_back(c.year);
  }
  if (ids.size() < f.kmeans.k) {
    throw Error("only " + std::to_string(ids.size()) + " characters selected for " +
                std::to_string(f.kmeans.k) + " clusters");
  }
  Matrix x(ids.size(), emb.dim());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const float *v = emb.find(ids[i]);
    if (v == nullptr) throw Error("character '" + ids[i] + "' has no embedding");
    for (std::size_t j = 0; j < emb.dim(); ++j) x(i, j) = v[j];
  }

  Matrix plane(ids.size(), 2);
  if (!f.coords.empty()) {
    std::ifstream in(f.coords);
    const auto coords = read_coords_csv(in);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto it = coords.find(ids[i]);
      if (it == coords.end()) {
        throw FormatError("coordinates file has no row for '" + ids[i] + "'");
      }
      plane(i, 0) = it->second.first;
      plane(i, 1) = it->second.second;
    }
  } else {
    plane = pca_project(x, 2).coords;
  }

  ClusterResult result =
      kmeans(f.space == "2d" ? plane : x, f.kmeans, default_thread_count());
  canonicalize_by_year(result, years);
  const auto vocab =
      cluster_vocabulary(dataset, ids, result.assignments, f.kmeans.k, f.top, categories);

  std::vector<AssignmentRow> rows;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    rows.push_back({ids[i], result.assignments[i], years[i], plane(i, 0), plane(i, 1)});
  }
  const fs::path dir(f.out_dir);
  emit(dir / "assignments.csv", [&](std::ostream &s) { write_assignments_csv(rows, s); });
  emit(dir / "cluster_vocabulary.csv",
       [&](std::ostream &s) { write_cluster_vocabulary_csv(vocab, s); });
  emit(dir / "clusters.txt", [&](std::ostream &s) {
    s << "k=" << f.kmeans.k << '\n';
    s << "space=" << f.space << '\n';
    s << "characters=" << ids.size() << '\n';
    s << "inertia=" << format_double(result.inertia) << '\n';
    s << "iterations=" << result.iterations << '\n';
    s << "restart=" << result.restart << '\n';
    for (const ClusterVocabulary &cv : vocab) {
      s << "cluster." << cv.cluster << ".members=" << cv.members << '\n';
    }
  });
  if (!f.svg.empty()) {
    std::vector<ScatterPoint> points;
    for (const AssignmentRow &r : rows) points.push_back({r.x, r.y, r.cluster});
    emit(f.svg, [&](std::ostream &s) {
      write_scatter_chart(points, chart("Detective clusters", "x", "y"), s);
    });
  }
  out << "inertia=" << format_double(result.inertia) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// trend

struct TrendFlags {
  std::string input;
  std::string out_path;
  std::string svg;
  std::string title = "Trend";
};

int run_trend(const TrendFlags &f, std::ostream &out, std::ostream &) {
  require_readable(f.input);
  std::ifstream in(f.input);
  TrendSeries series = read_series_csv(in);
  const auto points = series_points(series);
  series.fit = quadratic_fit(points);
  emit(f.out_path, [&](std::ostream &s) { write_series_csv(series, s); });
  if (!f.svg.empty()) {
    LineSeries curve{"quadratic fit", {}, false};
    const double lo = points.front().first;
    const double hi = points.back().first;
    constexpr int kSamples = 50;
    for (int i = 0; i <= kSamples; ++i) {
      const double xv = lo + (hi - lo) * i / kSamples;
      curve.points.emplace_back(xv, (*series.fit)(xv));
    }
    const std::vector<LineSeries> lines = {{"observed", points, true}, curve};
    emit(f.svg, [&](std::ostream &s) {
      write_line_chart(lines, chart(f.title, "year", "value"), s);
    });
  }
  out << "fit a=" << format_double(series.fit->a) << ",b=" << format_double(series.fit->b)
      << ",c=" << format_double(series.fit->c) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthFlags {
  std::string kind = "planted";
  std::string out_dir;
  std::uint64_t seed = 42;
  SignalOptions signal;
  PlantedOptions planted;
  CorpusOptions corpus;
};

int run_synth(SynthFlags f, std::ostream &out, std::ostream &) {
  prepare_output_dir(f.out_dir);
  Dataset dataset;
  std::vector<std::string> planted;
  if (f.kind == "planted") {
    f.planted.seed = f.seed;
    f.planted.signal = f.signal;
    dataset = make_planted_corpus(f.planted);
  } else {
    f.corpus.seed = f.seed;
    f.corpus.signal = f.signal;
    SyntheticCorpus corpus = make_unlabeled_corpus(f.corpus);
    dataset = std::move(corpus.dataset);
    planted = std::move(corpus.planted_detectives);
  }
  const fs::path dir(f.out_dir);
  emit(dir / "characters.jsonl", [&](std::ostream &s) { write_characters(dataset, s); });
  emit(dir / "embeddings.cemb", [&](std::ostream &s) { write_embeddings(*dataset.embeddings, s); });
  if (f.kind == "corpus") {
    emit(dir / "planted.csv", [&](std::ostream &s) {
      write_csv_row(s, {"character_id"});
      for (const std::string &id : planted) write_csv_row(s, {id});
    });
  }
  out << "characters=" << dataset.characters.size() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Character archetype analysis: classification, distinctiveness, "
               "diachronic trends and clustering.",
               "archlens"};
  app.require_subcommand(1);
  Action action;

  ValidateFlags validate;
  auto *cmd = app.add_subcommand("validate", "Check characters and embeddings for consistency");
  add_data_options(cmd, validate.data, "", false);
  cmd->add_option("--min-year", validate.min_year, "Earliest plausible year")
      ->capture_default_str();
  cmd->add_option("--max-year", validate.max_year, "Latest plausible year")
      ->capture_default_str();
  cmd->callback([&] { action = [&] { return run_validate(validate, out, err); }; });

  EvalFlags eval;
  cmd = app.add_subcommand("eval", "Cross-validate a detective classifier");
  add_data_options(cmd, eval.data, "", false);
  add_model_options(cmd, eval.model);
  cmd->add_option("--scheme", eval.scheme,
                  "stratified:K, logo:character, logo:author or logo:timebin:W")
      ->capture_default_str();
  cmd->add_option("--error-bin-width", eval.error_bin_width,
                  "Bin width in years for the error-over-time series")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out-dir", eval.out_dir, "Directory for report files")->required();
  cmd->callback([&] { action = [&] { return run_eval(eval, out, err); }; });

  DetectFlags detect;
  cmd = app.add_subcommand("detect", "Train on labeled data and detect archetypes in a corpus");
  add_data_options(cmd, detect.train, "train-", false);
  add_data_options(cmd, detect.corpus, "corpus-", false);
  add_model_options(cmd, detect.model);
  cmd->add_option("--top-k", detect.top_k, "Most-mentioned characters kept per novel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--bin-width", detect.bin_width, "Series bin width in years")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out-dir", detect.out_dir, "Directory for predictions and series")
      ->required();
  cmd->add_option("--svg", detect.svg, "Write a ratio chart to this path");
  cmd->callback([&] { action = [&] { return run_detect(detect, out, err); }; });

  ZscoreFlags zscore;
  cmd = app.add_subcommand("zscore", "Distinctive attributes of two character groups");
  add_data_options(cmd, zscore.data, "", false);
  cmd->add_option("--partition", zscore.partition,
                  "CSV character_id,group (1 or 2); defaults to detective vs non-detective");
  cmd->add_option("--categories", zscore.categories,
                  "Attribute categories, comma separated, or 'all'")
      ->capture_default_str();
  cmd->add_option("--top", zscore.top,
                  "Keep the top K positive and negative rows per category (0 keeps all)")
      ->capture_default_str();
  cmd->add_option("--out", zscore.out_path, "Output CSV")->required();
  cmd->add_option("--svg", zscore.svg, "Write a bar chart to this path");
  cmd->add_option("--svg-top", zscore.svg_top, "Rows per side and category in the chart")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->callback([&] { action = [&] { return run_zscore(zscore, out, err); }; });

  ClusterFlags cluster;
  cmd = app.add_subcommand("cluster", "Cluster detective embeddings");
  add_data_options(cmd, cluster.data, "", true);
  auto *pred = cmd->add_option("--predictions", cluster.predictions,
                               "Cluster the detectives of a detect predictions CSV");
  cmd->add_flag("--all", cluster.all, "Cluster every character with an embedding")
      ->excludes(pred);
  cmd->add_option("--coords", cluster.coords,
                  "CSV character_id,x,y of precomputed 2-D coordinates (default: PCA)");
  cmd->add_option("--space", cluster.space, "Cluster full embeddings or 2-D coordinates")
      ->check(CLI::IsMember({"full", "2d"}))
      ->capture_default_str();
  cmd->add_option("--k", cluster.kmeans.k, "Number of clusters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--restarts", cluster.kmeans.restarts, "k-means restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iterations", cluster.kmeans.max_iterations,
                  "Lloyd iterations per restart")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", cluster.kmeans.seed, "Seed for every random choice")
      ->capture_default_str();
  cmd->add_option("--top", cluster.top, "Distinctive attributes per cluster and category")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--categories", cluster.categories,
                  "Attribute categories, comma separated, or 'all'")
      ->capture_default_str();
  cmd->add_option("--out-dir", cluster.out_dir, "Directory for cluster outputs")->required();
  cmd->add_option("--svg", cluster.svg, "Write a scatter chart to this path");
  cmd->callback([&] { action = [&] { return run_cluster(cluster, out, err); }; });

  TrendFlags trend;
  cmd = app.add_subcommand("trend", "Fit a quadratic trend to a series CSV");
  cmd->add_option("--input", trend.input, "Series CSV bin_start,value,support")->required();
  cmd->add_option("--out", trend.out_path, "Output series CSV with the fit")->required();
  cmd->add_option("--svg", trend.svg, "Write a line chart to this path");
  cmd->add_option("--title", trend.title, "Chart title")->capture_default_str();
  cmd->callback([&] { action = [&] { return run_trend(trend, out, err); }; });

  SynthFlags synth;
  cmd = app.add_subcommand("synth", "Generate a synthetic corpus with a planted signal");
  cmd->add_option("--kind", synth.kind, "planted (labeled) or corpus (unlabeled)")
      ->check(CLI::IsMember({"planted", "corpus"}))
      ->capture_default_str();
  cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  cmd->add_option("--dim", synth.signal.dim, "Embedding dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--separation", synth.signal.separation,
                  "Class centroid distance in within-class standard deviations")
      ->capture_default_str();
  cmd->add_option("--exclusive-fraction", synth.signal.exclusive_fraction,
                  "Share of each class's lemmas exclusive to it")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--detectives", synth.planted.detectives, "Planted: detectives")
      ->capture_default_str();
  cmd->add_option("--non-detectives", synth.planted.non_detectives,
                  "Planted: non-detectives")
      ->capture_default_str();
  cmd->add_option("--authors", synth.planted.authors, "Planted: authors")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--novels", synth.corpus.novels, "Corpus: novels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--characters-per-novel", synth.corpus.characters_per_novel,
                  "Corpus: characters per novel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--detective-rate", synth.corpus.detective_rate,
                  "Corpus: share of novels led by a detective")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--detectives-from", synth.corpus.detectives_from_year,
                  "Corpus: first year in which detectives appear")
      ->capture_default_str();
  cmd->callback([&] { action = [&] { return run_synth(synth, out, err); }; });

  std::vector<const char *> argv = {"archlens"};
  for (const std::string &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace archlens

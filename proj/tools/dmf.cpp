// Copyright 2026 dmf authors
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
//
// dmf: factorize / project / evaluate / synth / igo / benchmark driver
// around the core library. Exit codes: 0 success, 1 usage, 2 data error,
// 3 numeric failure.

#include <atomic>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dmf/deep.hpp"
#include "dmf/eval.hpp"
#include "dmf/graph.hpp"
#include "dmf/io.hpp"
#include "dmf/project.hpp"
#include "dmf/shallow.hpp"

namespace fs = std::filesystem;
using namespace dmf;

namespace {

struct TrainOptions {
  int max_iters = 1000;
  double kappa = 1e-6;
  double eta = 0.5;
  double step = 1e-3;
  std::string init = "auto";
  uint64_t seed = 0;

  TrainConfig to_config() const {
    TrainConfig cfg;
    cfg.max_iters = max_iters;
    cfg.kappa = kappa;
    cfg.eta = eta;
    cfg.step = step;
    cfg.seed = seed;
    if (init == "auto") {
      cfg.init = InitKind::kAuto;
    } else if (init == "nndsvd") {
      cfg.init = InitKind::kNndsvd;
    } else if (init == "svd") {
      cfg.init = InitKind::kSvdSemiNmf;
    } else if (init == "random") {
      cfg.init = InitKind::kRandom;
    } else {
      throw InvalidInput("unknown init '" + init + "'");
    }
    return cfg;
  }
};

void add_train_options(CLI::App* cmd, TrainOptions* opts) {
  cmd->add_option("--max-iters", opts->max_iters, "Iteration cap");
  cmd->add_option("--kappa", opts->kappa, "Convergence tolerance");
  cmd->add_option("--eta", opts->eta, "Multiplicative update exponent");
  cmd->add_option("--step", opts->step, "Gradient fine-tuning step size");
  cmd->add_option("--init", opts->init, "Initialization: auto|nndsvd|svd|random");
  cmd->add_option("--seed", opts->seed, "RNG seed")->envname("DMF_SEED");
}

WeightScheme parse_scheme(const std::string& name) {
  if (name == "binary") return WeightScheme::kBinary;
  if (name == "rbf") return WeightScheme::kRbf;
  if (name == "dot") return WeightScheme::kDot;
  throw InvalidInput("unknown weight scheme '" + name + "'");
}

Matrix load_data(const fs::path& path) {
  return load_matrix(path, format_from_extension(path));
}

void write_metrics_file(const fs::path& path, const std::vector<MetricRow>& rows) {
  std::ostringstream out;
  write_metric_csv(out, rows);
  atomic_write_text(path, out.str());
}

std::string sample_name(Index i) { return std::to_string(i); }

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  int n_per_cluster = 100;
  double sigma = 1.0;
  int ids = 5;
  int poses = 4;
  int per_cell = 20;
  int dims = 50;
  double noise = 0.3;
  bool nonneg = false;
  uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
};

// Shifts every feature row so its minimum is zero, turning mixed-sign
// synthetic data into pixel-intensity-like input for the NMF family.
void shift_nonneg(Matrix* x) {
  for (Index r = 0; r < x->rows(); ++r) {
    const double lo = x->row(r).minCoeff();
    if (lo < 0.0) x->row(r).array() -= lo;
  }
}

int run_synth(SyntheticDataset data, const SynthOptions& opts) {
  const fs::path dir(opts.out);
  fs::create_directories(dir);
  if (opts.nonneg) shift_nonneg(&data.x);
  const MatrixFormat format =
      opts.format == "csv" ? MatrixFormat::kCsv : MatrixFormat::kF64Bin;
  const fs::path x_path =
      dir / (opts.format == "csv" ? "X.csv" : "X.bin");
  save_matrix(data.x, x_path, format);

  LabelTable table;
  for (Index i = 0; i < data.x.cols(); ++i) {
    table.sample_names.push_back(sample_name(i));
  }
  table.attributes = data.attributes;
  save_labels_csv(table, dir / "labels.csv");
  std::cout << "wrote " << x_path.string() << " ("
            << data.x.rows() << "x" << data.x.cols() << ") and labels.csv\n";
  return 0;
}

// ---------------------------------------------------------------------------
// factorize

struct FactorizeOptions {
  std::string data;
  std::string method = "semi-nmf";
  std::vector<Index> layers;
  std::vector<double> lambdas;
  std::vector<std::string> graph_files;
  std::string labels_file;
  std::vector<std::string> attributes;
  std::string scheme = "binary";
  double sigma = 1.0;
  Index knn = 0;
  std::string nonlinearity = "identity";
  std::string out;
  TrainOptions train;
};

std::vector<AttributeGraph> collect_graphs(const FactorizeOptions& opts,
                                           const Matrix& x, size_t needed) {
  std::vector<AttributeGraph> graphs;
  if (!opts.graph_files.empty()) {
    for (const std::string& file : opts.graph_files) {
      graphs.push_back(load_graph(file));
    }
  } else if (!opts.labels_file.empty()) {
    LabelTable table = load_labels_csv(opts.labels_file);
    const WeightScheme scheme = parse_scheme(opts.scheme);
    std::vector<std::string> names = opts.attributes;
    if (names.empty()) {
      for (const auto& attr : table.attributes) {
        names.push_back(attr.attribute_name);
      }
    }
    for (const std::string& name : names) {
      graphs.push_back(
          build_weight_matrix(table.attribute(name), scheme, &x, opts.sigma));
    }
  } else if (opts.knn > 0) {
    graphs.push_back(knn_graph(x, opts.knn, parse_scheme(opts.scheme), opts.sigma));
  }
  if (graphs.size() != needed) {
    throw InvalidInput("method '" + opts.method + "' needs " +
                       std::to_string(needed) + " graph(s), got " +
                       std::to_string(graphs.size()) +
                       " (use --graph, --labels/--attributes, or --knn)");
  }
  return graphs;
}

std::vector<double> collect_lambdas(const FactorizeOptions& opts, size_t needed) {
  if (opts.lambdas.empty()) return std::vector<double>(needed, 0.0);
  if (opts.lambdas.size() == 1 && needed > 1) {
    return std::vector<double>(needed, opts.lambdas[0]);
  }
  if (opts.lambdas.size() != needed) {
    throw InvalidInput("need " + std::to_string(needed) + " lambda value(s), got " +
                       std::to_string(opts.lambdas.size()));
  }
  return opts.lambdas;
}

DeepModel shallow_as_model(FactorPair factors) {
  DeepModel model;
  model.g = Nonlinearity::identity();
  model.z.push_back(std::move(factors.z));
  model.h.push_back(std::move(factors.h));
  return model;
}

int run_factorize(const FactorizeOptions& opts) {
  const Matrix x = load_data(opts.data);
  const TrainConfig cfg = opts.train.to_config();
  if (opts.layers.empty()) throw InvalidInput("--layers is required");

  const bool shallow = opts.method == "semi-nmf" || opts.method == "nmf" ||
                       opts.method == "gnmf" || opts.method == "wsf" ||
                       opts.method == "wsf-ma";
  if (shallow && opts.layers.size() != 1) {
    throw InvalidInput("method '" + opts.method + "' takes a single layer size");
  }
  const Nonlinearity g = Nonlinearity::from_name(opts.nonlinearity);

  DeepModel model;
  TrainReport report;
  if (opts.method == "semi-nmf") {
    auto [factors, rep] = semi_nmf(x, opts.layers[0], cfg);
    model = shallow_as_model(std::move(factors));
    report = std::move(rep);
  } else if (opts.method == "nmf") {
    auto [factors, rep] = nmf_mul(x, opts.layers[0], cfg);
    model = shallow_as_model(std::move(factors));
    report = std::move(rep);
  } else if (opts.method == "gnmf") {
    auto graphs = collect_graphs(opts, x, 1);
    auto lambdas = collect_lambdas(opts, 1);
    auto [factors, rep] = gnmf(x, opts.layers[0], graphs[0], lambdas[0], cfg);
    model = shallow_as_model(std::move(factors));
    report = std::move(rep);
  } else if (opts.method == "wsf") {
    auto graphs = collect_graphs(opts, x, 1);
    auto lambdas = collect_lambdas(opts, 1);
    auto [factors, rep] = wsf(x, opts.layers[0], graphs[0], lambdas[0], cfg);
    model = shallow_as_model(std::move(factors));
    report = std::move(rep);
  } else if (opts.method == "wsf-ma") {
    auto graphs = collect_graphs(opts, x, std::max<size_t>(
        1, opts.graph_files.empty() ? opts.attributes.size()
                                    : opts.graph_files.size()));
    auto lambdas = collect_lambdas(opts, graphs.size());
    auto [factors, rep] = wsf_ma(x, opts.layers[0], graphs, lambdas, cfg);
    model = shallow_as_model(std::move(factors));
    report = std::move(rep);
  } else if (opts.method == "deep-seminmf") {
    model = pretrain(x, opts.layers, cfg, g);
    if (g.is_identity()) {
      auto [tuned, rep] = finetune_linear(std::move(model), x, cfg);
      model = std::move(tuned);
      report = std::move(rep);
    } else {
      auto [tuned, rep] = finetune_nonlinear(std::move(model), x, cfg);
      model = std::move(tuned);
      report = std::move(rep);
    }
  } else if (opts.method == "deep-wsf") {
    auto graphs = collect_graphs(opts, x, opts.layers.size());
    auto lambdas = collect_lambdas(opts, opts.layers.size());
    auto [trained, rep] = train_deep_wsf(x, opts.layers, graphs, lambdas, cfg, g);
    model = std::move(trained);
    report = std::move(rep);
  } else {
    throw InvalidInput("unknown method '" + opts.method + "'");
  }

  save_model(model, opts.out, &report, &cfg);
  std::cout << "wrote model to " << opts.out << " (objective "
            << (report.objective_trace.empty() ? 0.0
                                               : report.objective_trace.back())
            << ", " << report.iterations << " iterations, "
            << (report.converged ? "converged" : "iteration cap") << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// project

struct ProjectOptions {
  std::string model;
  std::string samples;
  std::string method = "nls";
  int layer = -1;
  std::string out;
  TrainOptions train;
};

int run_project(const ProjectOptions& opts) {
  const DeepModel model = load_model(opts.model);
  const Matrix samples = load_data(opts.samples);
  const ProjectionMethod method = opts.method == "pinv"
                                      ? ProjectionMethod::kPinv
                                      : ProjectionMethod::kNls;
  if (opts.method != "pinv" && opts.method != "nls") {
    throw InvalidInput("unknown projection method '" + opts.method + "'");
  }
  const Matrix features =
      project_batch(model, samples, method, opts.layer, opts.train.to_config());
  save_matrix(features, opts.out, format_from_extension(opts.out));
  std::cout << "wrote " << features.rows() << "x" << features.cols()
            << " features to " << opts.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  std::string model;
  std::string features;
  std::string labels_file;
  std::vector<std::string> attributes;
  std::vector<std::string> metrics{"accuracy", "nmi"};
  std::string method_name;
  uint64_t seed = 0;
  int restarts = 10;
  std::string out = "-";
};

std::vector<MetricRow> evaluate_layer(const Matrix& h, int layer,
                                      const std::string& method,
                                      const std::vector<const AttributeLabels*>& attrs,
                                      const std::vector<std::string>& metrics,
                                      uint64_t seed, int restarts) {
  std::vector<MetricRow> rows;
  for (const AttributeLabels* attr : attrs) {
    const int k = attr->distinct_classes();
    ClusterAssignment assignment = kmeans(h, k, seed, restarts);
    for (const std::string& metric : metrics) {
      double value = 0.0;
      if (metric == "accuracy") {
        value = clustering_accuracy(assignment, *attr);
      } else if (metric == "nmi") {
        value = nmi(assignment, *attr);
      } else {
        throw InvalidInput("unknown metric '" + metric + "'");
      }
      rows.push_back({method, layer, attr->attribute_name, metric, value, seed});
    }
  }
  return rows;
}

int run_evaluate(const EvaluateOptions& opts) {
  if (opts.model.empty() == opts.features.empty()) {
    throw InvalidInput("pass exactly one of --model or --features");
  }
  LabelTable table = load_labels_csv(opts.labels_file);
  std::vector<const AttributeLabels*> attrs;
  if (opts.attributes.empty()) {
    for (const auto& attr : table.attributes) attrs.push_back(&attr);
  } else {
    for (const std::string& name : opts.attributes) {
      attrs.push_back(&table.attribute(name));
    }
  }

  std::vector<MetricRow> rows;
  if (!opts.model.empty()) {
    const DeepModel model = load_model(opts.model);
    const std::string method =
        opts.method_name.empty() ? "model" : opts.method_name;
    for (int layer = 1; layer <= model.layers(); ++layer) {
      auto layer_rows =
          evaluate_layer(model.h[layer - 1], layer, method, attrs,
                         opts.metrics, opts.seed, opts.restarts);
      rows.insert(rows.end(), layer_rows.begin(), layer_rows.end());
    }
  } else {
    const Matrix features = load_data(opts.features);
    const std::string method =
        opts.method_name.empty() ? "features" : opts.method_name;
    rows = evaluate_layer(features, 1, method, attrs, opts.metrics, opts.seed,
                          opts.restarts);
  }

  if (opts.out == "-") {
    write_metric_csv(std::cout, rows);
  } else {
    write_metrics_file(opts.out, rows);
    std::cout << "wrote " << rows.size() << " metric rows to " << opts.out
              << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// igo

int run_igo(const std::string& images, const std::string& out) {
  ImageStack stack = load_pgm_dir(images);
  Matrix features = extract_igo(stack);
  save_matrix(features, out, format_from_extension(out));
  std::cout << "wrote " << features.rows() << "x" << features.cols()
            << " feature matrix to " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkOptions {
  std::string data;
  std::string labels_file;
  bool synth = false;
  SynthOptions synth_opts;
  std::vector<std::string> methods{"semi-nmf", "nmf", "deep-seminmf"};
  std::vector<Index> components;
  std::vector<uint64_t> seeds{0};
  Index deep_first = 25;
  Index knn = 5;
  double lambda = 0.0;
  std::string out;
  int jobs = 1;
  TrainOptions train;
};

struct BenchmarkCell {
  std::string method;
  Index k = 0;
  uint64_t seed = 0;
  double error = 0.0;
  std::vector<MetricRow> metrics;
};

void run_cell(const BenchmarkOptions& opts, const Matrix& x,
              const std::vector<const AttributeLabels*>& attrs,
              BenchmarkCell* cell) {
  TrainConfig cfg = opts.train.to_config();
  cfg.seed = cell->seed;

  Matrix top_features;
  Matrix reconstruction;
  if (cell->method == "semi-nmf" || cell->method == "nmf") {
    auto [factors, rep] = cell->method == "nmf" ? nmf_mul(x, cell->k, cfg)
                                                : semi_nmf(x, cell->k, cfg);
    top_features = factors.h;
    reconstruction = factors.z * factors.h;
  } else if (cell->method == "gnmf") {
    AttributeGraph graph = knn_graph(x, opts.knn, WeightScheme::kBinary);
    auto [factors, rep] = gnmf(x, cell->k, graph, opts.lambda, cfg);
    top_features = factors.h;
    reconstruction = factors.z * factors.h;
  } else if (cell->method == "deep-seminmf") {
    const Index first = std::min(opts.deep_first, x.rows());
    std::vector<Index> layers{first, cell->k};
    if (cell->k >= first) layers = {cell->k};
    DeepModel model = pretrain(x, layers, cfg);
    auto [tuned, rep] = finetune_linear(std::move(model), x, cfg);
    top_features = tuned.h.back();
    Matrix recon = tuned.h.back();
    for (size_t i = tuned.z.size(); i-- > 0;) recon = tuned.z[i] * recon;
    reconstruction = std::move(recon);
  } else {
    throw InvalidInput("unknown benchmark method '" + cell->method + "'");
  }

  cell->error = (x - reconstruction).norm();
  const std::string tag =
      cell->method + "[k=" + std::to_string(cell->k) + "]";
  cell->metrics = evaluate_layer(top_features, 1, tag, attrs,
                                 {"accuracy", "nmi"}, cell->seed, 10);
}

int run_benchmark(const BenchmarkOptions& opts) {
  if (opts.components.empty()) throw InvalidInput("--components is required");

  Matrix x;
  LabelTable table;
  if (opts.synth) {
    SyntheticDataset data =
        gen_multiattr(opts.synth_opts.ids, opts.synth_opts.poses,
                      opts.synth_opts.per_cell, opts.synth_opts.dims,
                      opts.synth_opts.noise, opts.synth_opts.seed);
    x = std::move(data.x);
    if (opts.synth_opts.nonneg) shift_nonneg(&x);
    table.attributes = std::move(data.attributes);
  } else {
    if (opts.data.empty() || opts.labels_file.empty()) {
      throw InvalidInput("pass --synth or both --data and --labels");
    }
    x = load_data(opts.data);
    table = load_labels_csv(opts.labels_file);
  }
  std::vector<const AttributeLabels*> attrs;
  for (const auto& attr : table.attributes) attrs.push_back(&attr);

  std::vector<BenchmarkCell> cells;
  for (const std::string& method : opts.methods) {
    for (Index k : opts.components) {
      for (uint64_t seed : opts.seeds) {
        cells.push_back({method, k, seed, 0.0, {}});
      }
    }
  }

  const int jobs = std::max(1, opts.jobs);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      run_cell(opts, x, attrs, &cells[i]);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  const fs::path dir(opts.out);
  fs::create_directories(dir);

  std::vector<MetricRow> metric_rows;
  std::string recon_csv = "method,components,seed,frobenius_error\n";
  char buf[64];
  for (const BenchmarkCell& cell : cells) {
    metric_rows.insert(metric_rows.end(), cell.metrics.begin(),
                       cell.metrics.end());
    std::snprintf(buf, sizeof(buf), "%.12g", cell.error);
    recon_csv += cell.method + "," + std::to_string(cell.k) + "," +
                 std::to_string(cell.seed) + "," + buf + "\n";
  }
  write_metrics_file(dir / "metrics.csv", metric_rows);
  atomic_write_text(dir / "reconstruction.csv", recon_csv);

  // Mean accuracy over the swept component counts (and seeds), per method
  // and attribute.
  std::vector<MetricRow> summary;
  for (const std::string& method : opts.methods) {
    for (const AttributeLabels* attr : attrs) {
      double total = 0.0;
      long count = 0;
      for (const BenchmarkCell& cell : cells) {
        if (cell.method != method) continue;
        for (const MetricRow& row : cell.metrics) {
          if (row.metric == "accuracy" &&
              row.attribute == attr->attribute_name) {
            total += row.value;
            ++count;
          }
        }
      }
      if (count > 0) {
        summary.push_back({method, 1, attr->attribute_name, "mean_accuracy",
                           total / count, opts.seeds.front()});
      }
    }
  }
  write_metrics_file(dir / "summary.csv", summary);
  std::cout << "wrote metrics.csv, reconstruction.csv, summary.csv to "
            << opts.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep (semi-)nonnegative matrix factorization toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  // synth
  SynthOptions synth_opts;
  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic datasets");
  synth->require_subcommand(1);
  CLI::App* synth_xor = synth->add_subcommand("xor", "Two-line XOR mixture");
  synth_xor->add_option("--n", synth_opts.n_per_cluster, "Samples per cluster");
  synth_xor->add_option("--sigma", synth_opts.sigma, "Cluster deviation");
  CLI::App* synth_multi =
      synth->add_subcommand("multiattr", "Hierarchical identity/pose mixture");
  synth_multi->add_option("--ids", synth_opts.ids, "Identity count");
  synth_multi->add_option("--poses", synth_opts.poses, "Pose count");
  synth_multi->add_option("--per-cell", synth_opts.per_cell,
                          "Samples per (identity, pose) cell");
  synth_multi->add_option("--dims", synth_opts.dims, "Feature dimension");
  synth_multi->add_option("--noise", synth_opts.noise, "Noise deviation");
  synth_multi->add_flag("--nonneg", synth_opts.nonneg,
                        "Shift feature rows to a zero minimum");
  for (CLI::App* cmd : {synth_xor, synth_multi}) {
    cmd->add_option("--seed", synth_opts.seed, "RNG seed")->envname("DMF_SEED");
    cmd->add_option("--format", synth_opts.format, "Matrix format: csv|bin");
    cmd->add_option("--out", synth_opts.out, "Output directory")->required();
  }

  // factorize
  FactorizeOptions fo;
  CLI::App* factorize = app.add_subcommand("factorize", "Train a factorization");
  factorize->add_option("--data", fo.data, "Input matrix (csv or f64bin)")
      ->required();
  factorize->add_option(
      "--method", fo.method,
      "semi-nmf|nmf|gnmf|wsf|wsf-ma|deep-seminmf|deep-wsf");
  factorize->add_option("--layers", fo.layers, "Layer sizes (top level last)")
      ->required()
      ->delimiter(',');
  factorize->add_option("--lambda", fo.lambdas, "Regularization weights")
      ->delimiter(',');
  factorize->add_option("--graph", fo.graph_files, "Graph triplet files")
      ->delimiter(',');
  factorize->add_option("--labels", fo.labels_file, "Label sidecar CSV");
  factorize->add_option("--attributes", fo.attributes,
                        "Attribute names, one per graph/layer")
      ->delimiter(',');
  factorize->add_option("--scheme", fo.scheme, "Weighting: binary|rbf|dot");
  factorize->add_option("--sigma", fo.sigma, "RBF kernel width");
  factorize->add_option("--knn", fo.knn, "Neighbor count for gnmf graphs");
  factorize->add_option("--nonlinearity", fo.nonlinearity,
                        "identity|stanh|square");
  factorize->add_option("--out", fo.out, "Model output directory")->required();
  add_train_options(factorize, &fo.train);

  // project
  ProjectOptions po;
  CLI::App* project = app.add_subcommand("project", "Project out-of-sample data");
  project->add_option("--model", po.model, "Model directory")->required();
  project->add_option("--samples", po.samples, "Sample matrix")->required();
  project->add_option("--method", po.method, "pinv|nls");
  project->add_option("--layer", po.layer, "Layer (1-based, default top)");
  project->add_option("--out", po.out, "Output feature matrix")->required();
  add_train_options(project, &po.train);

  // evaluate
  EvaluateOptions eo;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Clustering metrics");
  evaluate->add_option("--model", eo.model, "Model directory");
  evaluate->add_option("--features", eo.features, "Feature matrix");
  evaluate->add_option("--labels", eo.labels_file, "Label sidecar CSV")
      ->required();
  evaluate->add_option("--attributes", eo.attributes, "Attribute subset")
      ->delimiter(',');
  evaluate->add_option("--metrics", eo.metrics, "accuracy,nmi")->delimiter(',');
  evaluate->add_option("--method-name", eo.method_name, "CSV method column");
  evaluate->add_option("--seed", eo.seed, "Clustering seed")->envname("DMF_SEED");
  evaluate->add_option("--restarts", eo.restarts, "k-means restarts");
  evaluate->add_option("--out", eo.out, "Output CSV ('-' for stdout)");

  // igo
  std::string igo_images, igo_out;
  CLI::App* igo = app.add_subcommand("igo", "Gradient-orientation features");
  igo->add_option("--images", igo_images, "Directory of PGM images")->required();
  igo->add_option("--out", igo_out, "Output feature matrix")->required();

  // benchmark
  BenchmarkOptions bo;
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "Component sweep with metric CSVs");
  benchmark->add_option("--data", bo.data, "Input matrix");
  benchmark->add_option("--labels", bo.labels_file, "Label sidecar CSV");
  benchmark->add_flag("--synth", bo.synth, "Use a generated multiattr dataset");
  benchmark->add_option("--ids", bo.synth_opts.ids, "Synth identity count");
  benchmark->add_option("--poses", bo.synth_opts.poses, "Synth pose count");
  benchmark->add_option("--per-cell", bo.synth_opts.per_cell,
                        "Synth samples per cell");
  benchmark->add_option("--dims", bo.synth_opts.dims, "Synth dimension");
  benchmark->add_option("--noise", bo.synth_opts.noise, "Synth noise");
  benchmark->add_flag("--nonneg", bo.synth_opts.nonneg,
                      "Shift synth feature rows to a zero minimum");
  benchmark->add_option("--methods", bo.methods,
                        "semi-nmf,nmf,gnmf,deep-seminmf")
      ->delimiter(',');
  benchmark->add_option("--components", bo.components, "Component counts")
      ->required()
      ->delimiter(',');
  benchmark->add_option("--seeds", bo.seeds, "Seeds to sweep")->delimiter(',');
  benchmark->add_option("--deep-first", bo.deep_first,
                        "First-layer width for deep models");
  benchmark->add_option("--knn", bo.knn, "Neighbor count for gnmf");
  benchmark->add_option("--lambda", bo.lambda, "gnmf regularization weight");
  benchmark->add_option("--jobs", bo.jobs, "Parallel sweep cells");
  benchmark->add_option("--out", bo.out, "Output directory")->required();
  add_train_options(benchmark, &bo.train);
  benchmark->get_option("--seed")->description("Synth data seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (synth_xor->parsed()) {
      return run_synth(gen_xor(synth_opts.n_per_cluster, synth_opts.sigma,
                               synth_opts.seed),
                       synth_opts);
    }
    if (synth_multi->parsed()) {
      return run_synth(
          gen_multiattr(synth_opts.ids, synth_opts.poses, synth_opts.per_cell,
                        synth_opts.dims, synth_opts.noise, synth_opts.seed),
          synth_opts);
    }
    if (factorize->parsed()) return run_factorize(fo);
    if (project->parsed()) return run_project(po);
    if (evaluate->parsed()) return run_evaluate(eo);
    if (igo->parsed()) return run_igo(igo_images, igo_out);
    if (benchmark->parsed()) {
      bo.synth_opts.seed = bo.train.seed;
      return run_benchmark(bo);
    }
  } catch (const NumericError& e) {
    std::cerr << "dmf: numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "dmf: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dmf: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

// Copyright 2026 The advbound Authors.
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

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "advbound/bounds.hpp"
#include "advbound/dataset.hpp"
#include "advbound/gaussian.hpp"
#include "advbound/geometry.hpp"
#include "advbound/optprob.hpp"
#include "support.hpp"

namespace advbound::cli {
namespace {

using nlohmann::json;

constexpr double kDefaultPresetScale = 2.8;
constexpr double kSandwichSlack = 1e-9;

struct InputArgs {
  std::string path;
  std::string format;  // "", "csv" or "bin"
  int label_col = -1;
  std::string classes;
};

struct CommonArgs {
  std::string norm = "l2";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double timeout = 0.0;
  std::string out;
  bool no_timings = false;
};

struct LoadedInput {
  LabeledDataset data;
  std::string digest;
};

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

LoadedInput load_input(const InputArgs& in) {
  const std::string bytes = read_file(in.path);
  std::string format = in.format;
  if (format.empty()) {
    const bool binary = in.path.ends_with(".bin") || in.path.ends_with(".rbnd");
    format = binary ? "bin" : "csv";
  }
  LoadedInput loaded{format == "bin" ? decode_binary(bytes) : [&] {
    CsvOptions opts;
    opts.label_column = in.label_col;
    if (!in.classes.empty()) {
      const auto comma = in.classes.find(',');
      if (comma == std::string::npos || in.classes.find(',', comma + 1) != std::string::npos) {
        fail(ErrorKind::kUsage, "--classes expects exactly two names, e.g. 3,7");
      }
      opts.class_pair = {{in.classes.substr(0, comma), in.classes.substr(comma + 1)}};
    }
    return parse_csv(bytes, opts);
  }(), "sha256:" + sha256_hex(bytes)};
  return loaded;
}

NeighborhoodSpec make_spec(const std::string& norm, double eps) {
  const Norm parsed = parse_norm(norm);
  if (parsed == Norm::kCustom) fail(ErrorKind::kUsage, "--norm must be l2 or linf");
  NeighborhoodSpec spec{parsed, eps, {}};
  spec.validate();
  return spec;
}

GraphBuildOptions build_options(unsigned threads) {
  GraphBuildOptions opts;
  opts.threads = threads;
  opts.prune_first_coordinate = true;
  return opts;
}

std::optional<double> maybe_collision(const ConflictGraph& g) {
  if (g.a_vertices.empty() || g.b_vertices.empty()) return std::nullopt;
  return collision_probability(g);
}

json rational_pair(const Rational& r) { return json::array({r.num(), r.den()}); }

json manifest(const std::string& command, const std::vector<std::string>& args,
              const std::string& digest, const CommonArgs& common) {
  json m;
  m["command"] = command;
  m["args"] = args;
  m["input_digest"] = digest.empty() ? json(nullptr) : json(digest);
  m["norm"] = common.norm;
  m["seed"] = common.seed;
  m["versions"] = version_info();
  return m;
}

void emit(const std::string& body, const CommonArgs& common, std::ostream& out) {
  if (common.out.empty()) {
    out << body;
    out.flush();
    return;
  }
  std::ofstream file(common.out, std::ios::binary);
  if (!file) fail(ErrorKind::kUsage, "cannot write output file '" + common.out + "'");
  file << body;
  if (!file) fail(ErrorKind::kUsage, "failed writing output file '" + common.out + "'");
}

std::string timing_cell(double ms, const CommonArgs& common) {
  return common.no_timings ? "NA" : format_double(ms);
}

std::string tsv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += '\t';
    row += cells[i];
  }
  return row + '\n';
}

std::string manifest_line(const json& m) { return "# " + m.dump() + "\n"; }

std::vector<double> eps_values(const std::optional<double>& eps, const std::string& grid) {
  if (!grid.empty()) {
    if (eps) fail(ErrorKind::kUsage, "give either --eps or --eps-grid, not both");
    return parse_grid(grid);
  }
  if (!eps) fail(ErrorKind::kUsage, "--eps or --eps-grid is required");
  return {*eps};
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; the first exception
// is rethrown after all workers stop.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

// ---- bound ---------------------------------------------------------------

struct BoundArgs {
  InputArgs input;
  CommonArgs common;
  double eps = 0.0;
  std::optional<std::uint64_t> samples;
  bool verify = false;
  std::optional<double> fw_tol;
  bool emit_q = false;
};

int cmd_bound(const BoundArgs& a, const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err) {
  const Stopwatch total;
  const unsigned threads = resolve_threads(a.common.threads);
  const Deadline deadline(a.common.timeout);
  json timings;

  Stopwatch phase;
  LoadedInput input = load_input(a.input);
  if (a.samples) input.data = subsample(input.data, *a.samples, a.common.seed);
  timings["load_ms"] = phase.elapsed_ms();

  const NeighborhoodSpec spec = make_spec(a.common.norm, a.eps);
  phase = Stopwatch();
  const ConflictGraph g = build_conflict_graph(input.data, spec, build_options(threads));
  timings["graph_ms"] = phase.elapsed_ms();

  OptProbOptions options;
  options.threads = threads;
  options.stop = deadline.token();
  OptProbStats stats;
  BoundCertificate cert;
  try {
    cert = solve_bound(g, options, &stats);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kCancelled) {
      fail(ErrorKind::kCancelled, "timed out after " + format_double(a.common.timeout) + " s");
    }
    throw;
  }
  timings["flow_ms"] = 1e3 * stats.flow_seconds;
  timings["recursion_ms"] = std::max(0.0, 1e3 * (stats.total_seconds - stats.flow_seconds));

  const ZeroOneBound zo = zero_one_bound(cert, g);
  json j;
  j["objective_nats"] = cert.objective_nats;
  j["objective_bits"] = cert.objective_nats / std::numbers::ln2;
  j["zero_one_loss"] = zo.value();
  j["zero_one_loss_exact"] = rational_pair(zo.loss);
  j["n_vertices"] = g.num_vertices();
  j["n_edges"] = g.edges.size();
  j["total_count"] = g.total_count;
  const auto collision = maybe_collision(g);
  j["collision_probability"] = collision ? json(*collision) : json(nullptr);
  j["components"] = stats.components;
  j["linopt_calls"] = stats.linopt_calls;
  json blocks = json::array();
  for (const auto& blk : cert.blocks) {
    blocks.push_back({{"a", blk.a},
                      {"b", blk.b},
                      {"mass_a", blk.mass_a},
                      {"mass_b", blk.mass_b},
                      {"ratio", rational_pair(blk.ratio)}});
  }
  j["blocks"] = std::move(blocks);
  if (a.emit_q) {
    json qa = json::array(), qb = json::array();
    for (const auto& q : cert.q_a) qa.push_back(rational_pair(q));
    for (const auto& q : cert.q_b) qb.push_back(rational_pair(q));
    j["q"] = {{"a", std::move(qa)}, {"b", std::move(qb)}};
  }

  bool verified = true;
  if (a.verify) {
    phase = Stopwatch();
    const CheckReport report = verify_certificate(g, cert);
    timings["verify_ms"] = phase.elapsed_ms();
    j["verification"] = json::parse(report_to_json(report));
    verified = report.passed();
  }
  if (a.fw_tol) {
    if (!(*a.fw_tol > 0.0)) fail(ErrorKind::kUsage, "--fw-tol must be positive");
    FrankWolfeOptions fw_options;
    fw_options.gap_tol = *a.fw_tol;
    fw_options.stop = deadline.token();
    phase = Stopwatch();
    const FrankWolfeResult fw = frank_wolfe_reference(g, fw_options);
    timings["frank_wolfe_ms"] = phase.elapsed_ms();
    const double diff = fw.objective - cert.objective_nats;
    const bool sandwich = diff >= -kSandwichSlack &&
                          (!fw.converged || diff <= fw_options.gap_tol + kSandwichSlack);
    j["frank_wolfe"] = {{"objective_nats", fw.objective}, {"gap", fw.gap},
                        {"iterations", fw.iterations}, {"converged", fw.converged},
                        {"difference", diff}, {"sandwich_holds", sandwich}};
    verified = verified && sandwich;
  }

  json m = manifest("bound", args, input.digest, a.common);
  m["eps"] = a.eps;
  m["samples_per_class"] = a.samples ? json(*a.samples) : json(nullptr);
  if (const auto& names = input.data.class_names()) {
    m["classes"] = {{"plus", names->plus}, {"minus", names->minus}};
  }
  if (!a.common.no_timings) {
    timings["total_ms"] = total.elapsed_ms();
    m["timings"] = std::move(timings);
  }
  j["manifest"] = std::move(m);
  emit(j.dump(2) + "\n", a.common, out);
  if (!verified) {
    err << "advbound: verification failed\n";
    return kExitVerification;
  }
  return kExitOk;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  InputArgs input;
  CommonArgs common;
  std::optional<double> eps;
  std::string eps_grid;
  std::string samples;  // comma list of k per class; empty = full data
  std::string seeds;    // comma list; empty = --seed
};

int cmd_sweep(const SweepArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const unsigned threads = resolve_threads(a.common.threads);
  const std::vector<double> grid = eps_values(a.eps, a.eps_grid);
  const LoadedInput input = load_input(a.input);
  const std::vector<std::uint64_t> seeds =
      a.seeds.empty() ? std::vector<std::uint64_t>{a.common.seed} : parse_uint_list(a.seeds);
  std::vector<std::optional<std::uint64_t>> ks;
  if (a.samples.empty()) {
    ks.push_back(std::nullopt);
  } else {
    for (auto k : parse_uint_list(a.samples)) ks.emplace_back(k);
  }
  for (double eps : grid) make_spec(a.common.norm, eps);
  const Deadline deadline(a.common.timeout);

  // One dataset per (seed, k); cells are (seed, k, eps) in that nesting order.
  std::vector<LabeledDataset> datasets;
  for (auto seed : seeds) {
    for (const auto& k : ks) datasets.push_back(k ? subsample(input.data, *k, seed) : input.data);
  }
  const std::size_t n_cells = datasets.size() * grid.size();
  std::vector<std::string> rows(n_cells);
  const unsigned inner_threads = n_cells > 1 ? 1 : threads;
  parallel_for(n_cells, threads, [&](std::size_t cell) {
    const std::size_t d = cell / grid.size();
    const double eps = grid[cell % grid.size()];
    const std::uint64_t seed = seeds[d / ks.size()];
    const auto& k = ks[d % ks.size()];
    const Stopwatch clock;
    const ConflictGraph g =
        build_conflict_graph(datasets[d], make_spec(a.common.norm, eps), build_options(inner_threads));
    OptProbOptions options;
    options.threads = inner_threads;
    options.stop = deadline.token();
    const BoundCertificate cert = solve_bound(g, options);
    const ZeroOneBound zo = zero_one_bound(cert, g);
    const auto collision = maybe_collision(g);
    rows[cell] = tsv_row({format_double(eps), k ? std::to_string(*k) : "NA", std::to_string(seed),
                          format_double(cert.objective_nats), format_double(zo.value()),
                          std::to_string(g.edges.size()),
                          collision ? format_double(*collision) : "NA",
                          timing_cell(clock.elapsed_ms(), a.common)});
  });

  json m = manifest("sweep", args, input.digest, a.common);
  m["eps_grid"] = grid;
  std::string body = manifest_line(m);
  body += tsv_row({"eps", "k_per_class", "seed", "objective_nats", "zero_one", "edges",
                   "collision_prob", "runtime_ms"});
  for (const auto& row : rows) body += row;
  emit(body, a.common, out);
  return kExitOk;
}

// ---- gaussian ------------------------------------------------------------

struct GaussianArgs {
  CommonArgs common;
  std::optional<double> eps;
  std::string eps_grid;
  std::size_t dim = 2;
  double scale = kDefaultPresetScale;
  double prior = 0.5;
  std::string mu;
  std::string variances;
  std::optional<std::size_t> empirical;  // samples per class
};

GaussianProblem gaussian_problem(const GaussianArgs& a, const NeighborhoodSpec& spec) {
  if (a.mu.empty()) {
    if (!a.variances.empty()) fail(ErrorKind::kUsage, "--var needs --mu");
    GaussianProblem preset = diagonal_preset(a.dim, a.scale, a.common.seed, spec);
    if (a.prior == 0.5) return preset;
    return GaussianProblem(preset.mu(), preset.sigma(), a.prior, spec);
  }
  const auto mu_list = parse_double_list(a.mu);
  const auto var_list =
      a.variances.empty() ? std::vector<double>(mu_list.size(), 1.0) : parse_double_list(a.variances);
  if (var_list.size() != mu_list.size()) {
    fail(ErrorKind::kUsage, "--mu and --var must have the same length");
  }
  const Eigen::Map<const Eigen::VectorXd> mu(mu_list.data(), static_cast<Eigen::Index>(mu_list.size()));
  const Eigen::Map<const Eigen::VectorXd> var(var_list.data(),
                                              static_cast<Eigen::Index>(var_list.size()));
  return GaussianProblem::diagonal(mu, var, a.prior, spec);
}

int cmd_gaussian(const GaussianArgs& a, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  const unsigned threads = resolve_threads(a.common.threads);
  const std::vector<double> grid = eps_values(a.eps, a.eps_grid);
  const GaussianProblem base = gaussian_problem(a, make_spec(a.common.norm, grid.front()));
  const Deadline deadline(a.common.timeout);

  std::optional<LabeledDataset> sample;
  if (a.empirical) {
    // Equal priors: exactly n per class. Otherwise 2n draws from the prior.
    sample = base.prior_plus() == 0.5 ? sample_mixture_per_class(base, *a.empirical, a.common.seed)
                                      : sample_mixture(base, 2 * *a.empirical, a.common.seed);
  }

  std::vector<std::string> header{"eps", "closed_form_nats", "z_norm", "precision_warning"};
  if (sample) {
    header.insert(header.end(), {"empirical_nats", "gap_nats", "n_per_class", "edges", "runtime_ms"});
  }
  std::string body;
  bool warned = false;
  for (double eps : grid) {
    const GaussianProblem prob = base.with_eps(eps);
    const GaussianSolution sol = closed_form_loss(prob);
    warned = warned || sol.precision_warning;
    std::vector<std::string> row{format_double(eps), format_double(sol.loss_nats),
                                 format_double(sol.z_star.norm()),
                                 sol.precision_warning ? "1" : "0"};
    if (sample) {
      const Stopwatch clock;
      const ConflictGraph g = build_conflict_graph(*sample, prob.spec(), build_options(threads));
      OptProbOptions options;
      options.threads = threads;
      options.stop = deadline.token();
      const double empirical = solve_bound(g, options).objective_nats;
      row.insert(row.end(), {format_double(empirical), format_double(sol.loss_nats - empirical),
                             std::to_string(*a.empirical), std::to_string(g.edges.size()),
                             timing_cell(clock.elapsed_ms(), a.common)});
    }
    body += tsv_row(row);
  }
  if (warned) err << "advbound: warning: quadrature precision below 1e-8 relative\n";

  json m = manifest("gaussian", args, "", a.common);
  m["eps_grid"] = grid;
  m["dim"] = base.dim();
  m["prior_plus"] = base.prior_plus();
  m["mu"] = std::vector<double>(base.mu().data(), base.mu().data() + base.mu().size());
  const Eigen::VectorXd diag = base.sigma().diagonal();
  m["sigma_diagonal"] = std::vector<double>(diag.data(), diag.data() + diag.size());
  if (a.mu.empty()) m["preset_scale"] = a.scale;
  emit(manifest_line(m) + tsv_row(header) + body, a.common, out);
  return kExitOk;
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  InputArgs input;
  CommonArgs common;
  std::optional<double> eps;
  std::string eps_grid;
  std::string samples = "100,200,400";
  std::size_t repeats = 3;
  double fw_tol = 1e-6;
  std::size_t dim = 2;
  double scale = kDefaultPresetScale;
};

struct RunSummary {
  std::size_t runs = 0;
  double mean = 0.0;
  double stddev = 0.0;
  bool timed_out = false;
};

RunSummary summarize(const std::vector<double>& ms, bool timed_out) {
  RunSummary s;
  s.runs = ms.size();
  s.timed_out = timed_out;
  if (ms.empty()) return s;
  for (double x : ms) s.mean += x;
  s.mean /= static_cast<double>(ms.size());
  if (ms.size() > 1) {
    double ss = 0.0;
    for (double x : ms) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(ms.size() - 1));
  }
  return s;
}

int cmd_bench(const BenchArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const unsigned threads = resolve_threads(a.common.threads);
  const std::vector<double> grid = eps_values(a.eps, a.eps_grid);
  const std::vector<std::uint64_t> sizes = parse_uint_list(a.samples);
  if (a.repeats == 0) fail(ErrorKind::kUsage, "--repeats must be positive");
  std::optional<LoadedInput> input;
  if (!a.input.path.empty()) input = load_input(a.input);
  const GaussianProblem preset =
      diagonal_preset(a.dim, a.scale, a.common.seed, make_spec(a.common.norm, grid.front()));

  std::string body;
  for (auto k : sizes) {
    const LabeledDataset data = input ? subsample(input->data, k, a.common.seed)
                                      : sample_mixture_per_class(preset, k, a.common.seed);
    for (double eps : grid) {
      const ConflictGraph g =
          build_conflict_graph(data, make_spec(a.common.norm, eps), build_options(threads));
      std::vector<double> opt_ms, fw_ms;
      bool opt_timeout = false, fw_timeout = false;
      double objective = 0.0, fw_objective = 0.0, fw_gap = 0.0;
      for (std::size_t r = 0; r < a.repeats && !opt_timeout; ++r) {
        const Deadline deadline(a.common.timeout);
        OptProbOptions options;
        options.threads = threads;
        options.stop = deadline.token();
        const Stopwatch clock;
        try {
          objective = solve_bound(g, options).objective_nats;
          opt_ms.push_back(clock.elapsed_ms());
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kCancelled) throw;
          opt_timeout = true;
        }
      }
      for (std::size_t r = 0; r < a.repeats && !fw_timeout; ++r) {
        const Deadline deadline(a.common.timeout);
        FrankWolfeOptions options;
        options.gap_tol = a.fw_tol;
        options.stop = deadline.token();
        const Stopwatch clock;
        const FrankWolfeResult fw = frank_wolfe_reference(g, options);
        if (deadline.expired() && !fw.converged) {
          fw_timeout = true;
        } else {
          fw_ms.push_back(clock.elapsed_ms());
        }
        fw_objective = fw.objective;
        fw_gap = fw.gap;
      }
      const RunSummary opt = summarize(opt_ms, opt_timeout);
      const RunSummary fw = summarize(fw_ms, fw_timeout);
      // A timed-out solver is charged the full timeout, so the ratio is a bound.
      const double opt_time = opt.runs ? opt.mean : a.common.timeout * 1e3;
      const double fw_time = fw.runs ? fw.mean : a.common.timeout * 1e3;
      auto status = [](const RunSummary& s) { return s.timed_out ? "timeout" : "ok"; };
      auto mean_cell = [&](const RunSummary& s) {
        return s.runs ? timing_cell(s.mean, a.common) : std::string("NA");
      };
      auto std_cell = [&](const RunSummary& s) {
        return s.runs ? timing_cell(s.stddev, a.common) : std::string("NA");
      };
      body += tsv_row({std::to_string(k), format_double(eps), std::to_string(g.num_vertices()),
                       std::to_string(g.edges.size()), std::to_string(opt.runs), mean_cell(opt),
                       std_cell(opt), status(opt), std::to_string(fw.runs), mean_cell(fw),
                       std_cell(fw), status(fw), format_double(fw_gap),
                       opt.runs ? format_double(fw_objective - objective) : "NA",
                       a.common.no_timings ? "NA" : format_double(fw_time / opt_time)});
    }
  }
  json m = manifest("bench", args, input ? input->digest : "", a.common);
  m["eps_grid"] = grid;
  m["repeats"] = a.repeats;
  m["timeout_s"] = a.common.timeout;
  m["fw_tol"] = a.fw_tol;
  if (!input) m["source"] = {{"preset_dim", a.dim}, {"preset_scale", a.scale}};
  const std::string header =
      tsv_row({"k_per_class", "eps", "n_vertices", "n_edges", "opt_runs", "opt_mean_ms",
               "opt_std_ms", "opt_status", "fw_runs", "fw_mean_ms", "fw_std_ms", "fw_status",
               "fw_gap", "objective_diff", "speedup"});
  emit(manifest_line(m) + header + body, a.common, out);
  return kExitOk;
}

// ---- graph-stats ---------------------------------------------------------

struct GraphStatsArgs {
  InputArgs input;
  CommonArgs common;
  std::optional<double> eps;
  std::string eps_grid;
  std::optional<std::uint64_t> samples;
};

int cmd_graph_stats(const GraphStatsArgs& a, const std::vector<std::string>& args,
                    std::ostream& out) {
  const unsigned threads = resolve_threads(a.common.threads);
  const std::vector<double> grid = eps_values(a.eps, a.eps_grid);
  LoadedInput input = load_input(a.input);
  if (a.samples) input.data = subsample(input.data, *a.samples, a.common.seed);
  std::string body;
  for (double eps : grid) {
    const Stopwatch clock;
    const ConflictGraph g =
        build_conflict_graph(input.data, make_spec(a.common.norm, eps), build_options(threads));
    const double ms = clock.elapsed_ms();
    std::vector<bool> touched_a(g.a_vertices.size()), touched_b(g.b_vertices.size());
    for (const auto& e : g.edges) touched_a[e.a] = touched_b[e.b] = true;
    const auto isolated_a = std::count(touched_a.begin(), touched_a.end(), false);
    const auto isolated_b = std::count(touched_b.begin(), touched_b.end(), false);
    std::size_t components = 0;
    for (const auto& part : decompose_components(SubProblem::whole(g))) {
      components += part.edges.empty() ? 0 : 1;
    }
    const auto collision = maybe_collision(g);
    body += tsv_row({format_double(eps), std::to_string(g.a_vertices.size()),
                     std::to_string(g.b_vertices.size()), std::to_string(g.edges.size()),
                     collision ? format_double(*collision) : "NA", std::to_string(isolated_a),
                     std::to_string(isolated_b), std::to_string(components),
                     timing_cell(ms, a.common)});
  }
  json m = manifest("graph-stats", args, input.digest, a.common);
  m["eps_grid"] = grid;
  const std::string header = tsv_row({"eps", "n_a", "n_b", "edges", "collision_prob",
                                      "isolated_a", "isolated_b", "components", "runtime_ms"});
  emit(manifest_line(m) + header + body, a.common, out);
  return kExitOk;
}

// ---- argument wiring -----------------------------------------------------

void add_input(CLI::App* app, InputArgs& in, bool required) {
  auto* opt = app->add_option("--input", in.path, "Point file (CSV or binary)");
  if (required) opt->required();
  app->add_option("--format", in.format, "Input format; inferred from the extension if absent")
      ->check(CLI::IsMember({"csv", "bin"}));
  app->add_option("--label-col", in.label_col, "CSV label column (negative counts from the end)");
  app->add_option("--classes", in.classes, "Two raw labels mapped to +1,-1, e.g. 3,7");
}

void add_common(CLI::App* app, CommonArgs& c) {
  app->add_option("--norm", c.norm, "Perturbation norm")->check(CLI::IsMember({"l2", "linf"}));
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  app->add_option("--timeout", c.timeout, "Per-solve time limit in seconds (0 = none)");
  app->add_option("--out", c.out, "Write results to this file instead of stdout");
  app->add_flag("--no-timings", c.no_timings, "Omit wall-clock timings for byte-stable output");
}

void add_eps(CLI::App* app, std::optional<double>& eps, std::string& grid) {
  app->add_option("--eps", eps, "Perturbation budget");
  app->add_option("--eps-grid", grid, "Budget grid start:stop:step (inclusive)");
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kCapacity:
    case ErrorKind::kUnsupported:
      return kExitUsage;
    case ErrorKind::kParse:
    case ErrorKind::kFormat:
    case ErrorKind::kEmptyDataset:
    case ErrorKind::kDimension:
    case ErrorKind::kUndefined:
      return kExitInput;
    case ErrorKind::kOverflow:
    case ErrorKind::kNumeric:
      return kExitNumeric;
    case ErrorKind::kCancelled:
    case ErrorKind::kInternal:
      return kExitFailure;
  }
  return kExitFailure;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal lower bounds on adversarial cross-entropy and 0-1 loss", "advbound"};
  app.require_subcommand(1);

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Bound one dataset at one budget (JSON)");
  add_input(bound_cmd, bound.input, true);
  add_common(bound_cmd, bound.common);
  bound_cmd->add_option("--eps", bound.eps, "Perturbation budget")->required();
  bound_cmd->add_option("--samples", bound.samples, "Subsample k points per class");
  bound_cmd->add_flag("--verify", bound.verify, "Check the optimality certificate exactly");
  bound_cmd->add_option("--fw-tol", bound.fw_tol, "Also run the Frank-Wolfe reference to this gap");
  bound_cmd->add_flag("--emit-q", bound.emit_q, "Include per-vertex probabilities");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Bounds over budgets, sample sizes and seeds (TSV)");
  add_input(sweep_cmd, sweep.input, true);
  add_common(sweep_cmd, sweep.common);
  add_eps(sweep_cmd, sweep.eps, sweep.eps_grid);
  sweep_cmd->add_option("--samples", sweep.samples, "Comma list of k per class (nested subsamples)");
  sweep_cmd->add_option("--seeds", sweep.seeds, "Comma list of subsampling seeds");

  GaussianArgs gauss;
  auto* gauss_cmd = app.add_subcommand("gaussian", "Closed-form Gaussian mixture bound (TSV)");
  add_common(gauss_cmd, gauss.common);
  add_eps(gauss_cmd, gauss.eps, gauss.eps_grid);
  gauss_cmd->add_option("--dim", gauss.dim, "Preset dimension");
  gauss_cmd->add_option("--scale", gauss.scale, "Preset mean scale C in mu_i = C Sigma_ii / sqrt(d)");
  gauss_cmd->add_option("--prior", gauss.prior, "Prior of class +1");
  gauss_cmd->add_option("--mu", gauss.mu, "Explicit mean, comma separated (overrides the preset)");
  gauss_cmd->add_option("--var", gauss.variances, "Explicit diagonal variances, comma separated");
  gauss_cmd->add_option("--empirical", gauss.empirical,
                        "Also bound a sampled dataset with this many points per class");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the exact solver against Frank-Wolfe (TSV)");
  add_input(bench_cmd, bench.input, false);
  add_common(bench_cmd, bench.common);
  add_eps(bench_cmd, bench.eps, bench.eps_grid);
  bench_cmd->add_option("--samples", bench.samples, "Comma list of k per class");
  bench_cmd->add_option("--repeats", bench.repeats, "Timed runs per solver and cell");
  bench_cmd->add_option("--fw-tol", bench.fw_tol, "Frank-Wolfe gap tolerance");
  bench_cmd->add_option("--dim", bench.dim, "Preset dimension when no input is given");
  bench_cmd->add_option("--scale", bench.scale, "Preset mean scale when no input is given");

  GraphStatsArgs stats;
  auto* stats_cmd = app.add_subcommand("graph-stats", "Conflict graph statistics per budget (TSV)");
  add_input(stats_cmd, stats.input, true);
  add_common(stats_cmd, stats.common);
  add_eps(stats_cmd, stats.eps, stats.eps_grid);
  stats_cmd->add_option("--samples", stats.samples, "Subsample k points per class");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "advbound: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (bound_cmd->parsed()) return cmd_bound(bound, args, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, args, out);
    if (gauss_cmd->parsed()) return cmd_gaussian(gauss, args, out, err);
    if (bench_cmd->parsed()) return cmd_bench(bench, args, out);
    if (stats_cmd->parsed()) return cmd_graph_stats(stats, args, out);
  } catch (const Error& e) {
    err << "advbound: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    err << "advbound: out of memory\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "advbound: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace advbound::cli

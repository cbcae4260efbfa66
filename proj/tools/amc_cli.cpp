// Command-line front end: dataset generation, graph construction, sampling,
// completion, scoring and experiment sweeps.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

#include "amc/completion.hpp"
#include "amc/experiments.hpp"
#include "amc/graphs.hpp"
#include "amc/sampling.hpp"

namespace fs = std::filesystem;
using namespace amc;
using linalg::DenseMatrix;
using linalg::Index;

namespace {

graphs::GraphLaplacian load_graph(const std::string& path) {
  return graphs::laplacian_from_weights(linalg::load_edge_list(path));
}

// Integer K, or a fraction of mn when the text has a decimal point or exponent.
Index parse_budget(const std::string& text, Index mn) {
  if (text.find_first_of(".eE") != std::string::npos) {
    const auto f = experiments::detail::parse_double(text);
    if (!f || !(*f > 0.0 && *f <= 1.0)) throw InvalidArgument("--budget: fraction must lie in (0,1]");
    return Index(std::llround(*f * double(mn)));
  }
  const auto k = experiments::detail::parse_int(text);
  if (!k || *k < 0) throw InvalidArgument("--budget: expected a count or a fraction");
  return Index(*k);
}

struct GenArgs {
  Index m = 60, n = 40, row_comm = 4, col_comm = 4;
  double noise = 0.0, p_in = 0.5, p_out = 0.02;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int run_gen(const GenArgs& a) {
  graphs::SyntheticOptions so;
  so.p_in = a.p_in;
  so.p_out = a.p_out;
  const auto s = graphs::synthetic_netflix(a.m, a.n, a.row_comm, a.col_comm, a.noise, a.seed, so);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  experiments::save_ratings((dir / "ratings.csv").string(), s.observed);
  completion::save_matrix_csv((dir / "truth.csv").string(), s.truth);
  linalg::save_edge_list((dir / "row_graph.txt").string(), s.rows.graph.weights());
  linalg::save_edge_list((dir / "col_graph.txt").string(), s.cols.graph.weights());
  std::cout << "wrote " << a.m << "x" << a.n << " dataset to " << dir.string() << '\n';
  return 0;
}

struct GraphArgs {
  std::string kind, features, ratings, axis = "rows", out;
  Index k = 10;
  std::optional<double> d_s, gamma;
};

int run_graph(const GraphArgs& a) {
  graphs::GraphLaplacian g;
  if (a.kind == "g1") {
    if (a.features.empty()) throw InvalidArgument("graph g1 needs --features");
    g = graphs::knn_feature_graph(completion::load_matrix_csv(a.features), a.k);
  } else {
    if (a.ratings.empty()) throw InvalidArgument("graph g2 needs --ratings");
    graphs::ContentGraphOptions o;
    o.d_s = a.d_s;
    o.gamma = a.gamma;
    const auto cg = graphs::content_graph(experiments::load_ratings(a.ratings),
                                          a.axis == "rows" ? graphs::Axis::rows : graphs::Axis::cols, o);
    g = cg.graph;
    std::cerr << "d_min=" << cg.d_min << " d_s=" << cg.d_s << " gamma=" << cg.gamma
              << " components=" << cg.components << '\n';
  }
  linalg::save_edge_list(a.out, g.weights());
  std::cout << "wrote graph with " << g.n() << " nodes to " << a.out << '\n';
  return 0;
}

struct SampleArgs {
  std::string method = "gcs", budget, pool, initial, row_graph, col_graph, out;
  double alpha = 0.1, beta = 0.1, q = 0.5;
  Index zeta = 1, lpool = 10, k1 = 4, k2 = 4;
  std::uint64_t seed = 0;
  bool cold = false;
};

int run_sample(const SampleArgs& a) {
  const auto rg = load_graph(a.row_graph), cg = load_graph(a.col_graph);
  const Index m = rg.n(), n = cg.n();
  graphs::ProductOperator op(rg, cg, a.alpha, a.beta);
  std::vector<Index> initial;
  if (!a.initial.empty()) initial = sampling::load_sample_set(a.initial, m, n).linear();
  for (Index l : initial) op.add_sample(l);
  sampling::IndexMask allowed = sampling::full_mask(m * n);
  if (!a.pool.empty()) allowed = sampling::mask_from_indices(m * n, sampling::load_sample_set(a.pool, m, n).linear());
  for (Index l : initial) allowed[l] = 0;

  experiments::MethodSpec spec;
  spec.method = a.method;
  spec.alpha = a.alpha;
  spec.beta = a.beta;
  spec.q = a.q;
  spec.zeta = a.zeta;
  spec.pool = a.lpool;
  spec.k1 = a.k1;
  spec.k2 = a.k2;
  spec.warm_start = !a.cold;
  const Index k = parse_budget(a.budget, m * n);
  const auto run = experiments::run_sampler(spec, op, k, allowed, a.seed);
  sampling::SampleMeta meta{a.method, k, a.seed, a.alpha, a.beta, a.q, a.zeta, run.iter_counts,
                            run.wall_time_seconds, m, n};
  sampling::save_sample_set(a.out, run.samples, meta);
  std::cout << "sampled " << run.samples.size() << " entries in " << run.wall_time_seconds << " s -> " << a.out
            << '\n';
  return 0;
}

struct CompleteArgs {
  std::string ratings, omega, row_graph, col_graph, out, report;
  double alpha = 0.1, beta = 0.1, tol = 1e-8;
};

int run_complete(const CompleteArgs& a) {
  const auto y = experiments::load_ratings(a.ratings);
  auto p = completion::make_problem(y, load_graph(a.row_graph), load_graph(a.col_graph), a.alpha, a.beta);
  if (!a.omega.empty()) {
    p.omega = sampling::load_sample_set(a.omega, y.m(), y.n()).linear();
    p.y = experiments::restrict_ratings(y, p.omega);
  }
  completion::SolveOptions so;
  so.cg.tol = a.tol;
  const auto rep = completion::dglr_solve(p, so);
  if (!a.out.empty()) completion::save_matrix_csv(a.out, rep.x_star);
  if (!a.report.empty()) completion::save_report(a.report, rep);
  std::cout << completion::report_to_json(rep).dump(2) << '\n';
  return 0;
}

struct EvalArgs {
  std::string estimate, truth, truth_matrix, exclude;
};

int run_eval(const EvalArgs& a) {
  const auto x = completion::load_matrix_csv(a.estimate);
  const Index m = Index(x.rows()), n = Index(x.cols());
  std::vector<char> skip(m * n, 0);
  if (!a.exclude.empty()) {
    const auto excluded = sampling::load_sample_set(a.exclude, m, n);
    for (Index l : excluded.linear()) skip[l] = 1;
  }
  std::vector<Index> idx;
  DenseMatrix truth;
  if (!a.truth_matrix.empty()) {
    truth = completion::load_matrix_csv(a.truth_matrix);
    for (Index l = 0; l < m * n; ++l) idx.push_back(l);
  } else if (!a.truth.empty()) {
    const auto r = experiments::load_ratings(a.truth);
    if (r.m() != m || r.n() != n) throw DimensionError("eval: truth shape does not match the estimate");
    truth = r.to_dense();
    idx = r.known_indices();
  } else {
    throw InvalidArgument("eval needs --truth or --truth-matrix");
  }
  std::erase_if(idx, [&](Index l) { return l >= m * n || skip[l]; });
  const double rmse = completion::rmse_eval(x, truth, idx);
  std::cout << nlohmann::json{{"rmse", rmse}, {"count", idx.size()}}.dump() << '\n';
  return 0;
}

int run_experiment_cmd(const std::string& config, const std::string& out_dir) {
  auto cfg = experiments::load_config(config);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const auto res = experiments::run_experiment(cfg);
  std::map<std::pair<std::string, Index>, std::pair<double, int>> mean;
  for (const auto& r : res.rows) {
    auto& [sum, count] = mean[{r.method, r.k}];
    sum += r.rmse;
    ++count;
  }
  std::cout << std::left << std::setw(16) << "method" << std::setw(8) << "K" << "mean_rmse\n";
  for (const auto& [key, v] : mean)
    std::cout << std::setw(16) << key.first << std::setw(8) << key.second << v.first / v.second << '\n';
  if (!res.failures.empty()) {
    std::cerr << res.failures.size() << " failed cell(s):\n";
    for (const auto& f : res.failures)
      std::cerr << "  " << f.method << " seed=" << f.seed << " K=" << f.k << ": " << f.error << '\n';
  }
  return res.rows.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based active matrix completion"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic dual-community rating dataset");
  g->add_option("--m", gen.m, "Rows")->capture_default_str();
  g->add_option("--n", gen.n, "Columns")->capture_default_str();
  g->add_option("--row-comm", gen.row_comm, "Row communities")->capture_default_str();
  g->add_option("--col-comm", gen.col_comm, "Column communities")->capture_default_str();
  g->add_option("--noise", gen.noise, "Noise standard deviation")->capture_default_str();
  g->add_option("--p-in", gen.p_in, "Intra-community edge probability")->capture_default_str();
  g->add_option("--p-out", gen.p_out, "Inter-community edge probability")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();

  GraphArgs graph;
  auto* gr = app.add_subcommand("graph", "Build a feature (g1) or content (g2) graph");
  gr->add_option("--kind", graph.kind)->required()->check(CLI::IsMember({"g1", "g2"}));
  gr->add_option("--features", graph.features, "Dense CSV, one node per line (g1)");
  gr->add_option("--k", graph.k, "Neighbors (g1)")->capture_default_str();
  gr->add_option("--ratings", graph.ratings, "Ratings CSV (g2)");
  gr->add_option("--axis", graph.axis, "rows or cols (g2)")->check(CLI::IsMember({"rows", "cols"}));
  gr->add_option("--d-s", graph.d_s, "Sparsification threshold (g2)");
  gr->add_option("--gamma", graph.gamma, "Kernel width (g2)");
  gr->add_option("--out", graph.out, "Edge list output")->required();

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "Select entries to sample");
  s->add_option("--method", sample.method)->check(CLI::IsMember({"gcs", "igcs", "random", "aopt"}))->capture_default_str();
  s->add_option("--budget", sample.budget, "K, or a fraction of m*n")->required();
  s->add_option("--alpha", sample.alpha)->capture_default_str();
  s->add_option("--beta", sample.beta)->capture_default_str();
  s->add_option("--q", sample.q)->capture_default_str();
  s->add_option("--zeta", sample.zeta)->capture_default_str();
  s->add_option("--pool", sample.pool, "Sample CSV listing the candidate entries (default: all)");
  s->add_option("--initial", sample.initial, "Sample CSV of entries already observed");
  s->add_option("--lpool", sample.lpool, "A-opt local pool size")->capture_default_str();
  s->add_option("--k1", sample.k1, "A-opt column bandwidth")->capture_default_str();
  s->add_option("--k2", sample.k2, "A-opt row bandwidth")->capture_default_str();
  s->add_flag("--cold", sample.cold, "Disable eigenvector warm starts");
  s->add_option("--seed", sample.seed)->capture_default_str();
  s->add_option("--row-graph", sample.row_graph)->required();
  s->add_option("--col-graph", sample.col_graph)->required();
  s->add_option("--out", sample.out, "Sample CSV output (metadata goes to <out>.json)")->required();

  CompleteArgs comp;
  auto* c = app.add_subcommand("complete", "Solve the dual-graph regularized completion");
  c->add_option("--ratings", comp.ratings)->required();
  c->add_option("--omega", comp.omega, "Sample CSV restricting the observed entries");
  c->add_option("--row-graph", comp.row_graph)->required();
  c->add_option("--col-graph", comp.col_graph)->required();
  c->add_option("--alpha", comp.alpha)->capture_default_str();
  c->add_option("--beta", comp.beta)->capture_default_str();
  c->add_option("--tol", comp.tol, "CG relative residual")->capture_default_str();
  c->add_option("--out", comp.out, "Dense CSV of the completed matrix");
  c->add_option("--report", comp.report, "JSON report");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "RMSE of a completed matrix");
  e->add_option("--estimate", ev.estimate)->required();
  e->add_option("--truth", ev.truth, "Ratings CSV; scores its known entries");
  e->add_option("--truth-matrix", ev.truth_matrix, "Dense CSV; scores every entry");
  e->add_option("--exclude", ev.exclude, "Sample CSV of entries left out of the score");

  std::string config, exp_out;
  auto* x = app.add_subcommand("experiment", "Run a configured sweep");
  x->add_option("--config", config, "JSON config")->required();
  x->add_option("--output-dir", exp_out, "Overrides output_dir");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*g) return run_gen(gen);
    if (*gr) return run_graph(graph);
    if (*s) return run_sample(sample);
    if (*c) return run_complete(comp);
    if (*e) return run_eval(ev);
    if (*x) return run_experiment_cmd(config, exp_out);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}

// Command-line driver: synthesize or ingest Grassmann point sets, build Gram
// matrices, solve for the low-rank representation and cluster.

#include "glrr/clustering.hpp"
#include "glrr/dataio.hpp"
#include "glrr/error.hpp"
#include "glrr/evaluation.hpp"
#include "glrr/io.hpp"
#include "glrr/kernel.hpp"
#include "glrr/pipeline.hpp"
#include "glrr/solver_admm.hpp"
#include "glrr/solver_closed.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kFormatError = 3,
  kNumericalError = 4,
  kNotConverged = 5,
};

struct ConfigOptions {
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string labels;
  std::string z;
  std::string diagnostics;
  bool quiet = false;
};

void add_config_options(CLI::App* cmd, ConfigOptions& o) {
  cmd->add_option("-c,--config", o.config_file, "key = value experiment file");
  cmd->add_option("-s,--set", o.overrides, "override a config key (key=value), repeatable");
  cmd->add_option("--lambda", o.lambda, "nuclear-norm weight");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--report", o.report, "report JSON output path");
  cmd->add_option("--labels", o.labels, "predicted labels CSV output path");
  cmd->add_option("--z", o.z, "coefficient matrix output (.csv or GRAM binary)");
  cmd->add_option("--diagnostics", o.diagnostics, "ADMM per-iteration JSON lines output");
  cmd->add_flag("-q,--quiet", o.quiet, "suppress progress log");
}

glrr::ExperimentConfig build_config(const ConfigOptions& o) {
  glrr::ExperimentConfig cfg;
  if (!o.config_file.empty()) glrr::apply_settings(cfg, glrr::parse_config_file(o.config_file));
  std::map<std::string, std::string> kv;
  for (const auto& ov : o.overrides) {
    std::istringstream line(ov);
    for (auto& [k, v] : glrr::parse_config_text(line)) kv[k] = v;
  }
  glrr::apply_settings(cfg, kv);
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.seed) cfg.seed = *o.seed;
  if (!o.report.empty()) cfg.report_path = o.report;
  if (!o.labels.empty()) cfg.labels_path = o.labels;
  if (!o.z.empty()) cfg.z_path = o.z;
  if (!o.diagnostics.empty()) cfg.diagnostics_path = o.diagnostics;
  return cfg;
}

glrr::KernelKind parse_kernel(const std::string& name) {
  if (name == "proj") return glrr::KernelKind::kProjection;
  if (name == "cc") return glrr::KernelKind::kCanonicalCorrelation;
  if (name == "cc+proj") return glrr::KernelKind::kCombined;
  throw glrr::ConfigError("unknown kernel '" + name + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream in(item);
    double v = 0.0;
    if (!(in >> v)) throw glrr::ConfigError("bad number '" + item + "' in list");
    out.push_back(v);
  }
  if (out.empty()) throw glrr::ConfigError("empty list");
  return out;
}

int run_cluster(const ConfigOptions& o) {
  const glrr::ExperimentConfig cfg = build_config(o);
  const glrr::PipelineResult res = glrr::run_pipeline(cfg, o.quiet ? nullptr : &std::clog);
  if (cfg.report_path.empty()) std::cout << res.report_json.dump(2) << '\n';
  return res.converged ? kOk : kNotConverged;
}

int run_sweep(const ConfigOptions& o, const std::string& lambdas, const std::string& out_path) {
  const glrr::ExperimentConfig cfg = build_config(o);
  const auto points = glrr::run_sweep(cfg, parse_list(lambdas), o.quiet ? nullptr : &std::clog);
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw glrr::InputError("cannot open " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  bool all_converged = true;
  for (const auto& pt : points) {
    nlohmann::json j = {{"lambda", pt.lambda}, {"rank", pt.rank}, {"converged", pt.converged}};
    j["accuracy"] = pt.accuracy ? nlohmann::json(*pt.accuracy) : nlohmann::json(nullptr);
    out << j.dump() << '\n';
    all_converged = all_converged && pt.converged;
  }
  return all_converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank representation clustering of Grassmann points"};
  app.require_subcommand(1);

  ConfigOptions cluster_opts;
  auto* cluster = app.add_subcommand("cluster", "run the full clustering pipeline");
  add_config_options(cluster, cluster_opts);

  ConfigOptions sweep_opts;
  std::string sweep_lambdas = "0.1,0.5,1,2,5,10,20,50";
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "pipeline accuracy over a list of lambdas");
  add_config_options(sweep, sweep_opts);
  sweep->add_option("--lambdas", sweep_lambdas, "comma separated lambda values");
  sweep->add_option("-o,--out", sweep_out, "JSON lines output (default stdout)");

  std::string gram_in, gram_out, gram_kernel = "proj";
  std::optional<double> gram_alpha;
  auto* gram = app.add_subcommand("gram", "Gram matrix of a GPTS point set");
  gram->add_option("-i,--input", gram_in, "GPTS file")->required();
  gram->add_option("-k,--kernel", gram_kernel, "proj, cc or cc+proj");
  gram->add_option("--alpha", gram_alpha, "cc weight for cc+proj");
  gram->add_option("-o,--out", gram_out, "output (.csv or GRAM binary)")->required();

  std::string solve_gram, solve_points, solve_out, solve_solver = "frobenius", solve_diag;
  double solve_lambda = 0.0;
  glrr::AdmmParams solve_admm;
  auto* solve = app.add_subcommand("solve", "low-rank representation from a Gram matrix");
  auto* solve_gram_opt = solve->add_option("-g,--gram", solve_gram, "Gram matrix (.csv or GRAM)");
  auto* solve_points_opt = solve->add_option("-i,--input", solve_points, "GPTS point set");
  solve_gram_opt->excludes(solve_points_opt);
  solve->add_option("--solver", solve_solver, "frobenius or admm");
  solve->add_option("--lambda", solve_lambda, "nuclear-norm weight")->required();
  solve->add_option("--max-iters", solve_admm.max_iters, "ADMM iteration cap");
  solve->add_option("--eta", solve_admm.eta, "ADMM linearization constant");
  solve->add_option("--diagnostics", solve_diag, "ADMM per-iteration JSON lines output");
  solve->add_option("-o,--out", solve_out, "Z output (.csv or GRAM binary)")->required();

  std::string eval_pred, eval_truth, eval_out;
  auto* eval = app.add_subcommand("eval", "permutation-optimal accuracy of predicted labels");
  eval->add_option("--pred", eval_pred, "predicted labels CSV")->required();
  eval->add_option("--truth", eval_truth, "ground truth labels CSV")->required();
  eval->add_option("-o,--out", eval_out, "report JSON output (default stdout)");

  glrr::SyntheticSpec synth_spec;
  std::uint64_t synth_seed = 0;
  std::string synth_out, synth_truth;
  auto* synth = app.add_subcommand("synth", "generate a synthetic clustered GPTS set");
  synth->add_option("--clusters", synth_spec.clusters);
  synth->add_option("--per-cluster", synth_spec.per_cluster);
  synth->add_option("--d", synth_spec.d, "ambient dimension");
  synth->add_option("--p", synth_spec.p, "subspace dimension");
  synth->add_option("--angle", synth_spec.angle, "perturbation bound in radians");
  synth->add_flag("--orthogonal", synth_spec.orthogonal_centers, "mutually orthogonal centers");
  synth->add_option("--seed", synth_seed);
  synth->add_option("-o,--out", synth_out, "GPTS output")->required();
  synth->add_option("--truth", synth_truth, "ground truth labels CSV output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cluster) return run_cluster(cluster_opts);
    if (*sweep) return run_sweep(sweep_opts, sweep_lambdas, sweep_out);

    if (*gram) {
      const auto set = glrr::io::read_gpts(gram_in);
      const auto g = glrr::build_gram(set, parse_kernel(gram_kernel), gram_alpha.value_or(-1.0));
      glrr::io::write_matrix(gram_out, g.values);
      return kOk;
    }

    if (*solve) {
      if (solve_gram.empty() && solve_points.empty()) {
        throw glrr::ConfigError("solve needs --gram or --input");
      }
      glrr::GramMatrix g;
      if (!solve_gram.empty()) {
        g.values = glrr::io::read_matrix(solve_gram);
      } else {
        g = glrr::proj_gram(glrr::io::read_gpts(solve_points));
      }
      if (solve_solver == "frobenius") {
        const auto sol = glrr::solve_frobenius(g, solve_lambda);
        std::clog << "rank=" << sol.rank << " clamped_mass=" << sol.clamped_mass << '\n';
        glrr::io::write_matrix(solve_out, sol.z);
        return kOk;
      }
      if (solve_solver != "admm") throw glrr::ConfigError("unknown solver '" + solve_solver + "'");
      solve_admm.lambda = solve_lambda;
      std::ofstream diag;
      glrr::IterationObserver observer;
      if (!solve_diag.empty()) {
        diag.open(solve_diag);
        if (!diag) throw glrr::InputError("cannot open " + solve_diag);
        observer = [&diag](const glrr::IterationRecord& r) {
          diag << nlohmann::json{{"iter", r.iter},
                                 {"primal_residual", r.primal_residual},
                                 {"update_magnitude", r.update_magnitude},
                                 {"mu", r.mu},
                                 {"rank_Z", r.rank_z}}
                      .dump()
               << '\n';
        };
      }
      const auto res = glrr::run_admm(g.values, solve_admm, observer);
      std::clog << "iterations=" << res.iterations
                << " termination=" << glrr::to_string(res.termination) << '\n';
      glrr::io::write_matrix(solve_out, res.z);
      return res.converged() ? kOk : kNotConverged;
    }

    if (*eval) {
      const auto pred = glrr::make_labels(glrr::io::read_labels_csv(eval_pred));
      const auto truth = glrr::make_labels(glrr::io::read_labels_csv(eval_truth));
      const auto report = glrr::accuracy(pred, truth);
      const std::string text = glrr::report_to_json(report).dump(2);
      if (eval_out.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream out(eval_out);
        if (!out) throw glrr::InputError("cannot open " + eval_out);
        out << text << '\n';
      }
      return kOk;
    }

    if (*synth) {
      const auto s = glrr::generate_synthetic(synth_spec, synth_seed);
      glrr::io::write_gpts(synth_out, s.points);
      if (!synth_truth.empty()) glrr::io::write_labels_csv(synth_truth, s.labels);
      return kOk;
    }
  } catch (const glrr::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormatError;
  } catch (const glrr::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const glrr::RankDeficiencyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const glrr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

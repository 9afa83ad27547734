#include "glrr/pipeline.hpp"

#include "glrr/error.hpp"
#include "glrr/io.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <utility>

namespace glrr {

namespace {

constexpr std::uint64_t kNoiseSeedOffset = 0x9E3779B97F4A7C15ull;

template <typename Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (Error& e) {
    e.set_stage(stage);
    throw;
  }
}

double required_lambda(const ExperimentConfig& c) {
  if (!c.lambda) throw ConfigError("lambda is required");
  return *c.lambda;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXi& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& config) {
  nlohmann::json meta;
  switch (config.dataset) {
    case DatasetKind::kMnist: {
      ImageDataset images = staged("ingest", [&] {
        return load_idx(config.mnist_images, config.mnist_labels);
      });
      images = staged("noise", [&] {
        return add_noise(images, config.noise_sigma, config.seed + kNoiseSeedOffset);
      });
      const auto groups =
          staged("group", [&] { return group_images(images, config.group_size, config.seed); });
      if (groups.empty()) {
        InputError err("no class has enough images for one group");
        err.set_stage("group");
        throw err;
      }
      std::vector<GrassmannPoint> points;
      std::vector<int> labels;
      points.reserve(groups.size());
      staged("subspace", [&] {
        for (const auto& g : groups) {
          points.push_back(from_samples(g.samples, config.p));
          labels.push_back(g.label);
        }
      });
      meta["images"] = images.count;
      meta["groups"] = groups.size();
      meta["pixel_scaling"] = "byte / 255";
      meta["noise_sigma"] = config.noise_sigma;
      meta["noise_clipped"] = false;
      std::set<int> classes(labels.begin(), labels.end());
      const int k = classes.empty() ? 1 : *classes.rbegin() + 1;
      return PreparedData{GrassmannSet(std::move(points)), make_labels(std::move(labels), k),
                          std::move(meta)};
    }
    case DatasetKind::kSynthetic: {
      SyntheticSet s =
          staged("ingest", [&] { return generate_synthetic(config.synthetic, config.seed); });
      return PreparedData{std::move(s.points), make_labels(std::move(s.labels)), std::move(meta)};
    }
    case DatasetKind::kGpts: {
      GrassmannSet set = staged("ingest", [&] { return io::read_gpts(config.gpts_path); });
      std::optional<ClusterLabels> truth;
      if (!config.truth_path.empty()) {
        truth = staged("ingest", [&] {
          auto lab = io::read_labels_csv(config.truth_path);
          if (lab.size() != set.size()) {
            throw InputError("truth has " + std::to_string(lab.size()) + " labels for " +
                             std::to_string(set.size()) + " points");
          }
          return make_labels(std::move(lab));
        });
      }
      return PreparedData{std::move(set), std::move(truth), std::move(meta)};
    }
  }
  throw ConfigError("unknown dataset kind");
}

GramMatrix build_config_gram(const ExperimentConfig& config, const GrassmannSet& points) {
  return staged("gram",
                [&] { return build_gram(points, config.kernel, config.alpha.value_or(0.0)); });
}

SolveOutcome solve_config(const ExperimentConfig& config, const GramMatrix& gram, double lambda,
                          const SymmetricEigen* eig, const IterationObserver& observer) {
  return staged("solve", [&] {
    SolveOutcome out;
    if (config.solver == SolverKind::kFrobenius) {
      FrobeniusSolution sol = eig ? solve_frobenius(*eig, lambda) : solve_frobenius(gram, lambda);
      nlohmann::json spectrum = nlohmann::json::array();
      for (const auto& s : sol.spectrum) spectrum.push_back({s.sigma, s.shrunk});
      out.diagnostics = {{"solver", "frobenius"},
                         {"lambda", lambda},
                         {"rank", sol.rank},
                         {"clamped_mass", sol.clamped_mass},
                         {"spectrum", std::move(spectrum)}};
      out.z = std::move(sol.z);
      out.converged = true;
      return out;
    }
    if (gram.kind != KernelKind::kProjection) {
      throw ConfigError("the admm solver works on the projection kernel only");
    }
    AdmmParams params = config.admm;
    params.lambda = lambda;
    AdmmResult res = run_admm(gram.values, params, observer);
    const IterationRecord last =
        res.best_iter > 0 ? res.history[static_cast<std::size_t>(res.best_iter - 1)]
                          : IterationRecord{};
    out.diagnostics = {{"solver", "admm"},
                       {"lambda", lambda},
                       {"iterations", res.iterations},
                       {"returned_iter", res.best_iter},
                       {"termination", to_string(res.termination)},
                       {"converged", res.converged()},
                       {"eta", res.eta},
                       {"mu_final", res.mu},
                       {"primal_residual", last.primal_residual},
                       {"update_magnitude", last.update_magnitude},
                       {"rank", last.rank_z}};
    out.z = std::move(res.z);
    out.converged = res.converged();
    return out;
  });
}

nlohmann::json report_to_json(const ClusterReport& report) {
  nlohmann::json mapping = nlohmann::json::array();
  for (std::size_t c = 0; c < report.mapping.size(); ++c) {
    mapping.push_back({{"cluster", c}, {"class", report.mapping[c]}});
  }
  return {{"accuracy", report.accuracy},
          {"mapping", std::move(mapping)},
          {"contingency", matrix_to_json(report.contingency)},
          {"n", report.n},
          {"k", report.k}};
}

PipelineResult cluster_and_score(const ExperimentConfig& config, const PreparedData& data,
                                 SolveOutcome outcome, double lambda) {
  PipelineResult res;
  const int k = config.k ? *config.k : (data.truth ? data.truth->k : 0);
  if (k < 1) {
    ConfigError err("k is required when no ground truth is available");
    err.set_stage("cluster");
    throw err;
  }
  res.predicted = staged("cluster", [&] {
    return spectral_cluster(affinity(outcome.z), k, config.seed, config.restarts);
  });
  if (data.truth) {
    res.report = staged("evaluate", [&] { return accuracy(res.predicted, *data.truth); });
    res.report_json = report_to_json(*res.report);
  } else {
    res.report_json = {{"accuracy", nullptr}, {"n", res.predicted.size()}, {"k", k}};
  }
  ExperimentConfig effective = config;
  effective.lambda = lambda;
  res.report_json["config"] = config_to_json(effective);
  res.report_json["data"] = data.metadata;
  res.report_json["data"]["n_points"] = data.points.size();
  res.report_json["data"]["d"] = data.points.ambient_dim();
  res.report_json["data"]["p"] = data.points.subspace_dim();
  res.report_json["solver"] = std::move(outcome.diagnostics);
  res.converged = outcome.converged;
  res.z = std::move(outcome.z);
  return res;
}

PipelineResult run_pipeline(const ExperimentConfig& config, std::ostream* log) {
  staged("config", [&] { validate(config); });
  const double lambda = staged("config", [&] { return required_lambda(config); });

  const PreparedData data = prepare_data(config);
  if (log) {
    *log << "points: N=" << data.points.size() << " d=" << data.points.ambient_dim()
         << " p=" << data.points.subspace_dim() << '\n';
  }
  const GramMatrix gram = build_config_gram(config, data.points);

  std::ofstream diag;
  IterationObserver observer;
  if (config.solver == SolverKind::kAdmm && !config.diagnostics_path.empty()) {
    diag.open(config.diagnostics_path);
    if (!diag) {
      throw InputError("output: cannot open " + config.diagnostics_path.string());
    }
    observer = [&diag](const IterationRecord& r) {
      diag << nlohmann::json{{"iter", r.iter},
                             {"primal_residual", r.primal_residual},
                             {"update_magnitude", r.update_magnitude},
                             {"mu", r.mu},
                             {"rank_Z", r.rank_z}}
                  .dump()
           << '\n';
    };
  }
  SolveOutcome outcome = solve_config(config, gram, lambda, nullptr, observer);
  if (log) {
    const auto& dg = outcome.diagnostics;
    *log << "solver: " << dg["solver"].get<std::string>() << " lambda=" << lambda
         << " rank=" << dg["rank"].dump();
    if (dg.contains("clamped_mass")) *log << " clamped_mass=" << dg["clamped_mass"].dump();
    if (dg.contains("spectrum") && !dg["spectrum"].empty()) {
      *log << " sigma_max=" << dg["spectrum"][0][0].dump();
    }
    if (dg.contains("iterations")) {
      *log << " iterations=" << dg["iterations"].dump()
           << " termination=" << dg["termination"].get<std::string>();
    }
    *log << '\n';
  }

  PipelineResult res = cluster_and_score(config, data, std::move(outcome), lambda);
  if (log && res.report) *log << "accuracy: " << res.report->accuracy << '\n';

  staged("output", [&] {
    if (!config.report_path.empty()) {
      std::ofstream out(config.report_path);
      if (!out) throw InputError("cannot open " + config.report_path.string());
      out << res.report_json.dump(2) << '\n';
    }
    if (!config.labels_path.empty()) io::write_labels_csv(config.labels_path, res.predicted.labels);
    if (!config.z_path.empty()) io::write_matrix(config.z_path, res.z);
  });
  return res;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& config,
                                  const std::vector<double>& lambdas, std::ostream* log) {
  staged("config", [&] {
    ExperimentConfig probe = config;
    probe.lambda = lambdas.empty() ? 1.0 : lambdas.front();
    validate(probe);
    for (double l : lambdas) {
      if (!(l >= 0.0)) throw ConfigError("sweep lambdas must be non-negative");
    }
  });
  const PreparedData data = prepare_data(config);
  const GramMatrix gram = build_config_gram(config, data.points);
  std::optional<SymmetricEigen> eig;
  if (config.solver == SolverKind::kFrobenius) {
    eig = staged("solve", [&] { return symmetric_eigen(gram.values); });
  }

  std::vector<SweepPoint> out;
  for (double lambda : lambdas) {
    SolveOutcome outcome = solve_config(config, gram, lambda, eig ? &*eig : nullptr);
    SweepPoint pt;
    pt.lambda = lambda;
    pt.rank = outcome.diagnostics["rank"].get<Eigen::Index>();
    pt.converged = outcome.converged;
    PipelineResult res = cluster_and_score(config, data, std::move(outcome), lambda);
    if (res.report) pt.accuracy = res.report->accuracy;
    if (log) {
      *log << "lambda=" << lambda << " rank=" << pt.rank << " accuracy="
           << (pt.accuracy ? std::to_string(*pt.accuracy) : std::string("n/a")) << '\n';
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace glrr

#pragma once

#include "glrr/clustering.hpp"
#include "glrr/dataio.hpp"
#include "glrr/evaluation.hpp"
#include "glrr/kernel.hpp"
#include "glrr/solver_admm.hpp"
#include "glrr/solver_closed.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace glrr {

enum class DatasetKind { kMnist, kSynthetic, kGpts };
enum class SolverKind { kFrobenius, kAdmm };

struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::kSynthetic;
  std::filesystem::path mnist_images;
  std::filesystem::path mnist_labels;
  std::filesystem::path gpts_path;
  std::filesystem::path truth_path;  // optional labels CSV for gpts input
  SyntheticSpec synthetic;

  int group_size = 20;
  int p = 20;
  KernelKind kernel = KernelKind::kProjection;
  std::optional<double> alpha;
  SolverKind solver = SolverKind::kFrobenius;
  std::optional<double> lambda;
  AdmmParams admm;
  std::optional<int> k;  // defaults to the number of ground-truth classes
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  int restarts = kDefaultRestarts;

  std::filesystem::path report_path;
  std::filesystem::path labels_path;
  std::filesystem::path z_path;
  std::filesystem::path diagnostics_path;  // JSON lines, ADMM only
};

/// Reads flat `key = value` lines; `#` starts a comment. Throws ConfigError.
std::map<std::string, std::string> parse_config_text(std::istream& in);
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// Applies key/value settings on top of `config`. Unknown keys or malformed
/// values throw ConfigError.
void apply_settings(ExperimentConfig& config, const std::map<std::string, std::string>& kv);

/// Cross-field checks. Throws ConfigError.
void validate(const ExperimentConfig& config);

/// Settings the config round-trips through, as they appear in the report.
nlohmann::json config_to_json(const ExperimentConfig& config);

struct PreparedData {
  GrassmannSet points;
  std::optional<ClusterLabels> truth;
  nlohmann::json metadata;
};

/// Ingestion, optional noise and subspace construction.
PreparedData prepare_data(const ExperimentConfig& config);

/// Gram matrix per config.kernel.
GramMatrix build_config_gram(const ExperimentConfig& config, const GrassmannSet& points);

struct SolveOutcome {
  Eigen::MatrixXd z;
  nlohmann::json diagnostics;
  bool converged = true;
};

/// Solves with the configured solver at the given lambda. For the Frobenius
/// solver a precomputed eigendecomposition may be passed to skip the
/// decomposition.
SolveOutcome solve_config(const ExperimentConfig& config, const GramMatrix& gram, double lambda,
                          const SymmetricEigen* eig = nullptr,
                          const IterationObserver& observer = {});

struct PipelineResult {
  ClusterLabels predicted;
  std::optional<ClusterReport> report;
  Eigen::MatrixXd z;
  bool converged = true;
  nlohmann::json report_json;
};

/// Ingest -> subspaces -> Gram -> solver -> affinity -> spectral clustering ->
/// accuracy. Writes whichever output paths the config names. Every error is
/// tagged with the stage that raised it.
PipelineResult run_pipeline(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Cluster-and-score step shared by the pipeline and the sweep.
PipelineResult cluster_and_score(const ExperimentConfig& config, const PreparedData& data,
                                 SolveOutcome outcome, double lambda);

nlohmann::json report_to_json(const ClusterReport& report);

struct SweepPoint {
  double lambda = 0.0;
  std::optional<double> accuracy;
  Eigen::Index rank = 0;
  bool converged = true;
};

/// Accuracy for each lambda, reusing the prepared data and the Gram matrix.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& config,
                                  const std::vector<double>& lambdas,
                                  std::ostream* log = nullptr);

std::string to_string(DatasetKind kind);
std::string to_string(SolverKind kind);

}  // namespace glrr

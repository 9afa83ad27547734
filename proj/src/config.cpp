#include "glrr/error.hpp"
#include "glrr/pipeline.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <string_view>

namespace glrr {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

int parse_int32(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < INT32_MIN || x > INT32_MAX) throw ConfigError("key '" + key + "': out of range");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kMnist:
      return "mnist";
    case DatasetKind::kSynthetic:
      return "synthetic";
    case DatasetKind::kGpts:
      return "gpts";
  }
  return "unknown";
}

std::string to_string(SolverKind kind) {
  return kind == SolverKind::kFrobenius ? "frobenius" : "admm";
}

std::map<std::string, std::string> parse_config_text(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config_text(in);
}

void apply_settings(ExperimentConfig& c, const std::map<std::string, std::string>& kv) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"dataset",
       [&](const auto& k, const auto& v) {
         if (v == "mnist") {
           c.dataset = DatasetKind::kMnist;
         } else if (v == "synthetic") {
           c.dataset = DatasetKind::kSynthetic;
         } else if (v == "gpts") {
           c.dataset = DatasetKind::kGpts;
         } else {
           throw ConfigError("key '" + k + "': expected mnist, synthetic or gpts");
         }
       }},
      {"mnist_images", [&](const auto&, const auto& v) { c.mnist_images = v; }},
      {"mnist_labels", [&](const auto&, const auto& v) { c.mnist_labels = v; }},
      {"gpts", [&](const auto&, const auto& v) { c.gpts_path = v; }},
      {"truth", [&](const auto&, const auto& v) { c.truth_path = v; }},
      {"synthetic.clusters",
       [&](const auto& k, const auto& v) { c.synthetic.clusters = parse_int32(k, v); }},
      {"synthetic.per_cluster",
       [&](const auto& k, const auto& v) { c.synthetic.per_cluster = parse_int32(k, v); }},
      {"synthetic.d", [&](const auto& k, const auto& v) { c.synthetic.d = parse_int32(k, v); }},
      {"synthetic.p", [&](const auto& k, const auto& v) { c.synthetic.p = parse_int32(k, v); }},
      {"synthetic.angle",
       [&](const auto& k, const auto& v) { c.synthetic.angle = parse_double(k, v); }},
      {"synthetic.orthogonal",
       [&](const auto& k, const auto& v) { c.synthetic.orthogonal_centers = parse_bool(k, v); }},
      {"group_size", [&](const auto& k, const auto& v) { c.group_size = parse_int32(k, v); }},
      {"p", [&](const auto& k, const auto& v) { c.p = parse_int32(k, v); }},
      {"kernel",
       [&](const auto& k, const auto& v) {
         if (v == "proj") {
           c.kernel = KernelKind::kProjection;
         } else if (v == "cc") {
           c.kernel = KernelKind::kCanonicalCorrelation;
         } else if (v == "cc+proj") {
           c.kernel = KernelKind::kCombined;
         } else {
           throw ConfigError("key '" + k + "': expected proj, cc or cc+proj");
         }
       }},
      {"alpha", [&](const auto& k, const auto& v) { c.alpha = parse_double(k, v); }},
      {"solver",
       [&](const auto& k, const auto& v) {
         if (v == "frobenius") {
           c.solver = SolverKind::kFrobenius;
         } else if (v == "admm") {
           c.solver = SolverKind::kAdmm;
         } else {
           throw ConfigError("key '" + k + "': expected frobenius or admm");
         }
       }},
      {"lambda", [&](const auto& k, const auto& v) { c.lambda = parse_double(k, v); }},
      {"k", [&](const auto& k, const auto& v) { c.k = parse_int32(k, v); }},
      {"noise_sigma", [&](const auto& k, const auto& v) { c.noise_sigma = parse_double(k, v); }},
      {"seed",
       [&](const auto& k, const auto& v) {
         const long long s = parse_int(k, v);
         if (s < 0) throw ConfigError("key 'seed': must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"restarts", [&](const auto& k, const auto& v) { c.restarts = parse_int32(k, v); }},
      {"admm.max_iters",
       [&](const auto& k, const auto& v) { c.admm.max_iters = parse_int32(k, v); }},
      {"admm.eta", [&](const auto& k, const auto& v) { c.admm.eta = parse_double(k, v); }},
      {"admm.rho0", [&](const auto& k, const auto& v) { c.admm.rho0 = parse_double(k, v); }},
      {"admm.mu0", [&](const auto& k, const auto& v) { c.admm.mu0 = parse_double(k, v); }},
      {"admm.mu_max", [&](const auto& k, const auto& v) { c.admm.mu_max = parse_double(k, v); }},
      {"admm.eps1", [&](const auto& k, const auto& v) { c.admm.eps1 = parse_double(k, v); }},
      {"admm.eps2", [&](const auto& k, const auto& v) { c.admm.eps2 = parse_double(k, v); }},
      {"report", [&](const auto&, const auto& v) { c.report_path = v; }},
      {"labels", [&](const auto&, const auto& v) { c.labels_path = v; }},
      {"z", [&](const auto&, const auto& v) { c.z_path = v; }},
      {"diagnostics", [&](const auto&, const auto& v) { c.diagnostics_path = v; }},
  };
  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(key, value);
  }
}

void validate(const ExperimentConfig& c) {
  switch (c.dataset) {
    case DatasetKind::kMnist:
      if (c.mnist_images.empty() || c.mnist_labels.empty()) {
        throw ConfigError("mnist dataset needs mnist_images and mnist_labels");
      }
      if (c.group_size < 1) throw ConfigError("group_size must be positive");
      if (c.p < 1) throw ConfigError("p must be positive");
      if (c.group_size < c.p) {
        throw ConfigError("group_size (" + std::to_string(c.group_size) + ") must be >= p (" +
                          std::to_string(c.p) + ")");
      }
      break;
    case DatasetKind::kSynthetic:
      if (c.synthetic.clusters < 1 || c.synthetic.per_cluster < 1 || c.synthetic.p < 1 ||
          c.synthetic.p > c.synthetic.d || !(c.synthetic.angle >= 0.0)) {
        throw ConfigError("invalid synthetic spec");
      }
      break;
    case DatasetKind::kGpts:
      if (c.gpts_path.empty()) throw ConfigError("gpts dataset needs a gpts path");
      break;
  }
  if (!(c.noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be non-negative");
  if (c.noise_sigma > 0.0 && c.dataset != DatasetKind::kMnist) {
    throw ConfigError("noise_sigma applies to image datasets only");
  }
  if (c.kernel == KernelKind::kCombined) {
    if (!c.alpha) throw ConfigError("kernel cc+proj needs alpha");
    if (!(*c.alpha >= 0.0 && *c.alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  }
  if (c.solver == SolverKind::kAdmm && c.kernel != KernelKind::kProjection) {
    throw ConfigError("the admm solver works on the projection kernel only");
  }
  if (c.lambda && !(*c.lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (c.solver == SolverKind::kAdmm && c.lambda && !(*c.lambda > 0.0)) {
    throw ConfigError("admm needs lambda > 0");
  }
  if (c.k && *c.k < 1) throw ConfigError("k must be positive");
  if (c.restarts < 1) throw ConfigError("restarts must be positive");
  if (c.admm.max_iters < 1) throw ConfigError("admm.max_iters must be positive");
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["dataset"] = to_string(c.dataset);
  switch (c.dataset) {
    case DatasetKind::kMnist:
      j["group_size"] = c.group_size;
      j["p"] = c.p;
      j["noise_sigma"] = c.noise_sigma;
      break;
    case DatasetKind::kSynthetic:
      j["synthetic"] = {{"clusters", c.synthetic.clusters},
                        {"per_cluster", c.synthetic.per_cluster},
                        {"d", c.synthetic.d},
                        {"p", c.synthetic.p},
                        {"angle", c.synthetic.angle},
                        {"orthogonal", c.synthetic.orthogonal_centers}};
      break;
    case DatasetKind::kGpts:
      break;
  }
  j["kernel"] = to_string(c.kernel);
  if (c.kernel == KernelKind::kCombined && c.alpha) j["alpha"] = *c.alpha;
  j["solver"] = to_string(c.solver);
  if (c.lambda) j["lambda"] = *c.lambda;
  if (c.k) j["k"] = *c.k;
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  if (c.solver == SolverKind::kAdmm) {
    j["admm"] = {{"rho0", c.admm.rho0},   {"mu0", c.admm.mu0},
                 {"mu_max", c.admm.mu_max}, {"eps1", c.admm.eps1},
                 {"eps2", c.admm.eps2},   {"max_iters", c.admm.max_iters}};
    if (c.admm.eta) j["admm"]["eta"] = *c.admm.eta;
  }
  return j;
}

}  // namespace glrr

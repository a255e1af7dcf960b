#include "uq/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "ensuq/error.hpp"

namespace uq {

using ensuq::Errc;
using ensuq::Error;
using nlohmann::json;

namespace {

void overlay(json& base, const json& layer, const char* source) {
  if (layer.is_null()) return;
  if (!layer.is_object()) throw Error(Errc::InvalidConfig, std::string(source) + " must be a JSON object");
  for (const auto& [key, value] : layer.items()) {
    if (!base.contains(key)) {
      throw Error(Errc::InvalidConfig, std::string("unknown key '") + key + "' in " + source);
    }
    if (!value.is_null()) base[key] = value;
  }
}

template <typename T>
T get(const json& settings, const char* key) {
  try {
    return settings.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::InvalidConfig, std::string("key '") + key + "' has the wrong type");
  }
}

std::vector<double> grid_from_step(double step, double max) {
  if (!(step > 0.0) || !(max >= 0.0 && max < 1.0)) {
    throw Error(Errc::InvalidConfig, "grid-step must be > 0 and grid-max in [0, 1)");
  }
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    const double p = std::round(static_cast<double>(i) * step * 1e9) / 1e9;
    if (p > max + 1e-12) break;
    grid.push_back(p);
  }
  return grid;
}

}  // namespace

json experiment_defaults() {
  const ensuq::ExperimentConfig d;
  return json{
      {"data", ""},
      {"label", ""},
      {"train-fraction", d.train_fraction},
      {"runs", d.runs},
      {"delta", d.delta},
      {"trees", d.trees},
      {"max-depth", d.max_depth},
      {"seed", d.seed},
      {"grid-step", 0.05},
      {"grid-max", 0.9},
      {"rejection-grid", nullptr},
      {"oob-likelihood", d.oob_likelihood},
      {"out", "."},
      {"emit-scores", false},
  };
}

ResolvedExperiment resolve_experiment(const json& file, const json& flags) {
  json settings = experiment_defaults();
  overlay(settings, file, "config file");
  overlay(settings, flags, "flags");

  ResolvedExperiment r;
  auto& c = r.config;
  c.data_path = get<std::string>(settings, "data");
  c.label_column = get<std::string>(settings, "label");
  c.train_fraction = get<double>(settings, "train-fraction");
  const auto runs = get<long long>(settings, "runs");
  const auto trees = get<long long>(settings, "trees");
  if (runs < 1 || trees < 1) throw Error(Errc::InvalidConfig, "runs and trees must be >= 1");
  c.runs = static_cast<std::size_t>(runs);
  c.trees = static_cast<std::size_t>(trees);
  c.delta = get<double>(settings, "delta");
  c.max_depth = get<int>(settings, "max-depth");
  c.seed = get<std::uint64_t>(settings, "seed");
  c.oob_likelihood = get<bool>(settings, "oob-likelihood");
  if (settings["rejection-grid"].is_null()) {
    c.rejection_grid = grid_from_step(get<double>(settings, "grid-step"), get<double>(settings, "grid-max"));
  } else {
    c.rejection_grid = get<std::vector<double>>(settings, "rejection-grid");
  }
  r.out_dir = get<std::string>(settings, "out");
  r.emit_scores = get<bool>(settings, "emit-scores");
  if (c.data_path.empty()) throw Error(Errc::InvalidConfig, "no dataset given (--data)");
  if (c.label_column.empty()) throw Error(Errc::InvalidConfig, "no label column given (--label)");
  c.validate();
  r.settings = std::move(settings);
  return r;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, "cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidConfig, path + ": " + e.what());
  }
}

std::size_t thread_budget() {
  if (const char* env = std::getenv("UQ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace uq

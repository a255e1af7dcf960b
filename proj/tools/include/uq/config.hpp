#pragma once

#include <string>

#include <json.hpp>

#include "ensuq/experiment.hpp"

namespace uq {

/// Experiment settings after layering defaults < config file < flags.
struct ResolvedExperiment {
  ensuq::ExperimentConfig config;
  std::string out_dir = ".";
  bool emit_scores = false;
  /// The merged key/value view, as recorded in the manifest.
  nlohmann::json settings;
};

/// Defaults for every recognised key (kebab-case, mirroring the flags).
nlohmann::json experiment_defaults();

/// Both inputs are flat JSON objects keyed like the flags. Unknown keys and
/// ill-typed values raise ensuq::Error{InvalidConfig}.
ResolvedExperiment resolve_experiment(const nlohmann::json& file, const nlohmann::json& flags);

/// Parses a config file; throws ensuq::Error{FileNotFound | InvalidConfig}.
nlohmann::json load_config_file(const std::string& path);

/// Worker count from UQ_THREADS, else the hardware concurrency (at least 1).
std::size_t thread_budget();

}  // namespace uq

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "levybasis/families.hpp"
#include "levybasis/modular.hpp"
#include "levybasis/sampler.hpp"
#include "levybasis/strategy.hpp"

namespace levybasis {

/// Rejected configuration; `path` names the offending field, e.g. "triplet.default.q".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct RunConfig {
  DomainPtr domain;
  std::optional<CharacteristicTriplet> triplet;
  /// Set when the triplet came from a named family preset.
  std::optional<ExampleFamily> family;
  std::optional<GridFunction> integrand;
  std::optional<StepStrategy> strategy;
  std::uint64_t seed = 7;
  SamplerOptions sampler;
  std::size_t replicates = 1;
  double tolerance_scale = 1.0;
  std::vector<std::string> experiments;
  std::string output_dir = "levybasis_out";
  unsigned workers = 1;
};

/// Validates the whole document before building anything.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);

LevyKernel parse_kernel(const nlohmann::json& node, const std::string& path);
CoefficientRule parse_rule(const nlohmann::json& node, const std::string& path);

}  // namespace levybasis

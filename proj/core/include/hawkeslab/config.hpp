// Config parsing: JSON experiment files and the compact CLI shorthands
// ("pareto:0.5", "indicator:0:1", ...). JSON handling stays out of the
// public headers on purpose.
#pragma once

#include <string>

#include "hawkeslab/harness.hpp"

namespace hawkeslab {

/// "pareto:ALPHA" | "ml:ALPHA[:THETA]" | "stable:ALPHA".
KernelSpec parse_kernel(const std::string& spec);

/// "dirac" | "pareto:BETA" | "exponential" | "gamma:SHAPE".
MarkDistribution parse_marks(const std::string& spec);

/// "poisson" | "beta_sibuya:BETA".
OffspringLaw parse_offspring(const std::string& spec);

/// "indicator:T0:T1[:C]", summed with '+'.
TestFunction parse_test_function(const std::string& spec);

/// Experiment config from a JSON document (see README for the schema);
/// the raw text is kept as the report's config echo.
ExperimentConfig load_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config_file(const std::string& path);

}  // namespace hawkeslab

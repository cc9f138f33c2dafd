#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polya/grid.hpp"
#include "polya/kernels.hpp"

namespace polya {

/// Parsed function document: one axis for {"grid", "values"}, several for
/// {"axes", "values"} with values flattened row-major.
struct FunctionDoc {
  std::vector<Grid1D> axes;
  std::vector<double> values;

  StepFunction step_function() const;
  GridFunctionND grid_function() const;
  BoxFunction box_function() const;
};

/// Throws Error(ConfigError) with line and column on malformed input.
FunctionDoc parse_function(std::string_view text);
FunctionDoc load_function(const std::string& path);

std::string to_json(const StepFunction& u);
std::string to_json(const GridFunctionND& u);
std::string to_json(const BoxFunction& u);

/// "heat:t=0.5[,shift=0.1]", "riesz:sigma=0.4", "gaussian:t=1".
KernelSpec parse_kernel(std::string_view text);
std::string kernel_key(const KernelSpec& spec);

/// Environment variable naming the directory for cached weight tables.
inline constexpr const char* kCacheEnv = "POLYA_CACHE_DIR";

/// weights_for with a binary table cache when the cache variable is set.
KernelWeights cached_weights(const KernelSpec& spec, const Grid1D& grid);

}  // namespace polya

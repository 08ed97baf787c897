#ifndef JCINFO_TOOLS_CLI_HPP
#define JCINFO_TOOLS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jcinfo/experiments.hpp"

namespace jcinfo::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

/// Values read from a `key = value` config file. Unset keys stay empty so
/// command-line flags and built-in defaults can fill them.
struct FileConfig {
  ModelConfig model;
  bool has_alpha_mag = false;
  std::optional<std::vector<double>> alpha;
  std::optional<double> alpha_min, alpha_max;
  std::optional<int> alpha_steps;
  std::optional<double> t_min, t_max;
  std::optional<int> t_steps;
  std::optional<int> n_r, n_theta;
  std::optional<int> threads;
  std::optional<std::string> format;
  std::vector<std::pair<std::string, std::string>> entries;  ///< echo, in file order
};

/// Parses a config file. Blank lines and `#` comments are ignored.
/// Throws ConfigurationError on unknown keys, malformed lines or type
/// mismatches, and InvalidParameterError when a model invariant is violated.
FileConfig parse_config(const std::string& path);
FileConfig parse_config_text(const std::string& text);

std::string format_double(double v);

void write_csv(std::ostream& os, const SeriesTable& table);
void write_json(std::ostream& os, const SeriesTable& table);

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jcinfo::cli

#endif  // JCINFO_TOOLS_CLI_HPP

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "expboot/bootstrap.hpp"

namespace expboot::cli {

inline constexpr const char* kVersion = "1.0.0";

enum class OutputFormat { json, csv, svg, text };

struct RunConfig {
  int digits = 12;
  int max_steps = 10'000;
  std::filesystem::path output_dir;  // empty: write to stdout
  OutputFormat format = OutputFormat::json;
};

/// Thrown for bad command lines and config files (exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

OutputFormat parse_format(std::string_view text);

/// Reads "key = value" lines (digits, max_steps, output_dir, format) over
/// `base`. Blank lines and '#' comments are ignored.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// `p` on the command line: a rational ("a/b" or exact decimal) or "inf".
Exponent parse_p(std::string_view text);

/// Fixed-point comparison data: `p,q_minus,q_plus,Q0` at `samples` evenly spaced p in
/// [p_min, p_max]; root columns are empty where there are no real roots.
std::string fixed_points_csv(const Rational& p_min, const Rational& p_max, int samples, int digits);
std::string fixed_points_svg(const Rational& p_min, const Rational& p_max, int samples);

/// Iteration plot data: `k,q_k,t_k,Q0` along the abstract bootstrap trace.
std::string trace_csv(const Exponent& p, const RunConfig& config);
std::string trace_svg(const Exponent& p, const RunConfig& config);

enum class FigureKind { fixed_points, trace };

struct FigureParams {
  Rational p_min;
  Rational p_max;
  int samples = 100;
  Exponent p = Exponent::of(5);
  bool svg = false;
};

/// Writes the figure into config.output_dir (CSV, plus SVG when requested)
/// and returns the written paths. Throws std::runtime_error when the
/// directory cannot be written.
std::vector<std::filesystem::path> emit_figure(FigureKind kind, const FigureParams& params, const RunConfig& config);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace expboot::cli

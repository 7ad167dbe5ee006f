#pragma once

// Command implementations behind the eprod executable. Each command writes
// its report to `out`, errors to `err`, and returns the process exit code.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eprod/eproduct.hpp"
#include "eprod/summation.hpp"

namespace eprod::cli {

constexpr int kSchemaVersion = 1;
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInconclusive = 3;

/// Name of the environment variable holding the default config path.
constexpr const char* kConfigEnv = "EPROD_CONFIG";

enum class Format { Json, Csv, Text };
Format parse_format(const std::string& s);

/// Reads a flat JSON config; unknown keys are rejected.
SummationConfig load_config(const std::string& path);
SummationConfig apply_json(SummationConfig cfg, const nlohmann::json& j);
nlohmann::json to_json(const SummationConfig& cfg);

/// Decimal string with the configured number of significant digits.
std::string decimal(const Real& x, unsigned digits);
nlohmann::json to_json(const Complex& z, unsigned digits);
nlohmann::json to_json(const EProductResult& r, unsigned digits);

/// {"error": {"kind", "message", "position"?}} on stderr.
void write_error(std::ostream& err, const std::string& kind, const std::string& message,
                 std::optional<std::size_t> position = std::nullopt);

struct ComputeArgs {
  std::string left;
  std::string right;
  Format format = Format::Json;
  std::string out_file;
};
int cmd_compute(const ComputeArgs& args, const SummationConfig& cfg, std::ostream& out, std::ostream& err);

struct CoeffsArgs {
  std::string distribution;
  unsigned long n_max = 10;
  bool exact = false;
  Format format = Format::Json;
};
int cmd_coeffs(const CoeffsArgs& args, const SummationConfig& cfg, std::ostream& out, std::ostream& err);

struct Row {
  std::string identity;
  std::string expected;
  std::string got;
  std::string tolerance;
  bool pass;
};
/// Rows for ex1..ex5 or adjoint; throws std::invalid_argument on an unknown id.
std::vector<Row> reproduce_rows(const std::string& id, const SummationConfig& cfg);
int cmd_reproduce(const std::string& id, Format format, const SummationConfig& cfg, std::ostream& out,
                  std::ostream& err);

struct SweepArgs {
  std::string left_family;
  std::string right_family;
  unsigned long n_first = 0, n_last = 0;
  unsigned long m_first = 0, m_last = 0;
  unsigned long cap = 16;
  Format format = Format::Json;
};
/// "a:b" (inclusive) or "a".
std::pair<unsigned long, unsigned long> parse_range(const std::string& s);
/// Member n of a family: phi, psi, delta, x, e.
std::string family_member(const std::string& family, unsigned long n);
int cmd_sweep(const SweepArgs& args, const SummationConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line; used by main() and by the CLI tests.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace eprod::cli

#pragma once

#include <json.hpp>

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ffedge {

enum class Command { density_profile, density_map, kernel, partition, converge, quench, verify };

const char* to_string(Command c);
Command parse_command(const std::string& name);

// min:max:n, n evenly spaced points (n = 1 gives min)
struct GridSpec {
  double min = 0;
  double max = 0;
  std::size_t n = 0;

  std::vector<double> values() const;
  std::string str() const;
  static GridSpec parse(const std::string& text);
};

struct RunConfig {
  Command command = Command::verify;
  double alpha = 0;
  std::optional<double> lambda;
  std::optional<double> R;
  std::optional<long> L;
  double sigma = 0;
  int order = 1;
  std::optional<GridSpec> grid;   // X, s or x depending on the command
  std::optional<GridSpec> ygrid;  // Y = y/R for density-map
  std::string mode;               // density-profile: analytic|lattice|both; quench: profile|center
  std::string kind;               // kernel: airy|higher-airy|tacnode|higher-tacnode; converge: exterior|tacnode|higher-tacnode
  std::vector<long> L_series;     // converge
  std::optional<double> t;        // quench
  std::optional<long> n_max;      // partition
  bool diagonal = false;          // kernel: diagonal only
  std::vector<std::string> suites;  // verify
  unsigned bits = 0;              // 0: chosen from R
  double tol = 1e-12;
  unsigned threads = 1;
  std::string out;
  std::string format = "csv";

  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

struct Dataset {
  std::deque<std::pair<std::string, std::vector<double>>> columns;  // references stay valid on append
  nlohmann::json metadata = nlohmann::json::object();
  bool verification_failed = false;

  std::vector<double>& column(const std::string& name);
  const std::vector<double>& column(const std::string& name) const;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().second.size(); }
};

Dataset run(const RunConfig& config);

// csv: '#'-prefixed JSON metadata line, header line, rows at 17 significant digits.
// json: {"metadata": ..., "columns": {...}}.
void write_dataset(const Dataset& d, const std::string& format, std::ostream& os);

// Full command line: parsing, config file, run, output. Returns the exit code
// (0 ok, 2 configuration, 3 numerical, 4 verification).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ffedge

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnep/bnc.hpp"
#include "gnep/model.hpp"

namespace gnep::cli {

inline constexpr int kExitFound = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNone = 3;
inline constexpr int kExitLimit = 4;

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int exit_code(SolveStatus status);

/// Result document printed by `solve`.
nlohmann::json result_to_json(const GnepInstance& instance, const SolveResult& result);

struct BenchRecord {
  std::string instance_id;
  std::string family;
  std::size_t n = 0;
  std::size_t m_or_nodes = 0;
  std::string status;
  double wall_time_ms = 0.0;
  std::size_t nodes_visited = 0;
  std::size_t cuts_equilibrium = 0;
  std::size_t cuts_intersection = 0;
  std::size_t cuts_nogood = 0;
  double vhat_final = 0.0;
  std::string note;
};

std::string bench_header();
std::string bench_row(const BenchRecord& record);

/// Solves one instance file; failures become a row with status "Error".
BenchRecord bench_one(const std::filesystem::path& path, const SolverConfig& config);

/// Solves every *.json file of `dir` with up to `workers` threads; rows are
/// ordered by instance id.
std::vector<BenchRecord> bench_directory(const std::filesystem::path& dir,
                                         const SolverConfig& config, std::size_t workers);

/// Step-function ECDF: distinct sorted values with the fraction of samples
/// at or below each.
std::vector<std::pair<double, double>> ecdf(std::vector<double> values);

/// Splits one CSV line, honoring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace gnep::cli

#ifndef MOPO_LOGGED_DATA_HPP
#define MOPO_LOGGED_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mopo/benchmarks.hpp"
#include "mopo/policy.hpp"
#include "mopo/types.hpp"

namespace mopo {

struct LoggedRecord {
  Vec x;
  int a_index = 0;
  Vec y;
  double propensity = 0.0;

  bool operator==(const LoggedRecord&) const = default;
};

/// The logged bandit dataset: n (context, action, noisy reward, propensity)
/// records plus the generator metadata needed to reproduce it.
struct LoggedDataset {
  std::vector<LoggedRecord> records;
  std::string problem_id;
  int context_dim = 0;
  int m = 0;
  double sigma = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(records.size()); }

  bool operator==(const LoggedDataset&) const = default;
};

/// Draws n records: uniform context, action from the logging policy, reward
/// = mean + N(0, σ²) per objective. Noisy rewards are not clipped to [0,1].
LoggedDataset generate(const BenchmarkProblem& problem, const LoggingPolicy& logging, int n,
                       double sigma, std::uint64_t seed, const std::string& problem_id = "");

/// Writes the dataset as a metadata header plus one CSV row per record.
/// Floats are serialized as hexfloats so load(save(ds)) == ds exactly.
void save(const LoggedDataset& ds, const std::filesystem::path& path);

/// Throws std::runtime_error with a line number on malformed input.
LoggedDataset load(const std::filesystem::path& path);

}  // namespace mopo

#endif  // MOPO_LOGGED_DATA_HPP

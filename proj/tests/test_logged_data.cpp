#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "mopo/logged_data.hpp"

using namespace mopo;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("noiseless generation reproduces mean rewards") {
  BenchmarkProblem p = make_problem("ZDT1", 6, 2, 5, 21);
  LoggingPolicy logging{0.2, &p};
  LoggedDataset ds = generate(p, logging, 50, 0.0, 7, "ZDT1");
  REQUIRE(ds.n() == 50);
  for (const LoggedRecord& rec : ds.records) {
    Vec r = p.mean_reward(rec.x, rec.a_index);
    for (int i = 0; i < 2; ++i) REQUIRE(rec.y[i] == doctest::Approx(r[i]).epsilon(1e-15));
    Vec probs = logging_probabilities(logging, rec.x);
    REQUIRE(rec.propensity == doctest::Approx(probs[rec.a_index]).epsilon(1e-15));
    REQUIRE(rec.propensity > 0.0);
  }
}

TEST_CASE("uniform logging yields near-uniform action frequencies") {
  BenchmarkProblem p = make_problem("ZDT1", 6, 2, 4, 22);
  LoggingPolicy logging{1.0, &p};
  const int n = 1000;
  LoggedDataset ds = generate(p, logging, n, 0.0, 13);
  std::vector<int> counts(p.num_actions(), 0);
  for (const LoggedRecord& rec : ds.records) ++counts[rec.a_index];
  const double expected = n / 4.0;
  const double stderr_ = std::sqrt(n * 0.25 * 0.75);
  for (int c : counts) CHECK(std::abs(c - expected) <= 4 * stderr_);
}

TEST_CASE("generation is deterministic and files are byte identical") {
  BenchmarkProblem p = make_problem("DTLZ2", 6, 2, 5, 23);
  LoggingPolicy logging{0.1, &p};
  LoggedDataset a = generate(p, logging, 30, 1.0, 99, "DTLZ2");
  LoggedDataset b = generate(p, logging, 30, 1.0, 99, "DTLZ2");
  CHECK(a == b);

  const auto dir = std::filesystem::temp_directory_path();
  save(a, dir / "mopo_ds_a.csv");
  save(b, dir / "mopo_ds_b.csv");
  CHECK(slurp(dir / "mopo_ds_a.csv") == slurp(dir / "mopo_ds_b.csv"));
  std::filesystem::remove(dir / "mopo_ds_a.csv");
  std::filesystem::remove(dir / "mopo_ds_b.csv");
}

TEST_CASE("save load round trip is exact") {
  BenchmarkProblem p = make_problem("ZDT3", 6, 2, 3, 24);
  LoggingPolicy logging{0.5, &p};
  LoggedDataset ds = generate(p, logging, 3, 2.0, 5, "ZDT3");
  const auto path = std::filesystem::temp_directory_path() / "mopo_rt.csv";
  save(ds, path);
  LoggedDataset loaded = load(path);
  CHECK(loaded == ds);
  std::filesystem::remove(path);
}

TEST_CASE("malformed files are rejected") {
  const auto dir = std::filesystem::temp_directory_path();

  const auto empty = dir / "mopo_empty.csv";
  std::ofstream(empty).close();
  CHECK_THROWS_AS(load(empty), std::runtime_error);
  std::filesystem::remove(empty);

  BenchmarkProblem p = make_problem("ZDT1", 6, 2, 3, 25);
  LoggingPolicy logging{0.5, &p};
  LoggedDataset ds = generate(p, logging, 3, 0.0, 5, "ZDT1");
  const auto path = dir / "mopo_bad.csv";
  save(ds, path);

  // drop the last column (a reward entry) from every data row
  {
    std::ifstream in(path);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    std::ofstream out(path, std::ios::trunc);
    for (const std::string& l : lines) {
      if (!l.empty() && l[0] != '#') {
        out << l.substr(0, l.rfind(',')) << "\n";
      } else {
        out << l << "\n";
      }
    }
  }
  CHECK_THROWS_AS(load(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("declared size must match record count") {
  BenchmarkProblem p = make_problem("ZDT1", 6, 2, 3, 26);
  LoggingPolicy logging{0.5, &p};
  LoggedDataset ds = generate(p, logging, 4, 0.0, 5, "ZDT1");
  const auto path = std::filesystem::temp_directory_path() / "mopo_short.csv";
  save(ds, path);
  {
    std::ifstream in(path);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    lines.pop_back();
    std::ofstream out(path, std::ios::trunc);
    for (const std::string& l : lines) out << l << "\n";
  }
  CHECK_THROWS_AS(load(path), std::runtime_error);
  std::filesystem::remove(path);
}

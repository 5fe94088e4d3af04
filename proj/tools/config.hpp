#pragma once

#include "glin/descent.hpp"
#include "glin/errors.hpp"
#include "glin/gap_metric.hpp"
#include "glin/method.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace glin::cli {

/// Bad config file or field. The message carries "<source>:<line>: field '<key>': ...".
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Flat `key = value` text, '#' starts a comment. Only keys from the schema are accepted.
class Config {
public:
  static Config parse(std::istream& in, const std::string& source);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Command-line override, reported as line 0.
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  /// Comma-separated numbers.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  const std::string& source() const { return source_; }

  /// Throws ConfigError located at the line that set `key`.
  [[noreturn]] void reject(const std::string& key, const std::string& what) const;

  static const std::vector<std::string>& schema();

private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry* find(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

enum class ProblemKind { functional, mapping, fixed_point };

struct ProblemConfig {
  std::uint64_t seed = 1;

  ManifoldKind manifold_kind = ManifoldKind::sphere;
  int manifold_dim = 2;
  double manifold_r = 1.0;
  double cutoff_fraction = 0.9;
  GapShape gap = GapShape::bounded_norm;

  WitnessPolicy witness_policy = WitnessPolicy::grid;
  int witness_count = 64;
  std::uint64_t witness_seed = 1;

  DescentConfig descent;

  ProblemKind kind = ProblemKind::functional;
  std::string functional = "cosine";
  bool finite_difference = false;
  std::vector<double> p;
  std::vector<double> start;  // empty: seeded random start

  int mapping_m = 256;
  int mapping_degree = 1;
  double mapping_perturbation = 0.3;
  std::vector<double> s_values{-1.0, 0.0};

  std::string self_map = "contraction";
  double fp_angle = 3.141592653589793;
  double fp_factor = 0.5;
  double fp_tol = 1e-8;
  int fp_orbit = 5;

  double cluster_radius = 1e-6;
  double f_constancy_tol = 1e-6;

  int metric_triples = 200;
  int metric_pairs = 20;

  std::string output_dir = ".";
  std::string trace_file = "trace.csv";
  std::string report_file = "report.txt";
  std::string map_file = "final_map.csv";
  std::string table_file = "metric.csv";
};

/// Reads every field, so type errors surface before anything runs.
ProblemConfig load_problem(const Config& c);

Manifold make_manifold(const ProblemConfig& p);
WitnessSet make_witnesses(const ProblemConfig& p, const Manifold& m);

}  // namespace glin::cli

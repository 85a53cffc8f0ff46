#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trigen/construct.hpp"
#include "trigen/verify.hpp"

namespace trigen {

/// Invalid configuration, report or command line (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

struct SubfieldSpec {
  std::string field;  ///< name of a declared field
  QVector image;      ///< power-basis coordinates of the subfield generator's image
};

struct Su21Spec {
  Integer z;
  std::optional<Integer> s;
  QVector t;  ///< t = t[0] + t[1] sqrt s (or the rational t[0] without s)
};

struct MultoneSpec {
  std::size_t n = 3;
  std::vector<QVector> levi;
  std::vector<long> exponents;
  QVector u_col;
};

struct FieldSpec {
  std::string name;
  std::optional<ZVector> poly;
  std::optional<QMatrix> integral_basis;
  std::optional<UnitSource> units;
  std::optional<SubfieldSpec> subfield;
  std::optional<QVector> alpha;
  std::optional<QVector> x;
  std::optional<long> divisibility;
  std::optional<Su21Spec> su21;
  std::optional<MultoneSpec> multone;
  std::string echo;  ///< descriptor as given, compact JSON
};

struct CaseSpec {
  CaseTag tag = CaseTag::SL2_NONCM;
  std::vector<std::string> fields;  ///< empty: every declared field
};

struct Caps {
  std::size_t closure_elements = kDefaultClosureCap;
  std::uint64_t enumeration = kDefaultEnumerationCap;
  long r_max = kDefaultRMax;
  long commutator_height = 1;
  long unit_power = 100000;  ///< SL2_CMPRIME: largest k tried for theta^k = 1 mod t
  unsigned closure_threads = 1;
};

struct JobConfig {
  std::vector<FieldSpec> fields;
  std::vector<CaseSpec> cases;
  std::vector<long> r_values{1};
  std::vector<std::uint64_t> primes;
  Caps caps;
  std::optional<std::string> cache_dir;

  const FieldSpec& field(const std::string& name) const;
};

/// Parses and validates a config document. Throws ConfigError.
JobConfig parse_config(const std::string& json_text);
JobConfig load_config(const std::string& path);

struct RunOptions {
  unsigned jobs = 1;
  /// Disk cache location; overrides the environment and the config.
  std::optional<std::string> cache_dir;
  /// Consult TRIGEN_CACHE_DIR when cache_dir is not given.
  bool use_environment = true;
};

struct RunOutcome {
  std::string report;  ///< JSON text
  int exit_code = kExitOk;
  std::size_t jobs = 0;
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
};

/// Runs every (case, field, r) job; the report lists them in config order.
RunOutcome run(const JobConfig& config, const RunOptions& options = {});

/// The report without its timing and cache-statistics block.
std::string deterministic_part(const std::string& report_json);

/// Per-job verdict table. Throws ConfigError on a malformed report.
std::string explain(const std::string& report_json);

/// Signature, unit rank, discriminant and theta certificate of a declared field.
std::string field_info(const JobConfig& config, const std::string& field_name);

/// Builds the number field a descriptor describes.
FieldPtr make_field(const FieldSpec& spec);

std::string read_file(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& data);

inline constexpr const char* kCacheEnv = "TRIGEN_CACHE_DIR";

}  // namespace trigen

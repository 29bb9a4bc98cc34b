#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "cqlqg/optimizer.hpp"
#include "cqlqg/rng.hpp"

namespace cqlqg {

using Json = nlohmann::json;

struct ProblemFile {
  PlantDims dims;
  CanonicalLayout layout = CanonicalLayout::kInterleaved;
  Matrix a, b1, b2, c, d, c0, d0;
  std::optional<ControllerParams> initial;
  Json config_overrides;  // subset of SolveConfig fields, may be empty

  PlantModel to_plant() const;
};

inline constexpr const char* kProblemSchema = "cqlqg-problem-v1";
inline constexpr const char* kReportSchema = "cqlqg-report-v1";
inline constexpr const char* kToolVersion = "0.1.0";

Json problem_to_json(const ProblemFile& problem);
ProblemFile problem_from_json(const Json& j);
ProblemFile load_problem(const std::string& path);
void save_problem(const ProblemFile& problem, const std::string& path);

// Applies "config" overrides from the problem file on top of a base config.
SolveConfig config_from_json(const Json& overrides, SolveConfig base = {});

// FNV-1a 64-bit hash of the canonical problem serialization.
std::uint64_t fnv1a64(const std::string& bytes);
std::string problem_hash(const ProblemFile& problem);

struct ReportFile {
  std::string problem_hash;
  std::uint64_t seed = 0;
  SynthesisReport synthesis;
  std::optional<ClassicalController> classical;
  Json config_echo;
};

Json report_to_json(const ReportFile& report);
void save_report(const ReportFile& report, const std::string& path);

// Seed-deterministic random plant with Hurwitz A (shifted spectrum),
// well-conditioned full-rank D and D0, and moderate coupling scales.
ProblemFile random_plant(std::uint64_t seed, const PlantDims& dims,
                         CanonicalLayout layout = CanonicalLayout::kInterleaved);

}  // namespace cqlqg

#pragma once

// (V, theta) parameter sweeps over the two built-in state families.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "avn/inequality.hpp"
#include "avn/kernels.hpp"
#include "avn/lhs.hpp"
#include "avn/steering.hpp"

namespace avn {

enum class Family { TestState, ColorNoise };
Family parse_family(const std::string& name);
const char* to_string(Family family);
TwoQubitState make_family_state(Family family, double V, double theta);

enum class Analysis { Avn, Ineq3, LinearN, Asym };
Analysis parse_analysis(const std::string& name);
const char* to_string(Analysis analysis);

struct ScanConfig {
  Family family = Family::TestState;
  std::size_t v_steps = 101;      // V = i / (v_steps - 1)
  std::size_t theta_steps = 101;  // theta = j (pi/2) / (theta_steps - 1)
  std::vector<Analysis> analyses{Analysis::Avn};
  std::vector<BlochVector> directions = default_direction_set();
  SteeringTolerances tol;
  double feas_tol = 1e-8;
  std::size_t search_grid = 2048;
  std::size_t asym_pairs = 100;
  std::uint64_t seed = 1;
  int jobs = 0;  // 0: OpenMP default

  bool wants(Analysis a) const;
};

// Throws InvalidArgument for grids with fewer than 2 steps, non-positive
// tolerances, an empty analysis list or an empty direction set.
void validate(const ScanConfig& config);

struct ScanRecord {
  double V;
  double theta;
  bool ppt_entangled;
  std::optional<bool> avn_steerable;
  std::optional<BlochVector> avn_direction;
  std::optional<double> ineq3_violation;  // phase-maximized, at the AVN direction
  std::optional<double> linear_violation_a_to_b;
  std::optional<double> linear_violation_b_to_a;
  std::optional<double> lhs_residual_a_to_b;  // max over sampled pairs (+ AVN protocol)
  std::optional<double> lhs_residual_b_to_a;
};

ScanRecord evaluate_point(const ScanConfig& config, double V, double theta);

// Records in grid order: V outer, theta inner.
std::vector<ScanRecord> run_scan(const ScanConfig& config, kernels::Exec exec = kernels::Exec::Parallel);

std::string csv_header_comment();
std::string csv_column_header();
std::string csv_row(const ScanRecord& record);
void write_csv(std::ostream& out, const std::vector<ScanRecord>& records);
void write_csv_file(const std::filesystem::path& path, const std::vector<ScanRecord>& records);

}  // namespace avn

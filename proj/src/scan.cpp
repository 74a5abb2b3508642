#include "avn/scan.hpp"

#include <algorithm>
#include <numbers>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "avn/io.hpp"

namespace avn {

Family parse_family(const std::string& name) {
  if (name == "test_state") return Family::TestState;
  if (name == "color_noise") return Family::ColorNoise;
  throw Error(ErrorKind::InvalidArgument, "unknown family \"" + name + "\" (expected test_state or color_noise)");
}

const char* to_string(Family family) { return family == Family::TestState ? "test_state" : "color_noise"; }

TwoQubitState make_family_state(Family family, double V, double theta) {
  return family == Family::TestState ? family_test_state(V, theta) : family_color_noise(V, theta);
}

Analysis parse_analysis(const std::string& name) {
  if (name == "avn") return Analysis::Avn;
  if (name == "ineq3") return Analysis::Ineq3;
  if (name == "linearN") return Analysis::LinearN;
  if (name == "asym") return Analysis::Asym;
  throw Error(ErrorKind::InvalidArgument, "unknown analysis \"" + name + "\" (expected avn, ineq3, linearN or asym)");
}

const char* to_string(Analysis analysis) {
  switch (analysis) {
    case Analysis::Avn: return "avn";
    case Analysis::Ineq3: return "ineq3";
    case Analysis::LinearN: return "linearN";
    case Analysis::Asym: return "asym";
  }
  return "unknown";
}

bool ScanConfig::wants(Analysis a) const { return std::find(analyses.begin(), analyses.end(), a) != analyses.end(); }

void validate(const ScanConfig& c) {
  if (c.v_steps < 2 || c.theta_steps < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 steps per axis");
  if (c.analyses.empty()) throw Error(ErrorKind::InvalidArgument, "no analysis selected");
  const double tols[] = {c.tol.purity, c.tol.m_norm, c.tol.distinct, c.tol.zero_weight, c.feas_tol};
  for (double t : tols)
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be positive", t);
  if (c.wants(Analysis::LinearN)) {
    if (c.directions.empty()) throw Error(ErrorKind::InvalidArgument, "linearN needs a direction set");
    if (c.directions.size() > kMaxLinearSettings)
      throw Error(ErrorKind::BudgetExceeded, "direction set larger than the brute-force budget",
                  static_cast<double>(c.directions.size()));
  }
  if (c.wants(Analysis::Asym) && c.asym_pairs == 0)
    throw Error(ErrorKind::InvalidArgument, "asym needs at least one sampled setting pair");
}

ScanRecord evaluate_point(const ScanConfig& c, double V, double theta) {
  const TwoQubitState rho = make_family_state(c.family, V, theta);
  ScanRecord r{V, theta, !is_ppt_separable(rho), {}, {}, {}, {}, {}, {}, {}};

  std::optional<SteeringVerdict> verdict;
  if (c.wants(Analysis::Avn) || c.wants(Analysis::Ineq3) || c.wants(Analysis::Asym)) {
    SearchOptions so;
    so.grid_points = c.search_grid;
    so.tol = c.tol;
    so.exec = kernels::Exec::Serial;
    verdict = find_avn_direction(rho, so);
  }

  if (c.wants(Analysis::Avn)) {
    r.avn_steerable = verdict->steerable;
    if (verdict->decomposition) r.avn_direction = verdict->direction;
  }

  if (c.wants(Analysis::Ineq3) && verdict->decomposition) {
    AvnInequalityOptions io;
    io.tol = c.tol;
    try {
      r.ineq3_violation = avn_inequality(rho, *verdict->direction, io).violation_phase_max;
    } catch (const Error&) {
    }
  }

  if (c.wants(Analysis::LinearN)) {
    r.linear_violation_a_to_b =
        linear_inequality_value(rho, c.directions, SteeringParty::AliceToBob, kernels::Exec::Serial).violation;
    r.linear_violation_b_to_a =
        linear_inequality_value(rho, c.directions, SteeringParty::BobToAlice, kernels::Exec::Serial).violation;
  }

  if (c.wants(Analysis::Asym)) {
    std::vector<SettingPair> pairs;
    if (verdict->steerable) pairs.push_back({*verdict->direction, *verdict->second_direction});
    const auto sampled = sample_setting_pairs(c.asym_pairs, c.seed);
    pairs.insert(pairs.end(), sampled.begin(), sampled.end());
    LhsOptions lo;
    lo.feas_tol = c.feas_tol;
    const AsymmetricReport rep = asymmetric_steering_scan(rho, pairs, lo, kernels::Exec::Serial);
    r.lhs_residual_a_to_b = rep.max_residual_a_to_b;
    r.lhs_residual_b_to_a = rep.max_residual_b_to_a;
  }
  return r;
}

std::vector<ScanRecord> run_scan(const ScanConfig& c, kernels::Exec exec) {
  validate(c);
  if (c.jobs > 0) omp_set_num_threads(c.jobs);
  const std::size_t total = c.v_steps * c.theta_steps;
  return kernels::map<ScanRecord>(exec, total, [&](std::size_t k) {
    const std::size_t i = k / c.theta_steps;
    const std::size_t j = k % c.theta_steps;
    const double V = static_cast<double>(i) / static_cast<double>(c.v_steps - 1);
    const double theta = static_cast<double>(j) * (std::numbers::pi / 2.0) / static_cast<double>(c.theta_steps - 1);
    return evaluate_point(c, V, theta);
  });
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_header_comment() {
  return std::string("# avnsteer ") + AVN_VERSION +
         "; empty field = analysis not requested or undefined at this point";
}

std::string csv_column_header() {
  return "V,theta,ppt_entangled,avn_steerable,avn_direction_x,avn_direction_y,avn_direction_z,ineq3_violation,"
         "linearN_violation_AtoB,linearN_violation_BtoA,lhs_residual_AtoB,lhs_residual_BtoA";
}

namespace {

std::string field(const std::optional<double>& v) { return v ? io::format_number(*v) : std::string(); }

std::string field(const std::optional<bool>& v) { return v ? (*v ? "1" : "0") : ""; }

}  // namespace

std::string csv_row(const ScanRecord& r) {
  std::string s = io::format_number(r.V) + "," + io::format_number(r.theta) + "," + (r.ppt_entangled ? "1" : "0") +
                  "," + field(r.avn_steerable);
  for (int k = 0; k < 3; ++k) {
    s += ",";
    if (r.avn_direction) s += io::format_number(r.avn_direction->xyz()[k]);
  }
  for (const auto* v : {&r.ineq3_violation, &r.linear_violation_a_to_b, &r.linear_violation_b_to_a,
                        &r.lhs_residual_a_to_b, &r.lhs_residual_b_to_a})
    s += "," + field(*v);
  return s;
}

void write_csv(std::ostream& out, const std::vector<ScanRecord>& records) {
  out << csv_header_comment() << '\n' << csv_column_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

void write_csv_file(const std::filesystem::path& path, const std::vector<ScanRecord>& records) {
  io::write_file_atomically(path, [&](std::ostream& out) { write_csv(out, records); });
}

}  // namespace avn

// avnsteer: command-line front end.
//
// Exit codes: 0 success, 2 invalid state/configuration, 3 unparseable input.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "avn/error.hpp"
#include "avn/inequality.hpp"
#include "avn/io.hpp"
#include "avn/lhs.hpp"
#include "avn/scan.hpp"
#include "avn/steering.hpp"

using avn::io::json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitParse = 3;

struct StateInput {
  std::string state_path;
  std::string family;
  double V = std::nan("");
  double theta = std::nan("");

  void attach(CLI::App* app) {
    app->add_option("--state", state_path, "State JSON file");
    app->add_option("--family", family, "Built-in family: test_state | color_noise");
    app->add_option("--V", V, "Family mixing parameter");
    app->add_option("--theta", theta, "Family angle (radians)");
  }

  avn::TwoQubitState load() const {
    if (!state_path.empty()) return avn::io::read_state_file(state_path);
    if (family.empty()) throw avn::Error(avn::ErrorKind::InvalidArgument, "give --state FILE or --family/--V/--theta");
    if (std::isnan(V) || std::isnan(theta))
      throw avn::Error(avn::ErrorKind::InvalidArgument, "--family needs both --V and --theta");
    return avn::make_family_state(avn::parse_family(family), V, theta);
  }
};

struct Tolerances {
  double purity = avn::SteeringTolerances{}.purity;
  double feas = 1e-8;

  void attach(CLI::App* app) {
    app->add_option("--tol-purity", purity, "Purity tolerance on 1 - tr(rho^2)")->check(CLI::PositiveNumber);
    app->add_option("--tol-feas", feas, "LHS feasibility tolerance")->check(CLI::PositiveNumber);
  }

  avn::SteeringTolerances steering() const {
    avn::SteeringTolerances t;
    t.purity = purity;
    return t;
  }
};

avn::BlochVector direction_arg(const std::vector<double>& v, const char* flag) {
  if (v.size() != 3) throw avn::Error(avn::ErrorKind::InvalidArgument, std::string(flag) + " needs x,y,z");
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(r > 1e-12) || !std::isfinite(r))
    throw avn::Error(avn::ErrorKind::NotUnit, std::string(flag) + " must be a nonzero finite vector", r);
  return avn::BlochVector::normalized(v[0], v[1], v[2]);
}

std::vector<avn::BlochVector> load_directions(const std::string& path) {
  return path.empty() ? avn::default_direction_set() : avn::io::read_direction_file(path);
}

avn::SteeringParty parse_party(const std::string& s) {
  if (s == "A-to-B") return avn::SteeringParty::AliceToBob;
  if (s == "B-to-A") return avn::SteeringParty::BobToAlice;
  throw avn::Error(avn::ErrorKind::InvalidArgument, "--party must be A-to-B or B-to-A");
}

json feasibility_json(const avn::FeasibilityResult& f) {
  return {{"feasible", f.feasible},
          {"residual", f.residual},
          {"iterations", f.iterations},
          {"method", avn::to_string(f.method)},
          {"plateaued", f.plateaued}};
}

json verdict_json(const avn::SteeringVerdict& v) {
  json j{{"steerable", v.steerable},
         {"reason", avn::to_string(v.reason)},
         {"best_min_purity", v.best_min_purity},
         {"conditional_purities", v.conditional_purities}};
  if (v.direction) j["direction"] = avn::io::bloch_to_json(*v.direction);
  if (v.decomposition) {
    j["m_norm"] = v.decomposition->m_norm();
    j["mu"] = {v.decomposition->mu1, v.decomposition->mu2};
  }
  if (v.second_setting) {
    j["second_setting_rotated_frame"] = avn::to_string(*v.second_setting);
    j["second_direction"] = avn::io::bloch_to_json(*v.second_direction);
  }
  return j;
}

json ineq3_json(const avn::AvnInequalityResult& r) {
  json j{{"direction", avn::io::bloch_to_json(r.direction)},
         {"w1", r.w1},
         {"w2", r.w2},
         {"w3", r.w3},
         {"c_lhs", r.c_lhs},
         {"constraint_satisfied", r.constraint_satisfied},
         {"optimal_nB", avn::io::bloch_to_json(r.optimal_nb)},
         {"w3_phase_max", r.w3_phase_max},
         {"best_phase", r.best_phase}};
  j["violation"] = r.violation ? json(*r.violation) : json(nullptr);
  j["violation_phase_max"] = r.violation_phase_max ? json(*r.violation_phase_max) : json(nullptr);
  return j;
}

json linear_json(const avn::TwoQubitState& rho, const std::vector<avn::BlochVector>& dirs) {
  const auto ab = avn::linear_inequality_value(rho, dirs, avn::SteeringParty::AliceToBob);
  const auto ba = avn::linear_inequality_value(rho, dirs, avn::SteeringParty::BobToAlice);
  return {{"n_settings", ab.n_settings},
          {"c_n", ab.c_n},
          {"A-to-B", {{"quantum_value", ab.quantum_value}, {"violation", ab.violation}}},
          {"B-to-A", {{"quantum_value", ba.quantum_value}, {"violation", ba.violation}}}};
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide EPR steerability of two-qubit states without inequalities"};
  app.set_version_flag("--version", std::string("avnsteer ") + AVN_VERSION);
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Full report for one state (JSON on stdout)");
  StateInput an_state;
  Tolerances an_tol;
  std::string an_dirs;
  std::size_t an_grid = 2048;
  bool an_echo = false;
  an_state.attach(analyze);
  an_tol.attach(analyze);
  analyze->add_option("--directions", an_dirs, "Direction-set JSON for the linear inequality");
  analyze->add_option("--grid", an_grid, "Direction-search lattice size")->check(CLI::PositiveNumber);
  analyze->add_flag("--echo", an_echo, "Include the parsed state in the report");

  // scan
  auto* scan = app.add_subcommand("scan", "(V, theta) sweep of a built-in family to CSV");
  std::string sc_family = "test_state";
  std::vector<std::string> sc_analyses{"avn"};
  std::vector<std::size_t> sc_grid{101, 101};
  std::string sc_dirs;
  std::string sc_out;
  Tolerances sc_tol;
  std::uint64_t sc_seed = 1;
  std::size_t sc_pairs = 100;
  std::size_t sc_search = 2048;
  scan->add_option("--family", sc_family, "test_state | color_noise");
  scan->add_option("--analysis", sc_analyses, "avn, ineq3, linearN, asym (repeatable, comma separated)")
      ->delimiter(',');
  scan->add_option("--grid", sc_grid, "Grid steps: N (square) or NV,NTHETA")->delimiter(',')->expected(1, 2);
  scan->add_option("--directions", sc_dirs, "Direction-set JSON for linearN");
  scan->add_option("--out", sc_out, "Output CSV path")->required();
  sc_tol.attach(scan);
  scan->add_option("--seed", sc_seed, "Seed for sampled setting pairs");
  scan->add_option("--pairs", sc_pairs, "Sampled setting pairs per point for asym");
  scan->add_option("--search-grid", sc_search, "Direction-search lattice size")->check(CLI::PositiveNumber);

  // lhs
  auto* lhs = app.add_subcommand("lhs", "LHS feasibility for a two-setting protocol or sampled protocols");
  StateInput lh_state;
  Tolerances lh_tol;
  std::vector<double> lh_n1;
  std::vector<double> lh_n2;
  std::string lh_party = "A-to-B";
  std::size_t lh_pairs = 0;
  std::uint64_t lh_seed = 1;
  lh_state.attach(lhs);
  lh_tol.attach(lhs);
  lhs->add_option("--n1", lh_n1, "First setting x,y,z")->delimiter(',')->expected(3);
  lhs->add_option("--n2", lh_n2, "Second setting x,y,z")->delimiter(',')->expected(3);
  lhs->add_option("--party", lh_party, "A-to-B | B-to-A");
  lhs->add_option("--pairs", lh_pairs, "Sample this many setting pairs and test both directions");
  lhs->add_option("--seed", lh_seed, "Seed for sampled setting pairs");

  // ineq
  auto* ineq = app.add_subcommand("ineq", "Evaluate the AVN-derived and the N-setting linear inequalities");
  StateInput iq_state;
  Tolerances iq_tol;
  std::vector<double> iq_n;
  std::vector<double> iq_nb;
  std::string iq_dirs;
  iq_state.attach(ineq);
  iq_tol.attach(ineq);
  ineq->add_option("--n", iq_n, "Alice direction x,y,z (default: found by search)")->delimiter(',')->expected(3);
  ineq->add_option("--nB", iq_nb, "Fix Bob's W3 direction x,y,z")->delimiter(',')->expected(3);
  ineq->add_option("--directions", iq_dirs, "Direction-set JSON for the linear inequality");

  // directions-validate
  auto* dval = app.add_subcommand("directions-validate", "Check a direction-set file");
  std::string dv_path;
  dval->add_option("--directions", dv_path, "Direction-set JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }
  if (jobs > 0) omp_set_num_threads(jobs);

  try {
    if (*analyze) {
      const auto rho = an_state.load();
      avn::SearchOptions so;
      so.grid_points = an_grid;
      so.tol = an_tol.steering();
      const auto verdict = avn::find_avn_direction(rho, so);

      json report{{"tool", std::string("avnsteer ") + AVN_VERSION},
                  {"ppt_min_eigenvalue", avn::ppt_min_eigenvalue(rho)},
                  {"ppt_entangled", !avn::is_ppt_separable(rho)},
                  {"avn", verdict_json(verdict)}};
      if (an_echo) report["state"] = avn::io::state_to_json(rho);

      report["ineq3"] = nullptr;
      if (verdict.decomposition) {
        avn::AvnInequalityOptions io;
        io.tol = so.tol;
        report["ineq3"] = ineq3_json(avn::avn_inequality(rho, *verdict.direction, io));
      }
      report["linear"] = linear_json(rho, load_directions(an_dirs));

      report["lhs"] = nullptr;
      if (verdict.decomposition) {
        const avn::BlochVector second =
            verdict.second_direction ? *verdict.second_direction
                                     : verdict.decomposition->to_original_frame(avn::BlochVector::x_axis());
        avn::LhsOptions lo;
        lo.feas_tol = an_tol.feas;
        auto j = feasibility_json(avn::lhs_feasible(
            avn::assemblage_from_state(rho, *verdict.direction, second, avn::SteeringParty::AliceToBob), lo));
        j["protocol"] = {avn::io::bloch_to_json(*verdict.direction), avn::io::bloch_to_json(second)};
        j["party"] = "A-to-B";
        report["lhs"] = j;
      }
      print(report);
    } else if (*scan) {
      avn::ScanConfig cfg;
      cfg.family = avn::parse_family(sc_family);
      cfg.v_steps = sc_grid.at(0);
      cfg.theta_steps = sc_grid.size() > 1 ? sc_grid[1] : sc_grid[0];
      cfg.analyses.clear();
      for (const auto& a : sc_analyses) cfg.analyses.push_back(avn::parse_analysis(a));
      cfg.directions = load_directions(sc_dirs);
      cfg.tol = sc_tol.steering();
      cfg.feas_tol = sc_tol.feas;
      cfg.seed = sc_seed;
      cfg.asym_pairs = sc_pairs;
      cfg.search_grid = sc_search;
      cfg.jobs = jobs;
      avn::validate(cfg);
      avn::write_csv_file(sc_out, avn::run_scan(cfg));
    } else if (*lhs) {
      const auto rho = lh_state.load();
      avn::LhsOptions lo;
      lo.feas_tol = lh_tol.feas;
      if (lh_pairs > 0) {
        const auto pairs = avn::sample_setting_pairs(lh_pairs, lh_seed);
        const auto rep = avn::asymmetric_steering_scan(rho, pairs, lo);
        print({{"pairs", pairs.size()},
               {"A-to-B_steering_found", rep.a_to_b_steering_found},
               {"B-to-A_steering_found", rep.b_to_a_steering_found},
               {"one_way_A-to-B", rep.one_way_a_to_b()},
               {"max_residual_A-to-B", rep.max_residual_a_to_b},
               {"max_residual_B-to-A", rep.max_residual_b_to_a}});
      } else {
        const auto n1 = lh_n1.empty() ? avn::BlochVector::z_axis() : direction_arg(lh_n1, "--n1");
        const auto n2 = lh_n2.empty() ? avn::BlochVector::x_axis() : direction_arg(lh_n2, "--n2");
        const auto party = parse_party(lh_party);
        auto j = feasibility_json(avn::lhs_feasible(avn::assemblage_from_state(rho, n1, n2, party), lo));
        j["protocol"] = {avn::io::bloch_to_json(n1), avn::io::bloch_to_json(n2)};
        j["party"] = avn::to_string(party);
        print(j);
      }
    } else if (*ineq) {
      const auto rho = iq_state.load();
      avn::AvnInequalityOptions io;
      io.tol = iq_tol.steering();
      if (!iq_nb.empty()) io.bob_direction = direction_arg(iq_nb, "--nB");
      std::optional<avn::BlochVector> n;
      if (!iq_n.empty()) {
        n = direction_arg(iq_n, "--n");
      } else {
        avn::SearchOptions so;
        so.tol = io.tol;
        const auto verdict = avn::find_avn_direction(rho, so);
        if (verdict.decomposition) n = verdict.direction;
      }
      json j{{"linear", linear_json(rho, load_directions(iq_dirs))}};
      j["ineq3"] = n ? ineq3_json(avn::avn_inequality(rho, *n, io)) : json(nullptr);
      print(j);
    } else if (*dval) {
      const auto dirs = avn::io::read_direction_file(dv_path);
      print({{"valid", true}, {"count", dirs.size()}, {"directions", avn::io::directions_to_json(dirs)}});
    }
  } catch (const avn::Error& e) {
    std::cerr << "avnsteer: " << avn::to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == avn::ErrorKind::ParseError ? kExitParse : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "avnsteer: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}

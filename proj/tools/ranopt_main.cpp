#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "ranopt/channel.hpp"
#include "ranopt/errors.hpp"
#include "ranopt/pipeline.hpp"

using namespace ranopt;

namespace {

void add_manifest_flags(CLI::App* cmd, RunManifest& m) {
  cmd->add_option("--scenario", m.scenario_path, "Scenario JSON file")->required();
  cmd->add_option("--scheme", m.schemes,
                  "Schemes to run: proposed, pattern, optassoc, maxrsrp")
      ->delimiter(',');
  cmd->add_option("--sweep", m.sweep_pps, "Traffic sweep, packets/s/device")->delimiter(',');
  cmd->add_option("--seed", m.seed, "Run seed");
  cmd->add_option("--jobs", m.jobs, "Parallel sweep-point jobs");
  cmd->add_option("--out", m.out_dir, "Output directory");
  cmd->add_option("--tol-inner", m.tol_inner, "Inner solver convergence tolerance");
  cmd->add_option("--tol-outer", m.tol_outer, "Outer pursuit stall tolerance");
  cmd->add_option("--max-profiles", m.max_profiles, "Profile cap (0 = devices + 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint spectrum allocation, user association, and power control"};
  app.require_subcommand(1);

  // generate
  ScenarioParams params;
  std::string gen_out = "scenario.json";
  std::string dump_gains_path;
  CLI::App* gen = app.add_subcommand("generate", "Generate a random scenario");
  gen->add_option("--n", params.n_aps, "Number of APs")->required();
  gen->add_option("--k", params.n_devices, "Number of devices")->required();
  gen->add_option("--side", params.area_side_m, "Area side length (m)")->required();
  gen->add_option("--seed", params.seed, "Placement seed");
  gen->add_option("--out", gen_out, "Output scenario file");
  gen->add_option("--lambda", params.lambda_pps, "Per-device arrival rate (packets/s)");
  gen->add_option("--bandwidth", params.bandwidth_hz, "Band width W (Hz)");
  gen->add_option("--pmax-dbm", params.p_max_dbm, "AP transmit power (dBm)");
  gen->add_option("--noise-dbm-hz", params.noise_psd_dbm_hz, "Noise PSD (dBm/Hz)");
  gen->add_option("--xi", params.snr_threshold, "Neighborhood SNR threshold (linear)");
  gen->add_option("--alpha", params.neighborhood_cap, "Neighborhood size cap");
  gen->add_option("--dump-gains", dump_gains_path, "Also write the gain matrix CSV here");

  RunManifest opt_m, cmp_m, sim_m;
  CLI::App* opt = app.add_subcommand("optimize", "Run schemes and write plans/traces");
  add_manifest_flags(opt, opt_m);
  CLI::App* cmp = app.add_subcommand("compare", "Analytic delay-vs-traffic comparison");
  add_manifest_flags(cmp, cmp_m);
  CLI::App* sim = app.add_subcommand("simulate", "Packet-level validation of the plans");
  add_manifest_flags(sim, sim_m);
  sim->add_option("--horizon", sim_m.sim_horizon_s, "Simulated seconds per run");
  sim->add_option("--warmup", sim_m.sim_warmup_frac, "Warmup fraction discarded");

  std::uint64_t verify_seed = 1;
  std::string verify_out = "verify_report.json";
  CLI::App* ver = app.add_subcommand("verify", "Run the built-in property suite");
  ver->add_option("--seed", verify_seed, "Suite seed");
  ver->add_option("--out", verify_out, "Report JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const NetworkScenario s = generate_scenario(params);
      save_scenario(s, gen_out);
      if (!dump_gains_path.empty()) dump_gains_csv(build_gains(s), dump_gains_path);
      std::cout << "wrote " << gen_out << "\n";
    } else if (opt->parsed()) {
      run_optimize(opt_m);
      std::cout << "wrote plans and traces to " << opt_m.out_dir << "\n";
    } else if (cmp->parsed()) {
      const CompareResult result = run_compare(cmp_m);
      std::cout << "wrote comparison CSVs to " << cmp_m.out_dir << "\n";
      if (!result.dominance_ok || !result.knee_ok) {
        std::cerr << "dominance/knee check FAILED\n";
        return 1;
      }
    } else if (sim->parsed()) {
      run_simulate(sim_m);
      std::cout << "wrote simulation outcomes to " << sim_m.out_dir << "\n";
    } else if (ver->parsed()) {
      const VerifyReport report = run_verify(verify_seed, verify_out);
      for (const VerifyCheck& c : report.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
      if (!report.all_pass()) return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels
//
// CLI: run Monte Carlo beam-entropy experiments from a config file, ingest
// externally generated channel matrices, or print the analytic arcsine
// beam PMF used to cross-check Monte Carlo entropies.
//
// Exit codes: 0 success, 1 config error, 2 I/O error, 3 degenerate experiment.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "beamsim/beamsim.hpp"

namespace {

constexpr const char* kOutDirEnv = "BEAMSIM_OUT_DIR";

std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;  // flag beats everything
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && env[0] != '\0') return env;
  return config_value;
}

void print_summary(const beamsim::ExperimentResult& result, const beamsim::ReportBundle& bundle) {
  std::cout << "runs: " << result.records.size()
            << " (degenerate: " << result.degenerate_count << ")\n"
            << "rx entropy: " << result.rx_entropy.entropy_bits << " bits of "
            << result.rx_entropy.max_entropy_bits
            << " (relative " << result.rx_entropy.relative_entropy << ")\n"
            << "tx entropy: " << result.tx_entropy.entropy_bits << " bits of "
            << result.tx_entropy.max_entropy_bits
            << " (relative " << result.tx_entropy.relative_entropy << ")\n"
            << "joint entropy: " << result.joint_entropy_bits << " bits\n"
            << "mean effective rank: " << result.rank_summary.mean_effective_rank
            << ", max sigma2/sigma1: " << result.rank_summary.max_sigma_ratio << "\n"
            << "expected probes (rx/tx): " << result.probe_metrics.rx << " / "
            << result.probe_metrics.tx << "\n"
            << "power invariance violations: " << result.power_invariance_violations << "\n"
            << "reports: " << bundle.summary_path << "\n";
}

int analyze_ingested(const std::string& channels_path, std::size_t nt, std::size_t nr,
                     const std::string& out_dir) {
  const auto mats = beamsim::ingest_channels(channels_path);
  if (mats.empty()) throw beamsim::IoError("'" + channels_path + "' contains no channel matrices");
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].entries.rows() != nr || mats[i].entries.cols() != nt)
      throw beamsim::ConfigError("matrix " + std::to_string(i) + " is " +
                                 std::to_string(mats[i].entries.rows()) + "x" +
                                 std::to_string(mats[i].entries.cols()) + ", expected nr " +
                                 std::to_string(nr) + " x nt " + std::to_string(nt));
  }

  const beamsim::ArrayGeometry tx_geom{nt, 0.5};
  const beamsim::ArrayGeometry rx_geom{nr, 0.5};
  const beamsim::Codebook tx_cb = beamsim::dft_codebook(tx_geom);
  const beamsim::Codebook rx_cb = beamsim::dft_codebook(rx_geom);

  beamsim::ExperimentResult result;
  result.spec.tx_geom = tx_geom;
  result.spec.rx_geom = rx_geom;
  result.spec.n_runs = mats.size();
  result.records.resize(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const beamsim::BeamSelection sel = beamsim::select_best(beamsim::sweep(mats[i], tx_cb, rx_cb));
    beamsim::RunRecord rec;
    rec.rx_beam = static_cast<std::uint32_t>(sel.rx_beam);
    rec.tx_beam = static_cast<std::uint32_t>(sel.tx_beam);
    rec.degenerate = sel.degenerate ? 1 : 0;
    const beamsim::SvdReport svd = beamsim::analyze(mats[i].entries);
    rec.effective_rank = static_cast<std::uint32_t>(svd.effective_rank);
    rec.sigma1 = svd.singular_values.front();
    if (svd.singular_values.size() > 1 && rec.sigma1 > 0.0)
      rec.sigma_ratio = svd.singular_values[1] / rec.sigma1;
    result.records[i] = rec;
  }
  beamsim::detail::finalize(result);
  if (result.degenerate_count == result.records.size())
    throw beamsim::DegenerateExperimentError("all ingested matrices are degenerate (zero)");

  beamsim::RunConfig cfg;
  cfg.spec = result.spec;
  cfg.ingest_path = channels_path;
  cfg.out_dir = out_dir;
  const beamsim::ReportBundle bundle = beamsim::emit_reports(result, cfg);
  print_summary(result, bundle);
  return 0;
}

int cmd_run(const std::string& config_path, std::optional<std::size_t> runs_override,
            std::optional<std::uint64_t> seed_override, const std::string& out_override,
            std::size_t threads) {
  beamsim::RunConfig cfg = beamsim::parse_config_file(config_path);
  if (runs_override) cfg.spec.n_runs = *runs_override;
  if (seed_override) cfg.spec.master_seed = *seed_override;
  cfg.out_dir = resolve_out_dir(out_override, cfg.out_dir);

  if (cfg.ingest_mode())
    return analyze_ingested(cfg.ingest_path, cfg.spec.tx_geom.num_elements,
                            cfg.spec.rx_geom.num_elements, cfg.out_dir);

  beamsim::validate(cfg.spec);
  const beamsim::ExperimentResult result = beamsim::run(cfg.spec, threads);
  if (result.degenerate_count == result.records.size())
    throw beamsim::DegenerateExperimentError("all runs produced degenerate channels");

  const beamsim::ReportBundle bundle = beamsim::emit_reports(result, cfg);
  print_summary(result, bundle);

  if (cfg.spec.subcarrier_check) {
    auto rng = beamsim::substream(cfg.spec.master_seed, cfg.spec.run_begin);
    const auto realization = beamsim::draw_realization(cfg.spec.scenario, rng);
    const auto rep = beamsim::subcarrier_consistency(cfg.spec, realization);
    std::ofstream os(std::filesystem::path(cfg.out_dir) / "subcarrier_sigma1.csv");
    if (!os) throw beamsim::IoError("cannot write subcarrier_sigma1.csv");
    os << "subcarrier_index,sigma1\n";
    for (std::size_t i = 0; i < rep.per_subcarrier_sigma1.size(); ++i)
      os << i << "," << beamsim::format_double(rep.per_subcarrier_sigma1[i]) << "\n";
    std::cout << "sub-carrier sigma1 spread: " << rep.max_rel_sigma1_spread << " over "
              << rep.per_subcarrier_sigma1.size() << " sub-carriers\n";
  }
  return 0;
}

int cmd_ingest(const std::string& channels_path, std::size_t nt, std::size_t nr,
               const std::string& out_override) {
  return analyze_ingested(channels_path, nt, nr, resolve_out_dir(out_override, "out"));
}

int cmd_oracle(std::size_t n_beams) {
  const beamsim::BeamPmf pmf = beamsim::arcsine_pmf_oracle(n_beams);
  std::cout << "beam_index,spatial_freq,probability\n";
  for (std::size_t m = 0; m < pmf.probs.size(); ++m) {
    const double psi =
        beamsim::wrap_spatial_freq(2.0 * static_cast<double>(m) / static_cast<double>(n_beams));
    std::cout << m << "," << beamsim::format_double(psi) << ","
              << beamsim::format_double(pmf.probs[m]) << "\n";
  }
  const double h = beamsim::entropy(pmf);
  std::cout << "# entropy_bits=" << beamsim::format_double(h)
            << " relative=" << beamsim::format_double(beamsim::relative_entropy(h, n_beams)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beamsim: beam entropy of clustered mm-wave MIMO channels"};
  app.require_subcommand(1);

  std::string config_path, out_dir, channels_path;
  std::optional<std::size_t> runs_override;
  std::optional<std::uint64_t> seed_override;
  std::size_t threads = 0;
  std::size_t nt = 256, nr = 16, oracle_beams = 16;

  CLI::App* run_cmd = app.add_subcommand("run", "run a Monte Carlo experiment from a config file");
  run_cmd->add_option("--config", config_path, "config file (key = value, one [scenario] section)")
      ->required();
  run_cmd->add_option("--runs", runs_override, "override the run count");
  run_cmd->add_option("--seed", seed_override, "override the master seed");
  run_cmd->add_option("--out", out_dir, "output directory (beats BEAMSIM_OUT_DIR and config)");
  run_cmd->add_option("--threads", threads, "worker threads (default: hardware)");

  CLI::App* ingest_cmd = app.add_subcommand("ingest", "analyse externally generated channel matrices");
  ingest_cmd->add_option("--channels", channels_path, "channel CSV file")->required();
  ingest_cmd->add_option("--nt", nt, "Tx codebook size (must match matrix columns)")->required();
  ingest_cmd->add_option("--nr", nr, "Rx codebook size (must match matrix rows)")->required();
  ingest_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "print the arcsine beam PMF and its entropy");
  oracle_cmd->add_option("--beams", oracle_beams, "codebook size (even)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, runs_override, seed_override, out_dir, threads);
    if (ingest_cmd->parsed()) return cmd_ingest(channels_path, nt, nr, out_dir);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_beams);
  } catch (const beamsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const beamsim::DegenerateExperimentError& e) {
    std::cerr << "degenerate experiment: " << e.what() << "\n";
    return 3;
  } catch (const beamsim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "qrep/cli.hpp"
#include "qrep/errors.hpp"

namespace qrep::cli {
namespace {

struct GridOption {
  std::vector<std::string> tokens;
  bool given = false;
};

CLI::Option* add_grid(CLI::App* sub, const std::string& name, GridOption& grid,
                      const std::string& help) {
  return sub
      ->add_option(name, grid.tokens,
                   help + " (comma list; start:stop:step ranges allowed)")
      ->delimiter(',')
      ->expected(1, -1);
}

std::vector<int> to_ints(const std::vector<double>& values, const char* field) {
  std::vector<int> out;
  for (double v : values) {
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw ConfigError(std::string(field) + ": expected integers");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void add_ion_options(CLI::App* sub, IonParams& ion) {
  sub->add_option("--f-ion-photon", ion.f_ion_photon, "Ion-photon entanglement fidelity")
      ->capture_default_str();
  sub->add_option("--p-single", ion.p_single, "LDN strength of single-qubit operations")
      ->capture_default_str();
  sub->add_option("--p-two", ion.p_two, "LDN strength of two-qubit operations")
      ->capture_default_str();
  sub->add_option("--eta-d", ion.eta_d, "Detector efficiency")->capture_default_str();
  sub->add_option("--p-ion", ion.p_ion, "Photon emission and conversion probability")
      ->capture_default_str();
  sub->add_option("--l-att", ion.l_att, "Fibre attenuation length [km]")
      ->capture_default_str();
  sub->add_option("--c-fiber", ion.c_fiber, "Signal speed in fibre [km/s]")
      ->capture_default_str();
}

const std::map<std::string, ConnectMode> kModes{
    {"probabilistic", ConnectMode::kProbabilistic},
    {"deterministic", ConnectMode::kDeterministic}};

std::string default_output(const SweepConfig& c) {
  const char* dir = std::getenv("QREP_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  const std::filesystem::path path = std::filesystem::path(dir) /
                                     (std::string(to_string(c.command)) +
                                      (c.format == Format::kJson ? ".jsonl" : ".csv"));
  return path.string();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator for a two-dimensional GHZ-state quantum repeater.", "qrep2d"};
  app.set_config("--config", "", "TOML or INI file with option values; flags override it");
  app.require_subcommand(1, 1);
  app.fallthrough();

  SweepConfig cfg;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "csv";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output,-o", cfg.output,
                 "Output file (default: stdout, or $QREP_OUTPUT_DIR/<command>.csv)");
  app.add_option("--jobs,-j", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed for Monte Carlo columns")
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "Bisection bracket width")->capture_default_str();

  GridOption p, q, n, m, distance, links, levels;
  std::string mode = "probabilistic";
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", mode, "Connection mode")
        ->check(CLI::IsMember({"probabilistic", "deterministic"}))
        ->capture_default_str();
  };

  auto* threshold = app.add_subcommand(
      "threshold", "Gate threshold p_th per scheme, or distillability thresholds");
  threshold
      ->add_option("--scheme", cfg.schemes,
                   "alternating, mlf, lw, mb, distill-ghz3 or distill-bell")
      ->delimiter(',')
      ->capture_default_str();

  auto* qmin = app.add_subcommand("q-min-curve", "Channel threshold q_min(p) per scheme");
  qmin->add_option("--scheme", cfg.schemes, "alternating, mlf or lw")
      ->delimiter(',')
      ->capture_default_str();
  add_grid(qmin, "--p", p, "Gate reliability grid")->required();

  auto* levels_cmd = app.add_subcommand(
      "connect-levels", "Fidelity and success probability after n connection levels");
  add_grid(levels_cmd, "--p", p, "Gate reliability grid")->required();
  add_grid(levels_cmd, "--q", q, "Channel reliability grid (default: q = p)");
  add_grid(levels_cmd, "--n", n, "Connection levels")->required();
  add_mode(levels_cmd);
  levels_cmd->add_flag("--solve-q", cfg.solve_q,
                       "Report the smallest distillable q after n levels instead");

  auto* distance_cmd = app.add_subcommand(
      "max-distance", "Largest distance (in links) whose state stays distillable");
  add_grid(distance_cmd, "--p", p, "Gate reliability grid")->required();
  add_grid(distance_cmd, "--q", q, "Channel reliability grid (default: 1)");
  add_mode(distance_cmd);

  auto* mb = app.add_subcommand("mb-region",
                                "Fidelity gain of one measurement-based repeater level");
  add_grid(mb, "--p", p, "Gate reliability grid")->required();
  add_grid(mb, "--q", q, "Channel reliability grid")->required();
  add_grid(mb, "--m", m, "Purification rounds")->required();

  auto* rates = app.add_subcommand("ion-rates",
                                   "Elementary probabilities and distribution times");
  add_grid(rates, "--distance", distance, "Total distance grid [km]");
  add_grid(rates, "--links", links, "Numbers of links (powers of two)");
  rates->add_option("--p-suc", cfg.p_suc, "1D Bell-measurement success probability")
      ->capture_default_str();
  rates->add_option("--trials", cfg.trials, "Monte Carlo trials per row")
      ->capture_default_str();
  add_ion_options(rates, cfg.ion);

  auto* fid = app.add_subcommand("ion-fidelity", "1D and 2D fidelities per link count");
  add_grid(fid, "--links", links, "Numbers of links (powers of two)");
  add_mode(fid);
  add_ion_options(fid, cfg.ion);

  auto* storage = app.add_subcommand("storage", "Qubits stored per node");
  storage
      ->add_option("--strategy", cfg.strategies,
                   "multipartite-full, bipartite-full or bipartite-reduced")
      ->delimiter(',')
      ->capture_default_str();
  add_grid(storage, "--levels", levels, "Coarse-graining levels")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::map<CLI::App*, Command> commands{
        {threshold, Command::kThreshold},  {qmin, Command::kQMinCurve},
        {levels_cmd, Command::kConnectLevels}, {distance_cmd, Command::kMaxDistance},
        {mb, Command::kMbRegion},          {rates, Command::kIonRates},
        {fid, Command::kIonFidelity},      {storage, Command::kStorage}};
    cfg.command = commands.at(app.get_subcommands().front());
    cfg.format = format == "json" ? Format::kJson : Format::kCsv;
    cfg.mode = kModes.at(mode);
    if (!p.tokens.empty()) cfg.p = expand_grid(p.tokens, "p");
    if (!q.tokens.empty()) cfg.q = expand_grid(q.tokens, "q");
    if (!n.tokens.empty()) cfg.n = to_ints(expand_grid(n.tokens, "n"), "n");
    if (!m.tokens.empty()) cfg.m = to_ints(expand_grid(m.tokens, "m"), "m");
    if (!distance.tokens.empty()) cfg.distance_km = expand_grid(distance.tokens, "distance");
    if (!links.tokens.empty()) cfg.links = to_ints(expand_grid(links.tokens, "links"), "links");
    if (!levels.tokens.empty()) cfg.n = to_ints(expand_grid(levels.tokens, "levels"), "levels");
    if (cfg.command == Command::kThreshold && threshold->count("--scheme") == 0) {
      cfg.schemes = {"alternating", "mlf", "lw"};
    }

    const ResultTable table = run(cfg);

    std::string path = cfg.output.empty() ? default_output(cfg) : cfg.output;
    std::ofstream file;
    if (!path.empty()) {
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      file.open(path);
      if (!file) throw ConfigError("output: cannot open '" + path + "'");
    }
    std::ostream& sink = path.empty() ? out : file;
    if (cfg.format == Format::kJson) {
      write_json_lines(sink, table);
    } else {
      write_csv(sink, table);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "qrep2d: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    err << "qrep2d: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "qrep2d: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "qrep2d: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qrep::cli

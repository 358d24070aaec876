#include "lane_emden_cli/cli.hpp"

#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "lane_emden/report.hpp"

namespace lane_emden::cli {

namespace {

void add_options(CLI::App& app, RunConfig& cfg, std::string& format) {
  app.add_option("--p", cfg.p_list, "exponent p, or a comma-separated list")
      ->delimiter(',')
      ->expected(1, -1);
  app.add_option("--N", cfg.N, "space dimension")->capture_default_str();
  app.add_option("--grid-M", cfg.grid_M, "interior nodes of the log grid (0: from --grid-step)")
      ->capture_default_str();
  app.add_option("--grid-step", cfg.grid_step, "log-grid spacing when --grid-M is 0")
      ->capture_default_str();
  app.add_option("--inner-rule", cfg.inner_rule,
                 "annulus inner radius: auto, log:<ln a> or radius:<a>")
      ->capture_default_str();
  app.add_option("--tol-shoot", cfg.tol_shoot, "bound on |u(1)| for the shooting solve")
      ->capture_default_str();
  app.add_option("--tol-eig", cfg.tol_eig, "relative bisection tolerance for eigenvalues")
      ->capture_default_str();
  app.add_option("--eig-count", cfg.eig_count, "number of radial eigenvalues")
      ->capture_default_str();
  app.add_option("--ell", cfg.ell, "limit constant l")->capture_default_str();
  app.add_option("--R", cfg.R, "cut-off parameter of the test function")->capture_default_str();
  app.add_option("--format", format, "json or csv (csv for sweep only)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "output path, - for stdout")->capture_default_str();
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least-energy nodal Lane-Emden solutions: profiles, spectra and Morse index"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "json";
  for (Command c : {Command::Solve, Command::Spectrum, Command::Morse, Command::Sweep,
                    Command::LimitCheck}) {
    const char* help = "";
    switch (c) {
      case Command::Solve: help = "shoot the nodal radial solution and report its scales"; break;
      case Command::Spectrum: help = "weighted radial eigenvalues with refinement diagnostics"; break;
      case Command::Morse: help = "Morse index ledger"; break;
      case Command::Sweep: help = "one row per p, computed independently"; break;
      case Command::LimitCheck: help = "verification battery for the limit objects"; break;
    }
    CLI::App* sub = app.add_subcommand(to_string(c), help);
    add_options(*sub, cfg, format);
    sub->callback([&cfg, c] { cfg.command = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitBadConfig;
  }
  cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;

  const RunOutcome res = run(cfg);
  if (!res.message.empty()) err << res.message << (res.message.back() == '\n' ? "" : "\n");
  if (res.document.empty()) return res.exit_code;

  if (cfg.out == "-") {
    out << res.document;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "cannot open " << cfg.out << " for writing\n";
      return kExitBadConfig;
    }
    f << res.document;
  }
  return res.exit_code;
}

}  // namespace lane_emden::cli

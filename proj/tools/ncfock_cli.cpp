#include <CLI11.hpp>
#include <iostream>

#include "ncfock/cli.hpp"

int main(int argc, char** argv) {
  ncfock::JobSpec spec;
  CLI::App app{"Operator-valued multipliers on the full Fock space"};
  app.add_option("command", spec.command, "eval, szego, mult, douglas, dilate, dbb, join, meet, equiv, axioms, ideal")
      ->required();
  // Inputs are collected from the extras so matrix literals such as "[[z1, z2]]"
  // are not split as CLI11 array syntax.
  app.allow_extras();
  app.footer("Inputs: symbols (expressions or .json files) or CSV paths, after the command.");
  app.add_option("--d", spec.d, "Number of variables")->capture_default_str();
  app.add_option("--N", spec.N, "Window degree (cutoff for szego)")->capture_default_str();
  app.add_option("--tol", spec.tol, "Tolerance override");
  app.add_option("--out", spec.out, "Report path");
  app.add_flag("--force", spec.force, "Allow windows above the size guard");
  app.add_option("--Z", spec.Z, "Point: comma-separated reals or CSV row block");
  app.add_option("--W", spec.W, "Second point for szego");
  app.add_option("--P", spec.P, "Coefficient matrix CSV for szego");
  app.add_option("--rows", spec.rows, "Coefficient dimension for dbb")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (const std::string& arg : app.remaining()) {
    if (arg.rfind("--", 0) == 0) {
      std::cerr << "The following argument was not expected: " << arg << "\nRun with --help for more information.\n";
      return 2;
    }
    spec.inputs.push_back(arg);
  }

  ncfock::JobResult result = ncfock::run_job(spec);
  if (spec.out.empty() || result.exit_code != 0) std::cout << result.report;
  if (result.exit_code != 0) std::cerr << "error: " << result.error << "\n";
  return result.exit_code;
}

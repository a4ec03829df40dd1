#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plot.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Point-gap topology, singular value spectra and response of non-Hermitian cavity arrays"};
  app.set_version_flag("--version", std::string(NHTOPO_VERSION));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the analyses listed in a config file");
  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool quiet = false;
  run->add_option("config", config, "Config file")->required();
  run->add_option("--set", overrides, "Override path.key=value (repeatable)");
  run->add_option("-o,--out", out_dir, "Output directory (overrides output.dir)");
  run->add_flag("-q,--quiet", quiet, "Do not list written files");

  auto* plot = app.add_subcommand("plot", "Render CSV artifacts to SVG");
  std::string kind, output, title;
  std::vector<std::string> inputs;
  plot->add_option("--kind", kind, "complex | bands | profile | heatmap")
      ->required()
      ->check(CLI::IsMember({"complex", "bands", "profile", "heatmap"}));
  plot->add_option("-i,--input", inputs, "CSV input; extra inputs are overlays")->required();
  plot->add_option("-o,--output", output, "SVG output")->required();
  plot->add_option("--title", title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) {
    std::ostream null(nullptr);
    return nhtopo::cli::run(config, overrides, out_dir, quiet ? null : std::cout);
  }
  try {
    nhtopo::cli::plot_files(kind, inputs, output, title);
  } catch (const nhtopo::Error& e) {
    std::cerr << "error [" << nhtopo::to_string(e.code()) << "]: " << e.what() << '\n';
    return nhtopo::cli::exit_code(e.code());
  }
  return 0;
}

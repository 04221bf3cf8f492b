// kakeya: build, measure and render tangency-compressed curved Kakeya stages.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "kakeya/errors.hpp"
#include "kakeya/report.hpp"

namespace {

struct KeyHelp {
  const char* key;
  const char* help;
  const char* def;
};

// defaults mirror RunConfig
const KeyHelp kKeys[] = {
    {"family", "curve family: parabola | parabola_plus_linear | exponential", "parabola"},
    {"a0", "lowest aperture", "1"},
    {"delta0", "aperture range of the block", "1"},
    {"M", "construction size (2^M rects)", "16"},
    {"steps", "tangency steps, -1 = M/2-1 (diagnostic only)", "-1"},
    {"rescale_start", "window start for rescaled iteration, -1 = parent window", "-1"},
    {"m_sequence", "iterate: comma list M1,M2,...", "M"},
    {"rect_budget", "iterate: max materialized rects", "16777216"},
    {"columns", "quadrature columns", "4096"},
    {"delta", "vertical thickening (maximal stage: 0 -> delta0 2^-M)", "0"},
    {"sweep_M", "sweep: comma list of M", "16,24,32"},
    {"engine", "slice engine: auto | exact | hierarchical", "auto"},
    {"buckets", "hierarchical engine aperture buckets", "16"},
    {"kind", "maximal witness: ball | slab_S | rect_T | stage", "slab_S"},
    {"deltas", "maximal: comma list of delta (default 2^-6..2^-14)", ""},
    {"p", "maximal: comma list of p (inf allowed)", "2"},
    {"q", "maximal: comma list of q (inf allowed)", "inf"},
    {"a_points", "maximal: aperture grid points on [1,2]", "33"},
    {"search", "maximal translation search: witness | grid", "witness"},
    {"grid_nx", "grid search nodes in x", "64"},
    {"grid_ny", "grid search nodes in y", "64"},
    {"t_nodes", "quadrature nodes along the curve", "512"},
    {"s_nodes", "quadrature nodes across the thickening", "16"},
    {"grid_size", "validate: grid points", "10000"},
    {"checks", "validate: random tangency spot checks", "1000"},
    {"samples", "render: samples per curve", "32"},
    {"input", "stage dump to read (measure, render)", ""},
    {"output", "output file (default under out_dir)", ""},
    {"out_dir", "output directory", "."},
    {"threads", "worker threads", "1"},
    {"seed", "seed for randomized checks", "0"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curved Kakeya stage construction, measure and maximal-operator bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file; flags override it");
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> values(std::size(kKeys));
  for (std::size_t i = 0; i < std::size(kKeys); ++i)
    app.add_option(std::string("--") + kKeys[i].key, values[i], kKeys[i].help)
        ->default_str(kKeys[i].def);
  bool diagnostic = false, rescaled = false, no_timing = false;
  app.add_flag("--diagnostic", diagnostic, "no-cutoff mode: window [0,1], any even M");
  app.add_flag("--rescaled", rescaled, "iterate: rescaled tangency abscissae in children");
  app.add_flag("--no-timing", no_timing, "write runtime_ms as 0 (byte-stable CSVs)");

  const char* blurbs[] = {
      "check a family's admissibility and spot-check the tangency solver",
      "build F_M and write the stage dump",
      "measure a stage (dump via --input, or built from the config)",
      "measure F_M for every M in sweep_M",
      "estimate maximal-operator ratios and fit exponents",
      "build the iterated set K_d and write its dump",
      "render a stage as SVG"};
  auto names = kakeya::subcommands();
  for (std::size_t i = 0; i < names.size(); ++i) app.add_subcommand(names[i], blurbs[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  }

  try {
    kakeya::RunConfig cfg;
    if (!config_path.empty()) kakeya::load_config_file(cfg, config_path);
    for (std::size_t i = 0; i < std::size(kKeys); ++i)
      if (app.count(std::string("--") + kKeys[i].key))
        kakeya::apply_setting(cfg, kKeys[i].key, values[i], "flag");
    if (diagnostic) cfg.diagnostic = true;
    if (rescaled) cfg.rescaled = true;
    if (no_timing) cfg.timing = false;
    return kakeya::run(cfg, app.get_subcommands().front()->get_name(), std::cout);
  } catch (const kakeya::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

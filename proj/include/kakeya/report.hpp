#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kakeya/construction.hpp"
#include "kakeya/maximal.hpp"
#include "kakeya/measure.hpp"

namespace kakeya {

// Flat key=value run description. Defaults here are the ones --help shows.
struct RunConfig {
  std::string family = "parabola";
  double a0 = 1.0;
  double delta0 = 1.0;
  int M = 16;
  int steps = -1;
  bool diagnostic = false;
  bool rescaled = false;
  double rescale_start = -1.0;
  std::vector<int> m_sequence;  // iterate; empty -> (M)
  std::uint64_t rect_budget = std::uint64_t(1) << 24;
  int columns = 4096;
  double delta = 0.0;           // thickening for build/measure/sweep
  std::vector<int> sweep_M{16, 24, 32};
  std::string engine = "auto";  // auto | exact | hierarchical
  int buckets = 16;
  // maximal
  std::string kind = "slab_S";
  std::vector<double> deltas;   // empty -> 2^-6 .. 2^-14
  std::vector<double> p{2.0};
  std::vector<double> q{kInf};
  int a_points = 33;
  std::string search = "witness";  // witness | grid
  int grid_nx = 64, grid_ny = 64;
  int t_nodes = 512, s_nodes = 16;
  // validate
  int grid_size = 10000;
  int checks = 1000;
  // render
  int samples = 32;
  // io
  std::string input;   // stage dump for measure/render
  std::string output;  // explicit output file
  std::string out_dir = ".";
  bool timing = true;  // false writes runtime_ms = 0
  int threads = 1;
  std::uint64_t seed = 0;
};

// Applies one key; `where` prefixes error messages (e.g. "config:12").
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value,
                   const std::string& where);
// Reads '#'-commented key=value lines; errors carry "config:LINE:".
void load_config(RunConfig& cfg, std::istream& in);
void load_config_file(RunConfig& cfg, const std::string& path);
std::vector<std::string> config_keys();

ConstructionPlan plan_from(const RunConfig& cfg);

struct MeasureRow {
  int M = 0;
  double delta = 0.0;
  int columns = 0;
  double measure = 0.0;
  double scaled = 0.0;
  double runtime_ms = 0.0;
};
void write_measure_csv(std::ostream& os, const std::vector<MeasureRow>& rows);

struct MaximalRow {
  std::string kind;
  double p = 0.0, q = 0.0;
  double delta = 0.0;
  double ratio = 0.0;
  bool has_slope = false;
  double slope = 0.0;
};
void write_maximal_csv(std::ostream& os, const std::vector<MaximalRow>& rows);

// "# key=value" metadata, then n,aperture,thickness,u,v[,parent_path].
void write_stage_dump(std::ostream& os, const StageSet& stage);
StageSet read_stage_dump(std::istream& is);
StageSet read_stage_dump_file(const std::string& path);

// One closed path per rect, tangency guides, axes.
std::string render_svg(const StageSet& stage, int samples_per_curve);

// Runs a subcommand; artifacts go to files, a short summary to `out`.
// Library errors propagate as kakeya::Error.
int run(const RunConfig& cfg, const std::string& subcommand, std::ostream& out);

std::vector<std::string> subcommands();

}  // namespace kakeya

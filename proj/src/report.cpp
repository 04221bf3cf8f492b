#include "kakeya/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "kakeya/errors.hpp"
#include "kakeya/iteration.hpp"
#include "kakeya/tangency.hpp"

namespace kakeya {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s, const std::string& where) {
  std::string t = trim(s);
  if (t == "inf" || t == "infinity") return kInf;
  try {
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos == t.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(where + ": not a number: '" + t + "'");
}

long long to_int(const std::string& s, const std::string& where) {
  std::string t = trim(s);
  try {
    std::size_t pos = 0;
    long long v = std::stoll(t, &pos);
    if (pos == t.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(where + ": not an integer: '" + t + "'");
}

bool to_bool(const std::string& s, const std::string& where) {
  std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(where + ": not a boolean: '" + t + "'");
}

int small_int(const std::string& s, const std::string& where) {
  long long v = to_int(s, where);
  if (v < -1'000'000'000LL || v > 1'000'000'000LL)
    throw ConfigError(where + ": out of range");
  return int(v);
}

// key -> setter
using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto D = [](double RunConfig::*f) {
      return [f](RunConfig& c, const std::string& v, const std::string& w) {
        c.*f = to_double(v, w);
      };
    };
    auto I = [](int RunConfig::*f) {
      return [f](RunConfig& c, const std::string& v, const std::string& w) {
        c.*f = small_int(v, w);
      };
    };
    auto B = [](bool RunConfig::*f) {
      return [f](RunConfig& c, const std::string& v, const std::string& w) {
        c.*f = to_bool(v, w);
      };
    };
    auto S = [](std::string RunConfig::*f) {
      return [f](RunConfig& c, const std::string& v, const std::string&) { c.*f = trim(v); };
    };
    auto IL = [](std::vector<int> RunConfig::*f) {
      return [f](RunConfig& c, const std::string& v, const std::string& w) {
        std::vector<int> out;
        for (auto& s : split_list(v)) out.push_back(small_int(s, w));
        c.*f = out;
      };
    };
    auto DL = [](std::vector<double> RunConfig::*f) {
      return [f](RunConfig& c, const std::string& v, const std::string& w) {
        std::vector<double> out;
        for (auto& s : split_list(v)) out.push_back(to_double(s, w));
        c.*f = out;
      };
    };
    t["family"] = S(&RunConfig::family);
    t["a0"] = D(&RunConfig::a0);
    t["delta0"] = D(&RunConfig::delta0);
    t["M"] = I(&RunConfig::M);
    t["steps"] = I(&RunConfig::steps);
    t["diagnostic"] = B(&RunConfig::diagnostic);
    t["rescaled"] = B(&RunConfig::rescaled);
    t["rescale_start"] = D(&RunConfig::rescale_start);
    t["m_sequence"] = IL(&RunConfig::m_sequence);
    t["rect_budget"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      long long b = to_int(v, w);
      if (b < 1) throw ConfigError(w + ": rect_budget must be >= 1");
      c.rect_budget = std::uint64_t(b);
    };
    t["columns"] = I(&RunConfig::columns);
    t["delta"] = D(&RunConfig::delta);
    t["sweep_M"] = IL(&RunConfig::sweep_M);
    t["engine"] = S(&RunConfig::engine);
    t["buckets"] = I(&RunConfig::buckets);
    t["kind"] = S(&RunConfig::kind);
    t["deltas"] = DL(&RunConfig::deltas);
    t["p"] = DL(&RunConfig::p);
    t["q"] = DL(&RunConfig::q);
    t["a_points"] = I(&RunConfig::a_points);
    t["search"] = S(&RunConfig::search);
    t["grid_nx"] = I(&RunConfig::grid_nx);
    t["grid_ny"] = I(&RunConfig::grid_ny);
    t["t_nodes"] = I(&RunConfig::t_nodes);
    t["s_nodes"] = I(&RunConfig::s_nodes);
    t["grid_size"] = I(&RunConfig::grid_size);
    t["checks"] = I(&RunConfig::checks);
    t["samples"] = I(&RunConfig::samples);
    t["input"] = S(&RunConfig::input);
    t["output"] = S(&RunConfig::output);
    t["out_dir"] = S(&RunConfig::out_dir);
    t["timing"] = B(&RunConfig::timing);
    t["threads"] = I(&RunConfig::threads);
    t["seed"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      long long s = to_int(v, w);
      if (s < 0) throw ConfigError(w + ": seed must be >= 0");
      c.seed = std::uint64_t(s);
    };
    return t;
  }();
  return table;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return std::string(buf) == "-0.000" ? "0.000" : buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string output_path(const RunConfig& cfg, const std::string& fallback) {
  if (!cfg.output.empty()) return cfg.output;
  std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
  return (dir / fallback).string();
}

std::ofstream open_out(const std::string& path) {
  std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write '" + path + "'");
  return os;
}

bool use_exact(const RunConfig& cfg, int M) {
  if (cfg.engine == "exact") return true;
  if (cfg.engine == "hierarchical") return false;
  if (cfg.engine == "auto") return M <= 20;
  throw ConfigError("engine must be auto, exact or hierarchical");
}

MeasureRow measure_row(const RunConfig& cfg, const ConstructionPlan& plan) {
  validate_plan(plan);
  auto t0 = std::chrono::steady_clock::now();
  MeasureReport rep;
  if (use_exact(cfg, plan.M)) {
    StageSet st = build_stage(plan, cfg.threads);
    rep = measure_stage(st, cfg.delta, cfg.columns, cfg.threads);
  } else {
    BlockStage src = BlockStage::from_plan(plan, cfg.buckets);
    rep = measure_stage(src, cfg.delta, cfg.columns, cfg.threads, false, plan.M, plan.delta0);
  }
  MeasureRow row{plan.M, cfg.delta, cfg.columns, rep.measure, rep.scaled, 0.0};
  if (cfg.timing) row.runtime_ms = elapsed_ms(t0);
  return row;
}

std::string meta_value(const std::map<std::string, std::string>& meta, const std::string& k) {
  auto it = meta.find(k);
  if (it == meta.end()) throw DataError("dump: missing metadata '" + k + "'");
  return it->second;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  CurveFamily fam = preset(cfg.family);
  ValidationReport rep = validate_family(fam, cfg.grid_size);
  out << "family=" << fam.name << "\n"
      << "passed=" << (rep.passed ? "true" : "false") << "\n"
      << "grid_size=" << rep.grid_size << "\n"
      << "min_f2=" << num(rep.worst_margins[0]) << "\n"
      << "max_abs_f3=" << num(rep.worst_margins[1]) << "\n"
      << "max_f1f3_minus_f2sq=" << num(rep.worst_margins[2]) << "\n"
      << "cinematic_det_min=" << num(rep.cinematic_det_min) << "\n";
  if (!rep.passed) throw DataError("family '" + fam.name + "' failed validation: " + rep.failure);

  // seeded spot checks of the tangency solver and dominance
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst_res = 0.0, worst_gap = INFINITY;
  for (int i = 0; i < cfg.checks; ++i) {
    double at = 1.0 + U(rng), a = std::min(2.0, at + 0.1 * U(rng));
    double x0 = 0.2 + 0.8 * U(rng);
    TangencySolution s = solve_tangency(fam, a, at, x0);
    worst_res = std::max({worst_res, std::abs(s.residual_c0), std::abs(s.residual_c1)});
    worst_gap = std::min(worst_gap, verify_dominance(fam, a, at, x0, s, 1000));
  }
  out << "checks=" << cfg.checks << "\n"
      << "seed=" << cfg.seed << "\n"
      << "max_residual=" << num(worst_res) << "\n"
      << "min_dominance_gap=" << num(cfg.checks ? worst_gap : 0.0) << "\n";
  return 0;
}

int cmd_build(const RunConfig& cfg, std::ostream& out) {
  ConstructionPlan plan = plan_from(cfg);
  validate_plan(plan);
  if (plan.M > kMaxMaterializedM) throw SizeError("build materializes at most M=26");
  TranslationTable table = build_translation_table(plan, cfg.threads);
  StageSet st = build_stage(plan, table);
  TranslationBounds b = translation_bounds(plan, table);
  std::string path = output_path(cfg, "stage_M" + std::to_string(plan.M) + ".csv");
  auto os = open_out(path);
  write_stage_dump(os, st);
  out << "rects=" << st.rects.size() << "\n"
      << "window=" << num(st.x_window.lo) << "," << num(st.x_window.hi) << "\n"
      << "max_u=" << num(b.max_u) << "\nmax_v=" << num(b.max_v) << "\n"
      << "C_u=" << num(b.C_u) << "\nC_v=" << num(b.C_v) << "\n"
      << "dump=" << path << "\n";
  return 0;
}

int cmd_measure(const RunConfig& cfg, std::ostream& out) {
  std::vector<MeasureRow> rows;
  if (!cfg.input.empty()) {
    auto t0 = std::chrono::steady_clock::now();
    StageSet st = read_stage_dump_file(cfg.input);
    MeasureReport rep = measure_stage(st, cfg.delta, cfg.columns, cfg.threads);
    rows.push_back({st.plan.M, cfg.delta, cfg.columns, rep.measure, rep.scaled,
                    cfg.timing ? elapsed_ms(t0) : 0.0});
  } else {
    rows.push_back(measure_row(cfg, plan_from(cfg)));
  }
  std::string path = output_path(cfg, "measure.csv");
  auto os = open_out(path);
  write_measure_csv(os, rows);
  out << "measure=" << num(rows[0].measure) << "\ncsv=" << path << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sweep_M.empty()) throw ConfigError("sweep_M is empty");
  std::vector<MeasureRow> rows;
  for (int M : cfg.sweep_M) {
    RunConfig c = cfg;
    c.M = M;
    rows.push_back(measure_row(c, plan_from(c)));
    out << "M=" << M << " measure=" << num(rows.back().measure)
        << " scaled=" << num(rows.back().scaled) << "\n";
  }
  double lo = INFINITY, hi = 0.0;
  for (auto& r : rows) lo = std::min(lo, r.scaled), hi = std::max(hi, r.scaled);
  std::string path = output_path(cfg, "sweep.csv");
  auto os = open_out(path);
  write_measure_csv(os, rows);
  out << "scaled_spread=" << num(lo > 0 ? hi / lo : INFINITY) << "\ncsv=" << path << "\n";
  return 0;
}

int cmd_maximal(const RunConfig& cfg, std::ostream& out) {
  if (cfg.p.empty() || cfg.q.empty()) throw ConfigError("p and q lists must be non-empty");
  CurveFamily fam = preset(cfg.family);
  WitnessKind kind = witness_kind(cfg.kind);
  SearchMode mode;
  if (cfg.search == "grid") mode = SearchMode::on_grid(cfg.grid_nx, cfg.grid_ny);
  else if (cfg.search != "witness") throw ConfigError("search must be witness or grid");
  Quadrature quad{cfg.t_nodes, cfg.s_nodes};
  auto grid = uniform_grid(1.0, 2.0, cfg.a_points);
  std::vector<MaximalRow> rows;

  if (kind == WitnessKind::stage) {
    ConstructionPlan plan = plan_from(cfg);
    validate_plan(plan);
    double d = cfg.delta > 0.0 ? cfg.delta : std::ldexp(plan.delta0, -plan.M);
    std::unique_ptr<StageSet> st;
    std::unique_ptr<SliceSource> src;
    if (use_exact(cfg, plan.M)) {
      st = std::make_unique<StageSet>(build_stage(plan, cfg.threads));
      src = std::make_unique<ExactSlicer>(*st);
    } else {
      src = std::make_unique<BlockStage>(BlockStage::from_plan(plan, cfg.buckets));
    }
    WitnessSet set = WitnessSet::stage_set(*src, d);
    MaximalEstimate est = ratio_lower_bound(set, d, cfg.p[0], cfg.q[0], grid, mode, quad,
                                            cfg.threads,
                                            measure_stage(*src, d, cfg.columns, cfg.threads).measure);
    double mn = *std::min_element(est.values.begin(), est.values.end());
    for (double p : cfg.p)
      for (double q : cfg.q)
        rows.push_back({"stage", p, q, d, lq_ratio(grid, est.values, est.measure, p, q),
                        false, 0.0});
    out << "min_value=" << num(mn) << "\nmeasure=" << num(est.measure) << "\n";
  } else {
    std::vector<double> ds = cfg.deltas.empty() ? geometric_deltas(6, 14) : cfg.deltas;
    for (double p : cfg.p)
      for (double q : cfg.q) {
        std::vector<double> lx, ly;
        std::size_t first = rows.size();
        for (double d : ds) {
          WitnessSet set;
          if (kind == WitnessKind::ball) set = WitnessSet::ball(fam);
          else if (kind == WitnessKind::slab_S) set = WitnessSet::slab(fam, d);
          else if (kind == WitnessKind::rect_T) set = WitnessSet::rect(fam, d);
          else throw ConfigError("maximal supports kinds ball, slab_S, rect_T, stage");
          double r = ratio_lower_bound(set, d, p, q, grid, mode, quad, cfg.threads)
                         .ratio_lower_bound;
          rows.push_back({cfg.kind, p, q, d, r, false, 0.0});
          if (r > 0.0) {
            lx.push_back(std::log(d));
            ly.push_back(std::log(r));
          }
        }
        if (lx.size() >= 4 && lx.size() == ds.size()) {
          double s = least_squares_slope(lx, ly);
          for (std::size_t i = first; i < rows.size(); ++i) {
            rows[i].has_slope = true;
            rows[i].slope = s;
          }
          out << "p=" << num(p) << " q=" << num(q) << " slope=" << num(s) << "\n";
        }
      }
  }
  std::string path = output_path(cfg, "maximal.csv");
  auto os = open_out(path);
  write_maximal_csv(os, rows);
  out << "csv=" << path << "\n";
  return 0;
}

int cmd_iterate(const RunConfig& cfg, std::ostream& out) {
  IterationPlan ip;
  ip.family = preset(cfg.family);
  ip.a0 = cfg.a0;
  ip.delta0 = cfg.delta0;
  ip.m_sequence = cfg.m_sequence.empty() ? std::vector<int>{cfg.M} : cfg.m_sequence;
  ip.depth = int(ip.m_sequence.size());
  ip.rect_budget = cfg.rect_budget;
  ip.diagnostic = cfg.diagnostic;
  ip.rescaled = cfg.rescaled;
  ip.rescale_start = cfg.rescale_start;
  StageSet st = build_iterated(ip, cfg.threads);
  std::string path = output_path(cfg, "iterate.csv");
  auto os = open_out(path);
  write_stage_dump(os, st);
  out << "rects=" << st.rects.size() << "\n"
      << "window=" << num(st.x_window.lo) << "," << num(st.x_window.hi) << "\n"
      << "dump=" << path << "\n";
  return 0;
}

int cmd_render(const RunConfig& cfg, std::ostream& out) {
  StageSet st;
  if (!cfg.input.empty()) {
    st = read_stage_dump_file(cfg.input);
  } else {
    ConstructionPlan plan = plan_from(cfg);
    validate_plan(plan);
    if (plan.M > 16) throw SizeError("render builds stages up to M=16; pass a dump instead");
    st = build_stage(plan, cfg.threads);
  }
  std::string path = output_path(cfg, "stage.svg");
  auto os = open_out(path);
  os << render_svg(st, cfg.samples);
  out << "paths=" << st.rects.size() << "\nsvg=" << path << "\n";
  return 0;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value,
                   const std::string& where) {
  auto it = setters().find(trim(key));
  if (it == setters().end()) throw ConfigError(where + ": unknown key '" + trim(key) + "'");
  it->second(cfg, value, where + ": " + trim(key));
}

void load_config(RunConfig& cfg, std::istream& in) {
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = "config:" + std::to_string(no);
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1), where);
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  load_config(cfg, in);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> k;
  for (auto& [name, _] : setters()) k.push_back(name);
  return k;
}

ConstructionPlan plan_from(const RunConfig& cfg) {
  ConstructionPlan p;
  p.family = preset(cfg.family);
  p.a0 = cfg.a0;
  p.delta0 = cfg.delta0;
  p.M = cfg.M;
  p.steps = cfg.steps;
  p.diagnostic = cfg.diagnostic;
  return p;
}

void write_measure_csv(std::ostream& os, const std::vector<MeasureRow>& rows) {
  os << "M,delta,columns,measure,measure_times_M2_over_delta0,runtime_ms\n";
  char buf[32];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.3f", r.runtime_ms);
    os << r.M << ',' << num(r.delta) << ',' << r.columns << ',' << num(r.measure) << ','
       << num(r.scaled) << ',' << buf << '\n';
  }
}

void write_maximal_csv(std::ostream& os, const std::vector<MaximalRow>& rows) {
  os << "kind,p,q,delta,ratio,fitted_slope\n";
  for (const auto& r : rows)
    os << r.kind << ',' << num(r.p) << ',' << num(r.q) << ',' << num(r.delta) << ','
       << num(r.ratio) << ',' << (r.has_slope ? num(r.slope) : "") << '\n';
}

void write_stage_dump(std::ostream& os, const StageSet& st) {
  const ConstructionPlan& p = st.plan;
  os << "# family=" << p.family.name << "\n# a0=" << num(p.a0) << "\n# delta0=" << num(p.delta0)
     << "\n# M=" << p.M << "\n# steps=" << p.steps
     << "\n# diagnostic=" << (p.diagnostic ? 1 : 0) << "\n# tangent_lo=" << num(p.tangent_lo)
     << "\n# tangent_hi=" << num(p.tangent_hi) << "\n# window_lo=" << num(st.x_window.lo)
     << "\n# window_hi=" << num(st.x_window.hi) << "\n# depth=" << st.depth
     << "\n# m_sequence=";
  for (std::size_t i = 0; i < st.m_sequence.size(); ++i)
    os << (i ? "," : "") << st.m_sequence[i];
  os << "\n# rescaled=" << (st.rescaled ? 1 : 0) << "\n# rects=" << st.rects.size() << "\n";
  bool iterated = st.depth > 1;
  os << "n,aperture,thickness,u,v" << (iterated ? ",parent_path" : "") << "\n";
  std::string line;
  for (const auto& r : st.rects) {
    line.clear();
    line += std::to_string(r.index);
    for (double v : {r.aperture, r.thickness, r.u, r.v}) {
      line += ',';
      line += num(v);
    }
    if (iterated) {
      line += ',';
      line += st.parent_path(r.index);
    }
    line += '\n';
    os << line;
  }
}

StageSet read_stage_dump(std::istream& is) {
  std::map<std::string, std::string> meta;
  std::string line;
  int no = 0;
  bool header = false, iterated = false;
  StageSet st;
  while (std::getline(is, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string where = "dump:" + std::to_string(no);
    if (!header && line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      meta[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      continue;
    }
    if (!header) {
      if (line == "n,aperture,thickness,u,v") iterated = false;
      else if (line == "n,aperture,thickness,u,v,parent_path") iterated = true;
      else throw DataError(where + ": unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != (iterated ? 6u : 5u)) throw DataError(where + ": wrong column count");
    CurvedRect r;
    try {
      std::size_t pos = 0;
      r.index = std::stoull(f[0], &pos);
      if (pos != f[0].size()) throw std::invalid_argument("index");
      double* dst[4] = {&r.aperture, &r.thickness, &r.u, &r.v};
      for (int k = 0; k < 4; ++k) {
        *dst[k] = std::stod(f[k + 1], &pos);
        if (pos != f[k + 1].size() || !std::isfinite(*dst[k]))
          throw std::invalid_argument("value");
      }
    } catch (const std::exception&) {
      throw DataError(where + ": malformed row");
    }
    if (!st.rects.empty() && r.index <= st.rects.back().index)
      throw DataError(where + ": rows must be in ascending n");
    st.rects.push_back(r);
  }
  if (!header) throw DataError("dump: missing header");
  std::string w = "dump";
  ConstructionPlan& p = st.plan;
  p.family = preset(meta_value(meta, "family"));
  p.a0 = to_double(meta_value(meta, "a0"), w);
  p.delta0 = to_double(meta_value(meta, "delta0"), w);
  p.M = small_int(meta_value(meta, "M"), w);
  p.steps = small_int(meta_value(meta, "steps"), w);
  p.diagnostic = to_bool(meta_value(meta, "diagnostic"), w);
  p.tangent_lo = to_double(meta_value(meta, "tangent_lo"), w);
  p.tangent_hi = to_double(meta_value(meta, "tangent_hi"), w);
  st.x_window = {to_double(meta_value(meta, "window_lo"), w),
                 to_double(meta_value(meta, "window_hi"), w)};
  st.depth = small_int(meta_value(meta, "depth"), w);
  for (auto& s : split_list(meta_value(meta, "m_sequence")))
    st.m_sequence.push_back(small_int(s, w));
  st.rescaled = to_bool(meta_value(meta, "rescaled"), w);
  if (iterated != (st.depth > 1)) throw DataError("dump: parent_path column does not match depth");
  return st;
}

StageSet read_stage_dump_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read dump '" + path + "'");
  return read_stage_dump(in);
}

std::string render_svg(const StageSet& st, int samples) {
  if (samples < 8) throw ConfigError("samples_per_curve must be >= 8");
  const CurveFamily& f = st.family();
  const double W = 960, H = 540, pad = 40;
  Interval xw = st.x_window;
  if (!(xw.hi > xw.lo)) xw = {0.0, 1.0};

  struct Band {
    std::vector<std::pair<double, double>> top, bot;
  };
  std::vector<Band> bands;
  double ylo = INFINITY, yhi = -INFINITY;
  for (const auto& r : st.rects) {
    double x0 = std::max(xw.lo, r.u), x1 = std::min(xw.hi, 1.0 + r.u);
    if (!(x1 > x0)) continue;
    Band b;
    for (int i = 0; i <= samples; ++i) {
      double x = x0 + (x1 - x0) * i / samples, y = f.f(x - r.u);
      b.bot.push_back({x, r.aperture * y + r.v});
      b.top.push_back({x, (r.aperture + r.thickness) * y + r.v});
      ylo = std::min(ylo, b.bot.back().second);
      yhi = std::max(yhi, b.top.back().second);
    }
    bands.push_back(std::move(b));
  }
  if (bands.empty()) ylo = 0.0, yhi = 1.0;
  if (!(yhi > ylo)) yhi = ylo + 1.0;
  auto X = [&](double x) { return pad + (W - 2 * pad) * (x - xw.lo) / (xw.hi - xw.lo); };
  auto Y = [&](double y) { return H - pad - (H - 2 * pad) * (y - ylo) / (yhi - ylo); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"960\" height=\"540\" "
       "viewBox=\"0 0 960 540\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"white\"/>\n";
  s += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + fixed3(pad) + "\" y1=\"" + fixed3(H - pad) + "\" x2=\"" + fixed3(W - pad) +
       "\" y2=\"" + fixed3(H - pad) + "\"/>\n";
  s += "<line x1=\"" + fixed3(pad) + "\" y1=\"" + fixed3(H - pad) + "\" x2=\"" + fixed3(pad) +
       "\" y2=\"" + fixed3(pad) + "\"/>\n";
  s += "</g>\n";
  s += "<text x=\"" + fixed3(pad) + "\" y=\"" + fixed3(H - pad / 4) + "\" font-size=\"12\">x " +
       fixed3(xw.lo) + " .. " + fixed3(xw.hi) + "</text>\n";
  s += "<g class=\"guides\" stroke=\"gray\" stroke-dasharray=\"4 3\">\n";
  for (double xt : st.tangent_points()) {
    if (xt < xw.lo || xt > xw.hi) continue;
    s += "<line x1=\"" + fixed3(X(xt)) + "\" y1=\"" + fixed3(H - pad) + "\" x2=\"" + fixed3(X(xt)) +
         "\" y2=\"" + fixed3(pad) + "\"/>\n";
  }
  s += "</g>\n<g class=\"rects\" stroke=\"black\" stroke-width=\"0.3\" fill-opacity=\"0.35\">\n";
  for (std::size_t i = 0; i < bands.size(); ++i) {
    int hue = int(360 * i / std::max<std::size_t>(1, bands.size()));
    std::string d = "M";
    const Band& b = bands[i];
    for (std::size_t k = 0; k < b.top.size(); ++k)
      d += (k ? " L" : "") + fixed3(X(b.top[k].first)) + "," + fixed3(Y(b.top[k].second));
    for (std::size_t k = b.bot.size(); k-- > 0;)
      d += " L" + fixed3(X(b.bot[k].first)) + "," + fixed3(Y(b.bot[k].second));
    s += "<path fill=\"hsl(" + std::to_string(hue) + ",70%,50%)\" d=\"" + d + " Z\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

std::vector<std::string> subcommands() {
  return {"validate", "build", "measure", "sweep", "maximal", "iterate", "render"};
}

int run(const RunConfig& cfg, const std::string& sub, std::ostream& out) {
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (sub == "validate") return cmd_validate(cfg, out);
  if (sub == "build") return cmd_build(cfg, out);
  if (sub == "measure") return cmd_measure(cfg, out);
  if (sub == "sweep") return cmd_sweep(cfg, out);
  if (sub == "maximal") return cmd_maximal(cfg, out);
  if (sub == "iterate") return cmd_iterate(cfg, out);
  if (sub == "render") return cmd_render(cfg, out);
  throw ConfigError("unknown subcommand '" + sub + "'");
}

}  // namespace kakeya

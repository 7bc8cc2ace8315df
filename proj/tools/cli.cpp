#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "boussinesq/catalog.hpp"
#include "boussinesq/errors.hpp"
#include "boussinesq/invariants.hpp"
#include "boussinesq/kinematics.hpp"
#include "boussinesq/sweep.hpp"

#ifndef EBFLOW_DEFAULT_PRESET_DIR
#define EBFLOW_DEFAULT_PRESET_DIR "presets"
#endif

namespace ebflow {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace boussinesq;

namespace {

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw BadInput(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadInput("cannot write " + path.string());
  out << text;
}

json to_array(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec to_vec(const json& j, int n, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw BadInput(what + " must be an array of " + std::to_string(n) + " numbers");
  }
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

Window window_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw BadInput(what + " must be [lo, hi]");
  const Window w{j[0].get<double>(), j[1].get<double>()};
  if (!(w.lo < w.hi)) throw BadInput(what + " must have lo < hi");
  return w;
}

// Input selection shared by verify, trace and sweep.
struct Common {
  std::string params_file;
  std::string preset;
  std::string manifest;
  std::vector<std::string> overrides;
  std::string out_dir = "ebflow_out";
  bool json_out = false;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("params_file", c.params_file, "JSON document {\"family\": ..., \"params\": {...}}");
  cmd->add_option("--preset", c.preset, "Preset name from the preset directory");
  cmd->add_option("--manifest", c.manifest, "Re-run the document recorded in a manifest.json");
  cmd->add_option("--param", c.overrides, "Parameter override key=value (value parsed as JSON)");
  cmd->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_flag("--json", c.json_out, "Machine-readable output on stdout");
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

json resolve_document(const Common& c, json& source) {
  const int given = !c.params_file.empty() + !c.preset.empty() + !c.manifest.empty();
  if (given != 1) throw BadInput("give exactly one of PARAMS_FILE, --preset or --manifest");
  json doc;
  if (!c.params_file.empty()) {
    doc = read_json(c.params_file);
    source = {{"params_file", c.params_file}};
  } else if (!c.preset.empty()) {
    doc = load_preset(c.preset);
    source = {{"preset", c.preset}};
  } else {
    const json m = read_json(c.manifest);
    if (!m.is_object() || !m.contains("document")) throw BadInput(c.manifest + ": not an ebflow manifest");
    doc = m.at("document");
    source = {{"manifest", c.manifest}};
  }
  if (!doc.is_object()) throw BadInput("input document must be a JSON object");
  if (!doc.contains("params")) doc["params"] = json::object();
  if (!doc.at("params").is_object()) throw BadInput("\"params\" must be an object");
  for (const std::string& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw BadInput("--param expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string text = kv.substr(eq + 1);
    json value;
    try {
      value = json::parse(text);
    } catch (const json::parse_error&) {
      value = text;
    }
    doc["params"][key] = value;
  }
  return doc;
}

std::string family_of(const json& doc) {
  if (doc.contains("family")) return doc.at("family").get<std::string>();
  if (doc.contains("family_id")) return doc.at("family_id").get<std::string>();
  throw BadInput("input document has no \"family\"");
}

FlowCandidate build(json& doc) {
  const std::string family = family_of(doc);
  if (family == "Identity") {
    json& p = doc["params"];
    for (const auto& [key, _] : p.items()) {
      if (key != "n") throw BadInput("Identity accepts only the parameter \"n\"");
    }
    const int n = p.value("n", 2);
    if (n != 2 && n != 3) throw BadInput("Identity needs n = 2 or 3");
    p["n"] = n;
    return identity_candidate(n);
  }
  FlowCandidate c = candidate_from_json(doc);
  doc["params"] = family_params(family, doc.at("params"));
  return c;
}

// Run bookkeeping: every command ends by writing manifest.json.
class Run {
 public:
  Run(std::string command, const std::vector<std::string>& args, const Common* common) : command_(std::move(command)) {
    manifest_ = {{"tool", "ebflow"}, {"command", command_}, {"args", args}};
    if (common) {
      out_dir_ = common->out_dir;
      manifest_["output_dir"] = common->out_dir;
      manifest_["seed"] = common->seed;
    }
  }

  json& manifest() { return manifest_; }
  const fs::path& dir() const { return out_dir_; }
  void prepare() {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) throw BadInput("cannot create " + out_dir_.string() + ": " + ec.message());
    prepared_ = true;
  }
  void output(const std::string& name, const std::string& text) {
    write_text(out_dir_ / name, text);
    manifest_["outputs"].push_back(name);
  }
  void warn(std::ostream& err, const std::string& msg) {
    err << "warning: " << msg << "\n";
    manifest_["warnings"].push_back(msg);
  }
  int finish(int status, const std::string& error = {}) {
    manifest_["exit_status"] = status;
    if (!error.empty()) manifest_["error"] = error;
    if (out_dir_.empty()) return status;
    if (!prepared_) {
      std::error_code ec;
      fs::create_directories(out_dir_, ec);
      if (ec) return status;
    }
    if (!manifest_.contains("outputs")) manifest_["outputs"] = json::array();
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
    if (out) out << manifest_.dump(2) << "\n";
    return status;
  }

 private:
  std::string command_;
  fs::path out_dir_;
  json manifest_;
  bool prepared_ = false;
};

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, 'x')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || v < 1) throw BadInput("--grid expects NxMxK with positive integers, got '" + text + "'");
    dims.push_back(v);
  }
  return dims;
}

SampleGrid grid_for(const FlowCandidate& c, const std::vector<int>& dims) {
  SampleGrid g;
  const int n = c.n;
  std::vector<int> axes;
  if (static_cast<int>(dims.size()) == n + 1) {
    axes.assign(dims.begin(), dims.end() - 1);
  } else if (dims.size() == 2) {
    axes.assign(static_cast<std::size_t>(n), dims[0]);
  } else {
    throw BadInput("--grid needs " + std::to_string(n + 1) + " counts (labels per axis, then times) for n = " +
                   std::to_string(n));
  }
  std::vector<Vec> pts;
  int total = 1;
  for (int a : axes) total *= a;
  const Box& B = c.domain_hint;
  for (int idx = 0; idx < total; ++idx) {
    Vec z(n);
    int r = idx;
    for (int i = 0; i < n; ++i) {
      const int k = r % axes[static_cast<std::size_t>(i)];
      r /= axes[static_cast<std::size_t>(i)];
      z[i] = B.lo[i] + (B.hi[i] - B.lo[i]) * (k + 0.5) / axes[static_cast<std::size_t>(i)];
    }
    pts.push_back(z);
  }
  g.points = std::move(pts);
  g.time_values = midpoint_times(c.t_window, dims.back());
  return g;
}

std::string numbered(const std::string& prefix, std::size_t k) {
  std::ostringstream s;
  s << prefix << std::setw(3) << std::setfill('0') << k << ".csv";
  return s.str();
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

// ---- list ---------------------------------------------------------------

int cmd_list(const std::string& section, bool as_json, std::ostream& out) {
  json rows = json::array();
  for (const auto& f : family_catalog()) {
    if (!section.empty() && f.section != section) continue;
    rows.push_back({{"family", f.name},
                    {"section", f.section},
                    {"n", f.n},
                    {"summary", f.summary},
                    {"schema", family_schema(f)},
                    {"defaults", f.defaults}});
  }
  if (as_json) {
    out << rows.dump(2) << "\n";
    return kPass;
  }
  for (const auto& r : rows) {
    out << std::left << std::setw(22) << r["family"].get<std::string>() << std::setw(8)
        << r["section"].get<std::string>() << "n=" << r["n"].get<int>() << "  " << r["summary"].get<std::string>()
        << "\n    params:";
    for (const auto& [key, _] : r["defaults"].items()) out << ' ' << key;
    out << "\n";
  }
  return kPass;
}

// ---- verify -------------------------------------------------------------

struct VerifyFlags {
  std::string grid;
  std::optional<double> tol_det, tol_h, tol_nondeg;
  int threads = 0;
};

int cmd_verify(json doc, const VerifyFlags& f, Run& run, const Common& common, std::ostream& out) {
  json& settings = doc["verify"];
  if (!settings.is_object()) settings = json::object();
  if (!f.grid.empty()) settings["grid"] = f.grid;
  if (f.tol_det) settings["tol_det"] = *f.tol_det;
  if (f.tol_h) settings["tol_h"] = *f.tol_h;
  if (f.tol_nondeg) settings["tol_nondeg"] = *f.tol_nondeg;
  json overrides = json::object();
  for (const char* key : {"tol_det", "tol_h", "tol_nondeg"}) {
    if (settings.contains(key)) overrides[key] = settings[key];
  }
  run.manifest()["tolerance_overrides"] = overrides;

  const FlowCandidate c = build(doc);
  run.manifest()["document"] = doc;
  Tolerances tol;
  tol.det = settings.value("tol_det", tol.det);
  tol.h = settings.value("tol_h", tol.h);
  tol.nondegeneracy = settings.value("tol_nondeg", tol.nondegeneracy);
  SampleGrid grid;
  if (settings.contains("grid")) grid = grid_for(c, parse_grid(settings["grid"].get<std::string>()));
  grid.threads = f.threads;
  run.manifest()["grid"] = settings.value("grid", std::string("default"));

  run.prepare();
  const InvariantReport r = verify_candidate(c, grid, tol);
  run.output("report.json", r.to_json(true).dump(2) + "\n");
  if (common.json_out) {
    out << r.to_json(false).dump(2) << "\n";
  } else {
    out << c.family_id << ": " << (r.pass() ? "PASS" : "FAIL") << "  min|det| = " << fmt(r.min_abs_det)
        << "  max|d/dt det| = " << fmt(r.max_det_residual) << "  max|d/dt h| = " << fmt(r.max_h_residual) << "\n";
    if (!r.verdict.det_nonzero) out << "  det(d phi) vanishes at " << r.degenerate_points.size() << " labels\n";
  }
  return r.pass() ? kPass : kVerificationFailed;
}

// ---- trace --------------------------------------------------------------

struct TraceFlags {
  std::string seeds_file;
  std::vector<double> t_window;
  std::optional<int> samples;
  std::optional<int> random_seeds;
  bool svg = false;
};

SeedLine seed_line(const json& j, int n) {
  SeedLine s;
  s.start = to_vec(j.at("start"), n, "isopycnal start");
  s.end = to_vec(j.at("end"), n, "isopycnal end");
  s.normal = to_vec(j.at("normal"), n, "isopycnal normal");
  s.count = j.value("count", s.count);
  s.reach = j.value("reach", s.reach);
  s.scan = j.value("scan", s.scan);
  return s;
}

int cmd_trace(json doc, const TraceFlags& f, Run& run, const Common& common, std::ostream& out, std::ostream& err) {
  const FlowCandidate c = build(doc);
  json& tr = doc["trace"];
  if (!tr.is_object()) tr = json::object();
  if (!f.seeds_file.empty()) {
    const json s = read_json(f.seeds_file);
    if (s.is_array()) {
      tr["seeds"] = s;
    } else if (s.is_object()) {
      if (s.contains("seeds")) tr["seeds"] = s.at("seeds");
      if (s.contains("isopycnals")) tr["isopycnals"] = s.at("isopycnals");
    } else {
      throw BadInput(f.seeds_file + ": expected an array of labels or {\"seeds\": [...]}");
    }
  }
  if (!f.t_window.empty()) tr["t_window"] = f.t_window;
  if (f.samples) tr["samples"] = *f.samples;
  if (f.random_seeds) tr["random_seeds"] = *f.random_seeds;
  if (f.svg) tr["svg"] = true;
  if (!tr.contains("t_window")) tr["t_window"] = {c.t_window.lo, c.t_window.hi};
  if (!tr.contains("samples")) tr["samples"] = 400;
  if (!tr.contains("seeds")) tr["seeds"] = json::array();
  const int extra = tr.value("random_seeds", 0);
  if (extra < 0) throw BadInput("random_seeds must be >= 0");
  if (extra > 0) {
    std::mt19937_64 rng(common.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < extra; ++k) {
      Vec z(c.n);
      for (int i = 0; i < c.n; ++i) z[i] = c.domain_hint.lo[i] + (c.domain_hint.hi[i] - c.domain_hint.lo[i]) * u(rng);
      tr["seeds"].push_back(to_array(z));
    }
    tr.erase("random_seeds");
  }
  if (tr["seeds"].empty() && !tr.contains("isopycnals")) {
    tr["seeds"].push_back(to_array((c.domain_hint.lo + c.domain_hint.hi) / 2));
  }
  run.manifest()["document"] = doc;

  const Window window = window_from(tr.at("t_window"), "trace t_window");
  const int samples = tr.at("samples").get<int>();
  std::vector<Vec> seeds;
  for (const auto& s : tr.at("seeds")) seeds.push_back(to_vec(s, c.n, "seed label"));
  std::vector<std::pair<double, SeedLine>> curves;
  std::vector<double> curve_times;
  if (tr.contains("isopycnals")) {
    for (const auto& iso : tr.at("isopycnals")) {
      curves.emplace_back(iso.at("level").get<double>(), seed_line(iso, c.n));
      curve_times.push_back(iso.value("t", window.lo));
    }
  }

  run.prepare();
  std::vector<std::future<ParticlePath>> jobs;
  for (const Vec& z : seeds) {
    jobs.push_back(std::async(std::launch::async, [&c, z, window, samples] { return particle_path(c, z, window, samples); }));
  }
  std::vector<ParticlePath> paths;
  for (auto& j : jobs) paths.push_back(j.get());
  std::vector<IsopycnalCurve> isos;
  for (std::size_t k = 0; k < curves.size(); ++k) {
    isos.push_back(isopycnal_curve(c, curves[k].first, curve_times[k], curves[k].second));
  }

  json summary = json::array();
  std::vector<std::vector<Vec>> lines;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const ParticlePath& p = paths[k];
    const std::string name = numbered("path_", k);
    std::ostringstream csv;
    write_path_csv(p, csv);
    run.output(name, csv.str());
    json row = {{"file", name}, {"z0", to_array(p.z0)}, {"samples", p.samples.size()}, {"truncated", p.truncated}};
    if (p.period) row["period"] = *p.period;
    summary.push_back(row);
    if (p.truncated) {
      run.warn(err, name + ": window reaches past the candidate's validity; path truncated at t = " +
                        (p.samples.empty() ? std::string("start") : fmt(p.samples.back().t)));
    }
    std::vector<Vec> line;
    for (const auto& s : p.samples) line.push_back(s.x);
    lines.push_back(std::move(line));
  }
  for (std::size_t k = 0; k < isos.size(); ++k) {
    const std::string name = numbered("isopycnal_", k);
    std::ostringstream csv;
    write_curve_csv(isos[k], csv);
    run.output(name, csv.str());
    summary.push_back({{"file", name}, {"level", isos[k].level}, {"t", isos[k].t}, {"points", isos[k].points.size()}});
    lines.push_back(isos[k].points);
  }
  if (tr.value("svg", false)) {
    std::ostringstream svg;
    write_svg(lines, svg);
    run.output("trace.svg", svg.str());
  }
  run.manifest()["summary"] = summary;
  if (common.json_out) {
    out << summary.dump(2) << "\n";
  } else {
    for (const auto& r : summary) {
      out << r["file"].get<std::string>();
      if (r.contains("period")) out << "  period = " << fmt(r["period"].get<double>());
      if (r.contains("level")) out << "  level = " << fmt(r["level"].get<double>());
      if (r.value("truncated", false)) out << "  (truncated)";
      out << "\n";
    }
  }
  return kPass;
}

// ---- sweep --------------------------------------------------------------

struct SweepFlags {
  std::string vary;
  std::vector<double> values;
  std::vector<double> t_window;
  std::optional<double> bound_factor;
  int threads = 0;
};

int cmd_sweep(json doc, const SweepFlags& f, Run& run, const Common& common, std::ostream& out) {
  if (family_of(doc) != "M4Case1General") throw BadInput("sweep needs an M4Case1General document");
  json& sw = doc["sweep"];
  if (!sw.is_object()) sw = json::object();
  if (!f.vary.empty()) sw["vary"] = f.vary;
  if (!f.values.empty()) sw["values"] = f.values;
  if (!f.t_window.empty()) sw["t_window"] = f.t_window;
  if (f.bound_factor) sw["bound_factor"] = *f.bound_factor;
  if (!sw.contains("vary")) sw["vary"] = "delta";
  if (!sw.contains("values") || !sw["values"].is_array() || sw["values"].empty()) throw BadInput("sweep needs --values");
  if (!sw.contains("t_window")) sw["t_window"] = {0.0, 100.0};
  if (!sw.contains("bound_factor")) sw["bound_factor"] = 10.0;
  doc["params"] = family_params("M4Case1General", doc.at("params"));
  run.manifest()["document"] = doc;

  SweepOptions opts;
  opts.window = window_from(sw.at("t_window"), "sweep t_window");
  opts.bound_factor = sw.at("bound_factor").get<double>();
  opts.threads = f.threads;
  const std::string vary = sw.at("vary").get<std::string>();
  const auto values = sw.at("values").get<std::vector<double>>();
  run.prepare();
  const std::vector<SweepRow> rows = run_sweep(doc.at("params"), vary, values, opts);

  std::ostringstream csv;
  csv << "value,outcome,blowup_time,max_state,initial_state\n" << std::setprecision(17);
  json table = json::array();
  for (const auto& r : rows) {
    csv << r.value << ',' << (r.blowup_time ? "blowup" : r.bounded ? "bounded" : "unbounded") << ',';
    if (r.blowup_time) csv << *r.blowup_time;
    csv << ',' << r.max_state << ',' << r.initial_state << "\n";
    json row = {{"value", r.value}, {"outcome", r.outcome()}, {"bounded", r.bounded}, {"max_state", r.max_state}};
    row["blowup_time"] = r.blowup_time ? json(*r.blowup_time) : json(nullptr);
    table.push_back(row);
  }
  run.output("sweep.csv", csv.str());
  run.manifest()["summary"] = table;
  if (common.json_out) {
    out << table.dump(2) << "\n";
  } else {
    out << vary << "\toutcome\n";
    for (const auto& r : rows) out << fmt(r.value) << "\t" << r.outcome() << "\n";
  }
  return kPass;
}

}  // namespace

fs::path preset_dir() {
  if (const char* env = std::getenv("EBFLOW_PRESET_DIR"); env && *env) return env;
  return EBFLOW_DEFAULT_PRESET_DIR;
}

json load_preset(const std::string& name) {
  if (name.empty() || name.find('/') != std::string::npos || name.find('\\') != std::string::npos) {
    throw BadInput("invalid preset name '" + name + "'");
  }
  const fs::path path = preset_dir() / (name + ".json");
  if (!fs::exists(path)) throw BadInput("no preset '" + name + "' in " + preset_dir().string());
  return read_json(path);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Lagrangian solutions of the stratified Boussinesq equations", "ebflow"};
  app.require_subcommand(1);

  std::string section;
  bool list_json = false;
  std::string list_out;
  auto* list = app.add_subcommand("list", "List solution families");
  list->add_option("--section", section, "Only families with this group label");
  list->add_flag("--json", list_json, "Schema and defaults as JSON");
  list->add_option("--out", list_out, "Write a manifest into this directory");

  Common vc, tc, sc;
  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "Check det(d phi) and h for time independence");
  add_common(verify, vc);
  verify->add_option("--grid", vf.grid, "Label counts per axis then time count, e.g. 5x5x7");
  verify->add_option("--tol-det", vf.tol_det, "Tolerance on |d/dt det(d phi)|");
  verify->add_option("--tol-h", vf.tol_h, "Tolerance on |d/dt h|");
  verify->add_option("--tol-nondeg", vf.tol_nondeg, "Lower bound for |det(d phi)|");
  verify->add_option("--threads", vf.threads, "Worker threads (0: hardware)");

  TraceFlags tf;
  auto* trace = app.add_subcommand("trace", "Particle paths and isopycnal curves as CSV");
  add_common(trace, tc);
  trace->add_option("--seeds", tf.seeds_file, "JSON labels [[z...], ...] or {\"seeds\": ..., \"isopycnals\": ...}");
  trace->add_option("--t-window", tf.t_window, "Time window LO HI")->expected(2);
  trace->add_option("--samples", tf.samples, "Samples per path");
  trace->add_option("--random-seeds", tf.random_seeds, "Add N labels drawn uniformly from the domain with --seed");
  trace->add_flag("--svg", tf.svg, "Also write trace.svg");

  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "Bounded / blow-up table for the m=4 case 1 system");
  add_common(sweep, sc);
  sweep->add_option("--vary", sf.vary, "Initial datum to vary (delta, b11, b12, s, theta0, theta, c0)");
  sweep->add_option("--values", sf.values, "Comma-separated values")->delimiter(',');
  sweep->add_option("--t-window", sf.t_window, "Time window LO HI")->expected(2);
  sweep->add_option("--bound-factor", sf.bound_factor, "Bounded when max|state| < factor * max|initial|");
  sweep->add_option("--threads", sf.threads, "Worker threads (0: one per value)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kBadInput;
  }

  const Common* common = nullptr;
  std::string name;
  if (list->parsed()) {
    name = "list";
  } else if (verify->parsed()) {
    name = "verify";
    common = &vc;
  } else if (trace->parsed()) {
    name = "trace";
    common = &tc;
  } else {
    name = "sweep";
    common = &sc;
  }
  Run run(name, args, common);
  try {
    if (list->parsed()) {
      if (!list_out.empty()) {
        Common lc;
        lc.out_dir = list_out;
        run = Run(name, args, &lc);
      }
      run.manifest()["section"] = section;
      return run.finish(cmd_list(section, list_json, out));
    }
    json source;
    json doc = resolve_document(*common, source);
    run.manifest()["input"] = source;
    run.manifest()["document"] = doc;
    if (verify->parsed()) return run.finish(cmd_verify(std::move(doc), vf, run, vc, out));
    if (trace->parsed()) return run.finish(cmd_trace(std::move(doc), tf, run, tc, out, err));
    return run.finish(cmd_sweep(std::move(doc), sf, run, sc, out));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return run.finish(kBadInput, e.what());
  } catch (const BadInput& e) {
    err << "error: " << e.what() << "\n";
    return run.finish(kBadInput, e.what());
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return run.finish(kBadInput, e.what());
  }
}

}  // namespace ebflow

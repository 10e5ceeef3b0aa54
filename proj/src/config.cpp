#include "nullwave/config.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace nullwave {

using nlohmann::json;

ConfigError::ConfigError(std::string p, const std::string& message)
    : std::runtime_error(p + ": " + message), path(std::move(p)) {}

namespace {

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json* raw(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  Section sub(const char* key) {
    const json* v = raw(key);
    static const json empty = json::object();
    return Section(v ? *v : empty, join(path_, key));
  }

  void get(const char* key, double& out) {
    if (const json* v = raw(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
    }
  }
  void get(const char* key, int& out) {
    if (const json* v = raw(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<int>();
    }
  }
  void get(const char* key, std::uint64_t& out) {
    if (const json* v = raw(key)) {
      if (!v->is_number_unsigned()) fail(key, "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void get(const char* key, bool& out) {
    if (const json* v = raw(key)) {
      if (!v->is_boolean()) fail(key, "expected a boolean");
      out = v->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = raw(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }
  void get(const char* key, std::vector<double>& out) {
    if (const json* v = raw(key)) {
      if (!v->is_array()) fail(key, "expected an array of numbers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) fail(key, "expected an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(join(path_, key), msg);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(join(path_, k), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

AngularMode parse_angular(const std::string& s, const Section& sec) {
  if (s == "axisym") return AngularMode::Axisym;
  if (s == "spherical") return AngularMode::Spherical;
  sec.fail("mode", "expected \"axisym\" or \"spherical\"");
}

CapMode parse_cap(const std::string& s, const Section& sec) {
  if (s == "fixed") return CapMode::Fixed;
  if (s == "sqrt_delta") return CapMode::SqrtDelta;
  if (s == "none") return CapMode::None;
  sec.fail("cap_mode", "expected \"fixed\", \"sqrt_delta\" or \"none\"");
}

const char* cap_name(CapMode m) {
  switch (m) {
    case CapMode::Fixed: return "fixed";
    case CapMode::SqrtDelta: return "sqrt_delta";
    case CapMode::None: return "none";
  }
  return "?";
}

SweepMode parse_sweep_mode(const std::string& s, const Section& sec) {
  for (SweepMode m : {SweepMode::Theorem2FixedCap, SweepMode::Theorem3ShrinkingCap,
                      SweepMode::Spherical})
    if (s == sweep_mode_name(m)) return m;
  sec.fail("mode", "unknown sweep mode \"" + s + "\"");
}

const char* study_name(ConvergeStudy s) {
  switch (s) {
    case ConvergeStudy::All: return "all";
    case ConvergeStudy::Linear: return "linear";
    case ConvergeStudy::Nonlinear: return "nonlinear";
    case ConvergeStudy::U0: return "u0";
  }
  return "?";
}

ConvergeStudy parse_study(const std::string& s, const Section& sec) {
  for (ConvergeStudy m : {ConvergeStudy::All, ConvergeStudy::Linear, ConvergeStudy::Nonlinear,
                          ConvergeStudy::U0})
    if (s == study_name(m)) return m;
  sec.fail("study", "expected \"all\", \"linear\", \"nonlinear\" or \"u0\"");
}

NullFormCoeffs parse_null_form(Section sec) {
  NullFormCoeffs q;
  q.c0 = 0.0;
  sec.get("c0", q.c0);
  if (const json* c = sec.raw("c")) {
    if (!c->is_array()) sec.fail("c", "expected an array of [a, b, value]");
    for (std::size_t n = 0; n < c->size(); ++n) {
      const json& e = (*c)[n];
      const std::string where = "c[" + std::to_string(n) + "]";
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number())
        sec.fail(where, "expected [a, b, value] with integer indices");
      const int a = e[0].get<int>(), b = e[1].get<int>();
      if (a < 0 || a > 3 || b < 0 || b > 3 || a == b)
        sec.fail(where, "indices must be distinct and in 0..3");
      q.add_pair(a, b, e[2].get<double>());
    }
  }
  sec.finish();
  return q;
}

json null_form_json(const NullFormCoeffs& q) {
  json c = json::array();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (q.c(a, b) != 0.0) c.push_back({a, b, q.c(a, b)});
  return {{"c0", q.c0}, {"c", c}};
}

}  // namespace

RunConfig parse_config(const json& root) {
  RunConfig c;
  Section top(root, "");
  int version = -1;
  if (!top.has("schema_version")) throw ConfigError("schema_version", "missing");
  top.get("schema_version", version);
  if (version != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported version " + std::to_string(version));

  {
    Section g = top.sub("grid");
    std::string mode = std::string(mode_name(c.grid.mode));
    g.get("u0", c.grid.u0);
    g.get("delta", c.grid.delta);
    g.get("n_u", c.grid.n_u);
    g.get("n_ubar", c.grid.n_ubar);
    g.get("n_theta", c.grid.n_theta);
    g.get("mode", mode);
    c.grid.mode = parse_angular(mode, g);
    g.finish();
  }
  {
    Section p = top.sub("profile");
    std::string cap = cap_name(c.profile.cap_mode);
    p.get("amplitude", c.profile.amplitude);
    p.get("cap_mode", cap);
    c.profile.cap_mode = parse_cap(cap, p);
    p.get("cap_radius", c.profile.cap_radius);
    if (const json* e = p.raw("E0")) {
      if (e->is_null()) c.E0.reset();
      else if (e->is_number()) c.E0 = e->get<double>();
      else p.fail("E0", "expected a number or null");
    }
    p.finish();
  }
  if (top.has("null_form")) c.q = parse_null_form(top.sub("null_form"));
  {
    Section s = top.sub("solver");
    s.get("corrector_iterations", c.solver.corrector_iterations);
    s.get("corrector_tol", c.solver.corrector_tol);
    s.get("blowup_threshold", c.solver.blowup_threshold);
    s.get("min_ubar_cells_per_delta", c.solver.min_ubar_cells_per_delta);
    s.get("enforce_resolution", c.solver.enforce_resolution);
    s.finish();
  }
  {
    Section e = top.sub("experiment");
    SweepPlan& p = c.sweep;
    std::string mode = sweep_mode_name(p.mode);
    e.get("mode", mode);
    p.mode = parse_sweep_mode(mode, e);
    e.get("deltas", p.deltas);
    e.get("u0", p.u0);
    e.get("E0", p.E0);
    e.get("fixed_cap_radius", p.fixed_cap_radius);
    e.get("n_ubar", p.n_ubar);
    e.get("n_u_per_unit", p.n_u_per_unit);
    e.get("n_theta_min", p.n_theta_min);
    e.get("theta_nodes_per_cap", p.theta_nodes_per_cap);
    e.get("tube_margin", p.tube_margin);
    e.get("report_rows", p.report_rows);
    {
      Section u = e.sub("u0_study");
      u.get("u0_list", c.u0.u0_list);
      u.get("delta", c.u0.delta);
      u.get("calibration_u0", c.u0.calibration_u0);
      u.finish();
    }
    {
      Section v = e.sub("convergence");
      GridConvergencePlan& g = c.convergence;
      std::string study = study_name(c.converge_study);
      v.get("study", study);
      c.converge_study = parse_study(study, v);
      v.get("u0", g.u0);
      v.get("delta", g.delta);
      v.get("n_u", g.n_u);
      v.get("n_ubar", g.n_ubar);
      v.get("n_theta", g.n_theta);
      v.get("levels", g.levels);
      v.get("oracle_levels", g.oracle_levels);
      v.get("oracle_delta", g.oracle_delta);
      v.get("oracle_n_u", g.oracle_n_u);
      v.get("oracle_n_ubar", g.oracle_n_ubar);
      v.get("oracle_n_theta", g.oracle_n_theta);
      v.get("oracle_amplitude", g.oracle_amplitude);
      v.get("cap_radius", g.cap_radius);
      v.get("E0", g.E0);
      v.get("zero_data", g.zero_data);
      v.finish();
    }
    e.finish();
  }
  top.get("output_dir", c.output_dir);
  top.get("worker_count", c.worker_count);
  top.get("rng_seed", c.rng_seed);
  top.finish();

  c.sweep.q = c.convergence.q = c.q;
  c.sweep.solver = c.convergence.solver = c.solver;
  c.sweep.workers = c.convergence.workers = c.worker_count;
  c.u0.base = c.sweep;
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate(const RunConfig& c) {
  if (c.worker_count < 1) throw ConfigError("worker_count", "must be >= 1");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  try {
    c.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("solver", e.what());
  }
  std::optional<DoubleNullGrid> g;
  try {
    g.emplace(c.grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid", e.what());
  }
  if (!NullFormSpec::admissible(c.q, c.grid.mode))
    throw ConfigError("null_form", "null form not admissible in " +
                                       std::string(mode_name(c.grid.mode)) + " mode");
  if (c.solver.enforce_resolution && c.grid.n_ubar < c.solver.min_ubar_cells_per_delta)
    throw ConfigError("grid.n_ubar", "resolution rule requires n_ubar >= " +
                                         std::to_string(c.solver.min_ubar_cells_per_delta));
  if (c.grid.mode == AngularMode::Spherical && c.profile.cap_mode != CapMode::None)
    throw ConfigError("profile.cap_mode", "an angular cap requires axisym mode");
  if (c.grid.mode == AngularMode::Axisym && c.profile.cap_mode != CapMode::None) {
    const double cap = c.profile.cap_radius_at(c.grid.delta);
    if (!(cap > 0.0 && cap <= std::numbers::pi))
      throw ConfigError("profile.cap_radius", "must lie in (0, pi]");
    if (cap / g->dtheta() < 8.0)
      throw ConfigError("profile.cap_radius", "cap spans fewer than 8 theta nodes");
  }
  if (!(c.profile.amplitude >= 0.0)) throw ConfigError("profile.amplitude", "must be >= 0");
  if (c.E0 && !(*c.E0 > 0.0)) throw ConfigError("profile.E0", "must be positive");
  try {
    c.sweep.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("experiment", e.what());
  }
  if (c.u0.u0_list.size() < 2) throw ConfigError("experiment.u0_study.u0_list", "needs >= 2 entries");
  for (double u : c.u0.u0_list)
    if (!(u < -1.0)) throw ConfigError("experiment.u0_study.u0_list", "entries must be < -1");
  if (!(c.u0.delta > 0.0 && c.u0.delta < 1.0))
    throw ConfigError("experiment.u0_study.delta", "must lie in (0, 1)");
  const GridConvergencePlan& v = c.convergence;
  if (v.levels < 3 || v.oracle_levels < 3 || v.levels > 6 || v.oracle_levels > 6)
    throw ConfigError("experiment.convergence.levels", "levels must be in 3..6");
  if (v.n_ubar < c.solver.min_ubar_cells_per_delta && c.solver.enforce_resolution)
    throw ConfigError("experiment.convergence.n_ubar", "violates the resolution rule");
  if (!NullFormSpec::admissible(c.q, AngularMode::Axisym))
    throw ConfigError("null_form", "null form not admissible in axisym mode");
}

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["grid"] = {{"u0", c.grid.u0},         {"delta", c.grid.delta},
               {"n_u", c.grid.n_u},       {"n_ubar", c.grid.n_ubar},
               {"n_theta", c.grid.n_theta}, {"mode", std::string(mode_name(c.grid.mode))}};
  j["profile"] = {{"amplitude", c.profile.amplitude},
                  {"cap_mode", cap_name(c.profile.cap_mode)},
                  {"cap_radius", c.profile.cap_radius},
                  {"E0", c.E0 ? json(*c.E0) : json(nullptr)}};
  j["null_form"] = null_form_json(c.q);
  j["solver"] = {{"corrector_iterations", c.solver.corrector_iterations},
                 {"corrector_tol", c.solver.corrector_tol},
                 {"blowup_threshold", c.solver.blowup_threshold},
                 {"min_ubar_cells_per_delta", c.solver.min_ubar_cells_per_delta},
                 {"enforce_resolution", c.solver.enforce_resolution}};
  const SweepPlan& p = c.sweep;
  const GridConvergencePlan& v = c.convergence;
  j["experiment"] = {
      {"mode", sweep_mode_name(p.mode)},
      {"deltas", p.deltas},
      {"u0", p.u0},
      {"E0", p.E0},
      {"fixed_cap_radius", p.fixed_cap_radius},
      {"n_ubar", p.n_ubar},
      {"n_u_per_unit", p.n_u_per_unit},
      {"n_theta_min", p.n_theta_min},
      {"theta_nodes_per_cap", p.theta_nodes_per_cap},
      {"tube_margin", p.tube_margin},
      {"report_rows", p.report_rows},
      {"u0_study",
       {{"u0_list", c.u0.u0_list}, {"delta", c.u0.delta}, {"calibration_u0", c.u0.calibration_u0}}},
      {"convergence",
       {{"study", study_name(c.converge_study)},
        {"u0", v.u0},
        {"delta", v.delta},
        {"n_u", v.n_u},
        {"n_ubar", v.n_ubar},
        {"n_theta", v.n_theta},
        {"levels", v.levels},
        {"oracle_levels", v.oracle_levels},
        {"oracle_delta", v.oracle_delta},
        {"oracle_n_u", v.oracle_n_u},
        {"oracle_n_ubar", v.oracle_n_ubar},
        {"oracle_n_theta", v.oracle_n_theta},
        {"oracle_amplitude", v.oracle_amplitude},
        {"cap_radius", v.cap_radius},
        {"E0", v.E0},
        {"zero_data", v.zero_data}}}};
  j["output_dir"] = c.output_dir;
  j["worker_count"] = c.worker_count;
  j["rng_seed"] = c.rng_seed;
  return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  j.erase("output_dir");
  j.erase("worker_count");
  return hex64(fnv1a64(j.dump()));
}

}  // namespace nullwave

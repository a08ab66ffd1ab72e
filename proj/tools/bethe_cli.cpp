#include "bethe_cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bethe/contour.hpp"
#include "bethe/gibbs.hpp"
#include "bethe/json_io.hpp"
#include "bethe/mc.hpp"
#include "bethe/rng.hpp"
#include "bethe/version.hpp"

namespace bethe::cli {

namespace {

using nlohmann::json;

std::size_t vertex_cap() {
  if (const char* env = std::getenv("BETHE_GIBBS_MAX_VERTICES")) {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(env, &end, 10);
    if (end == env || cap == 0)
      throw std::invalid_argument("BETHE_GIBBS_MAX_VERTICES must be a positive integer");
    return static_cast<std::size_t>(cap);
  }
  return kDefaultVertexCap;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

json provenance(const std::string& command, json params) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"command", command},
              {"rng", kRngId},
              {"params", std::move(params)}};
}

std::string address_label(const Tree& t, VertexId v) {
  std::string s = "r";
  for (int idx : t.address(v)) s += "." + std::to_string(idx);
  return s;
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "+1") return +1;
  if (s == "-" || s == "-1") return -1;
  throw std::invalid_argument("sign must be + or -");
}

EdgeSet load_dset(const std::string& path) { return edge_set_from_json(read_file(path), nullptr, vertex_cap()); }

// ---- generation -----------------------------------------------------------

EdgeSet generate(const std::string& kind, int k, int depth, std::uint64_t seed, int d_cap,
                 double density, const std::optional<std::string>& primary_path, long edge_index) {
  auto tree = build_ball({k, depth}, vertex_cap());
  if (kind == "empty") return EdgeSet::empty(tree);
  if (kind == "single") {
    if (edge_index < 0 || static_cast<std::size_t>(edge_index) >= tree->edge_count())
      throw std::invalid_argument("--edge out of range");
    return EdgeSet::single_bond(tree, static_cast<EdgeId>(edge_index));
  }
  if (kind == "dimer") return gen_dimer_cover(tree, seed);
  if (kind == "secondary") {
    const EdgeSet primary = primary_path
                                ? edge_set_from_json(read_file(*primary_path), tree, vertex_cap())
                                : gen_dimer_cover(tree, seed);
    return gen_secondary_dimer(tree, primary, seed);
  }
  if (kind == "monomer-dimer") return gen_monomer_dimer(tree, seed);
  if (kind == "path") return gen_path_cover(tree, seed);
  if (kind == "random") return gen_random_sparse(tree, d_cap, density, seed);
  throw std::invalid_argument("unknown kind '" + kind + "'");
}

void warn_admissibility(const EdgeSet& d, std::ostream& err) {
  if (!admissible(d.d_max(), d.tree().k()))
    err << "warning: d_max=" << d.d_max() << " is not admissible for k=" << d.tree().k()
        << " (needs 2*d_max < k-1)\n";
}

// ---- per-command payload builders ------------------------------------------

json ground_state_json(const GroundStateReport& r, const Tree& t) {
  json argmin = json::array();
  for (VertexId v : r.argmin) argmin.push_back(address_label(t, v));
  return json{{"admissible", r.admissible_d}, {"allPositive", r.all_positive},
              {"minExcessUnits", r.min_units}, {"minExcess", r.min_excess},
              {"argmin", std::move(argmin)},  {"setsEnumerated", r.sets_enumerated},
              {"mMax", r.m_max}};
}

json peierls_json(const PeierlsReport& r, const Tree& t) {
  json tightest = json::array();
  for (VertexId v : r.tightest) tightest.push_back(address_label(t, v));
  return json{{"admissible", r.admissible_d},
              {"degenerateBound", r.degenerate},
              {"boundUnitsPerSite", r.bound_units_per_site},
              {"holds", r.holds},
              {"minSlackUnits", r.min_slack_units},
              {"tightest", std::move(tightest)},
              {"contoursEnumerated", r.contours_enumerated},
              {"mMax", r.m_max}};
}

json induction_json(const InductionStepReport& r) {
  return json{{"samples", r.samples},
              {"checks", r.checks},
              {"allPass", r.all_pass},
              {"minDropUnits", r.min_drop_units},
              {"requiredDropUnits", r.required_drop_units},
              {"failures", r.failures}};
}

json marginal_json(const EdgeSet& d, int sign, const GibbsParams& p) {
  const auto mag = exact_marginals(d, sign, p);
  const auto agree = agreement_profile(d, sign, p);
  return json{{"depth", p.depth},
              {"order", "breadth-first"},
              {"magnetization", mag},
              {"agreement", agree},
              {"logPartition", log_partition(d, sign, p)},
              {"relativeEnergy", p.relative_energy}};
}

json scan_json(const EdgeSet& d, int sign, double beta, double j, const std::vector<int>& depths) {
  const auto rows = depth_scan(d, sign, beta, j, depths);
  json table = json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i >= 2 &&
        std::abs(rows[i].diff_from_previous) > std::abs(rows[i - 1].diff_from_previous))
      monotone = false;
    table.push_back(json{{"depth", rows[i].depth},
                         {"rootMagnetization", rows[i].root_magnetization},
                         {"rootAgreement", rows[i].root_agreement},
                         {"diff", rows[i].diff_from_previous}});
  }
  return json{{"rows", std::move(table)},
              {"monotoneDecay", monotone},
              {"converged1e6", !rows.empty() && std::abs(rows.back().diff_from_previous) < 1e-6},
              {"note", "finite-volume diagnostic, not an extremality verdict"}};
}

json stability_json(const EdgeSet& d, double j, double e_cap, int m_max) {
  const Tree& t = d.tree();
  std::map<std::string, json> groups;
  long long global_max = 0;
  bool truncated = false;
  const std::size_t deep = t.count_up_to(t.depth() - m_max);
  for (VertexId v = 0; v < deep; ++v) {
    const auto got = stability_count(d, {j}, v, e_cap, m_max);
    truncated = truncated || got.truncated;
    global_max = std::max(global_max, got.count);
    const std::string key = local_pattern_key(d, v, m_max);
    auto it = groups.find(key);
    if (it == groups.end()) {
      groups.emplace(key, json{{"count", got.count}, {"vertices", 1}, {"uniform", true}});
    } else {
      it->second["vertices"] = it->second["vertices"].get<int>() + 1;
      if (it->second["count"].get<long long>() != got.count) it->second["uniform"] = false;
    }
  }
  bool uniform = true;
  json out_groups = json::array();
  for (auto& [key, g] : groups) {
    uniform = uniform && g["uniform"].get<bool>();
    g["patternKey"] = key;
    out_groups.push_back(std::move(g));
  }
  return json{{"eCap", e_cap},          {"mMax", m_max},
              {"vertices", deep},       {"groups", std::move(out_groups)},
              {"uniformWithinPattern", uniform}, {"maxCount", global_max},
              {"truncated", truncated}};
}

json census_json(int k, int depth, int n) {
  auto tree = build_ball({k, depth}, vertex_cap());
  if (tree->boundary_distance(Tree::root()) < n)
    throw std::invalid_argument("depth too small for the requested subgraph size");
  json rows = json::array();
  std::uint64_t root_count = 0;
  bool independent = true;
  std::vector<VertexId> bases{Tree::root()};
  if (depth >= 1) bases.push_back(tree->first_child(Tree::root()));
  if (depth >= 2) bases.push_back(tree->first_child(bases.back()));
  for (VertexId v : bases) {
    if (tree->boundary_distance(v) < n) continue;
    const std::uint64_t count = count_connected_edge_subgraphs(*tree, v, n);
    if (v == Tree::root()) root_count = count;
    independent = independent && count == root_count;
    rows.push_back(json{{"vertex", address_label(*tree, v)}, {"count", count}});
  }
  const std::uint64_t bound = subgraph_count_bound(k, n);
  return json{{"k", k},       {"depth", depth},
              {"n", n},       {"counts", std::move(rows)},
              {"bound", bound}, {"withinBound", root_count <= bound},
              {"independentOfVertex", independent}};
}

std::string render_dot(const SpinConfig& sigma, const EdgeSet& d, const EdgeSet* highlight) {
  const Tree& t = sigma.tree();
  std::ostringstream dot;
  dot << "graph spins {\n"
      << "  layout=twopi;\n"
      << "  node [shape=circle, style=filled, width=0.18, label=\"\"];\n";
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    dot << "  \"" << address_label(t, v) << "\" [fillcolor="
        << (sigma.spin(v) == 1 ? "red" : "black") << "];\n";
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    dot << "  \"" << address_label(t, t.edge_parent(e)) << "\" -- \""
        << address_label(t, t.edge_child(e)) << "\"";
    if (highlight != nullptr && highlight->contains(e))
      dot << " [color=green, penwidth=2.5]";
    else if (d.contains(e))
      dot << " [color=blue, penwidth=2.5]";
    else
      dot << " [color=gray]";
    dot << ";\n";
  }
  dot << "}\n";
  return dot.str();
}

std::vector<int> parse_depth_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("--depths must list at least one radius");
  return out;
}

// ---- experiment runner -----------------------------------------------------

struct Experiment {
  json spec;
  std::string spec_hash;
  std::filesystem::path out_dir;
};

json run_task(const json& task, const std::map<std::string, EdgeSet>& dsets, std::ostream& err) {
  const std::string op = task.at("op").get<std::string>();
  const auto dset_of = [&](const char* field) -> const EdgeSet& {
    const std::string id = task.at(field).get<std::string>();
    const auto it = dsets.find(id);
    if (it == dsets.end()) throw std::invalid_argument("unknown dset id '" + id + "'");
    return it->second;
  };
  const auto gibbs_params = [&](const EdgeSet& d) {
    return GibbsParams{task.value("beta", 1.0), task.value("j", 1.0),
                       task.value("depth", d.tree().depth() - 1),
                       task.value("relative", false)};
  };

  if (op == "gen") {
    const EdgeSet& d = dset_of("dset");
    return json::parse(edge_set_to_json(d));
  }
  if (op == "ground") {
    const EdgeSet& d = dset_of("dset");
    return json::parse(spin_config_to_json(build_sigma(d, parse_sign(task.value("sign", "+")))));
  }
  if (op == "verify-gs") {
    const EdgeSet& d = dset_of("dset");
    return ground_state_json(verify_ground_state(d, {task.value("j", 1.0)},
                                                 task.value("m_max", 3)),
                             d.tree());
  }
  if (op == "stability") {
    const EdgeSet& d = dset_of("dset");
    return stability_json(d, task.value("j", 1.0), task.at("e_cap").get<double>(),
                          task.value("m_max", 3));
  }
  if (op == "peierls") {
    const EdgeSet& d = dset_of("dset");
    json out = peierls_json(verify_peierls(d, {task.value("j", 1.0)}, task.value("m_max", 3)),
                            d.tree());
    if (task.contains("induction_samples"))
      out["induction"] = induction_json(induction_step_check(
          d, {task.value("j", 1.0)}, task.at("induction_samples").get<int>(),
          task.value("seed", std::uint64_t{1})));
    return out;
  }
  if (op == "census") {
    return census_json(task.at("k").get<int>(), task.at("depth").get<int>(),
                       task.at("n").get<int>());
  }
  if (op == "marginals") {
    const EdgeSet& d = dset_of("dset");
    warn_admissibility(d, err);
    return marginal_json(d, parse_sign(task.value("sign", "+")), gibbs_params(d));
  }
  if (op == "freeenergy") {
    const EdgeSet& d = dset_of("dset");
    const auto p = gibbs_params(d);
    return json{{"f", free_energy_density(d, parse_sign(task.value("sign", "+")), p)},
                {"depth", p.depth},
                {"volume", d.tree().count_up_to(p.depth)}};
  }
  if (op == "scan") {
    const EdgeSet& d = dset_of("dset");
    std::vector<int> depths;
    if (task.contains("depths"))
      depths = task.at("depths").get<std::vector<int>>();
    else
      for (int r = 1; r < d.tree().depth(); ++r) depths.push_back(r);
    return scan_json(d, parse_sign(task.value("sign", "+")), task.value("beta", 1.0),
                     task.value("j", 1.0), depths);
  }
  if (op == "mc") {
    const EdgeSet& d = dset_of("dset");
    McConfig mc;
    mc.sweeps = task.value("sweeps", std::int64_t{1000});
    mc.burn_in = task.value("burn_in", std::int64_t{100});
    mc.seed = task.value("seed", std::uint64_t{1});
    mc.thinning = task.value("thinning", std::int64_t{1});
    if (task.value("dynamics", "glauber") == std::string("metropolis"))
      mc.dynamics = Dynamics::kMetropolis;
    const auto est = sample(d, parse_sign(task.value("sign", "+")), gibbs_params(d), mc);
    return json{{"depth", est.depth},
                {"samples", est.samples},
                {"magnetization", est.magnetization},
                {"stdError", est.std_error},
                {"rng", est.rng_id}};
  }
  if (op == "render") {
    const EdgeSet& d = dset_of("dset");
    const EdgeSet* highlight = nullptr;
    std::optional<EdgeSet> hl;
    if (task.contains("highlight")) {
      hl.emplace(dsets.at(task.at("highlight").get<std::string>()));
      highlight = &*hl;
    }
    return json{{"dot", render_dot(build_sigma(d, parse_sign(task.value("sign", "+"))), d,
                                   highlight)}};
  }
  throw std::invalid_argument("unknown op '" + op + "'");
}

int cmd_run(const std::string& spec_path, std::string out_dir_flag, std::ostream& out,
            std::ostream& err) {
  const std::string raw = read_file(spec_path);
  json spec = json::parse(raw, nullptr, false);
  if (spec.is_discarded()) throw std::invalid_argument("experiment spec: malformed JSON");

  // validation pass before any work
  static const std::set<std::string> known_ops{"gen",       "ground", "verify-gs", "stability",
                                               "peierls",   "census", "marginals", "freeenergy",
                                               "scan",      "mc",     "render"};
  if (!spec.contains("tasks") || !spec["tasks"].is_array())
    throw std::invalid_argument("experiment spec: missing 'tasks' array");
  for (const auto& task : spec["tasks"]) {
    const std::string op = task.at("op").get<std::string>();
    if (!known_ops.count(op))
      throw std::invalid_argument("experiment spec: unknown op '" + op + "' in tasks");
  }
  std::map<std::string, EdgeSet> dsets;
  if (spec.contains("dsets")) {
    const int k = spec.at("tree").at("k").get<int>();
    const int depth = spec.at("tree").at("depth").get<int>();
    auto tree = build_ball({k, depth}, vertex_cap());
    for (const auto& entry : spec["dsets"]) {
      const std::string id = entry.at("id").get<std::string>();
      const std::string kind = entry.at("kind").get<std::string>();
      const auto seed = entry.value("seed", std::uint64_t{1});
      EdgeSet d = [&]() {
        if (kind == "empty") return EdgeSet::empty(tree);
        if (kind == "dimer") return gen_dimer_cover(tree, seed);
        if (kind == "secondary-dimer" || kind == "secondary") {
          const std::string primary = entry.at("primary").get<std::string>();
          const auto it = dsets.find(primary);
          if (it == dsets.end())
            throw std::invalid_argument("dset '" + id + "': unknown primary '" + primary + "'");
          return gen_secondary_dimer(tree, it->second, seed);
        }
        if (kind == "monomer-dimer") return gen_monomer_dimer(tree, seed);
        if (kind == "path" || kind == "path-cover") return gen_path_cover(tree, seed);
        if (kind == "random" || kind == "random-sparse")
          return gen_random_sparse(tree, entry.value("d_cap", 1), entry.value("density", 0.3),
                                   seed);
        throw std::invalid_argument("dset '" + id + "': unknown kind '" + kind + "'");
      }();
      warn_admissibility(d, err);
      dsets.emplace(id, std::move(d));
    }
  }

  Experiment exp;
  exp.spec = spec;
  exp.spec_hash = fnv1a64_hex(raw);
  exp.out_dir = out_dir_flag.empty() ? spec.value("output_dir", std::string("out"))
                                     : out_dir_flag;
  std::filesystem::create_directories(exp.out_dir);

  json manifest{{"name", spec.value("name", "experiment")},
                {"tool", kToolName},
                {"version", kToolVersion},
                {"specHash", exp.spec_hash},
                {"entries", json::array()}};
  bool any_failed = false;
  std::size_t index = 0;
  for (const auto& task : spec["tasks"]) {
    const std::string op = task.at("op").get<std::string>();
    char name[64];
    std::snprintf(name, sizeof name, "%02zu_%s.json", index, op.c_str());
    json entry{{"index", index}, {"op", op}, {"file", name}};
    try {
      json payload = run_task(task, dsets, err);
      payload["provenance"] = provenance(op, task);
      payload["specHash"] = exp.spec_hash;
      const std::string text = payload.dump(2) + "\n";
      std::ofstream f(exp.out_dir / name, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write output file");
      f << text;
      entry["fnv1a64"] = fnv1a64_hex(text);
      entry["ok"] = true;
    } catch (const std::exception& e) {
      entry["ok"] = false;
      entry["error"] = e.what();
      any_failed = true;
    }
    manifest["entries"].push_back(std::move(entry));
    ++index;
  }
  const std::string manifest_text = manifest.dump(2) + "\n";
  std::ofstream mf(exp.out_dir / "manifest.json", std::ios::binary);
  mf << manifest_text;
  out << manifest_text;
  return any_failed ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite-ball Ising experiments on regular trees"};
  app.require_subcommand(1);

  // ---- gen
  auto* gen = app.add_subcommand("gen", "generate an edge set");
  std::string gen_kind, gen_out;
  int gen_k = 4, gen_depth = 4, gen_dcap = 1;
  long gen_edge = 0;
  double gen_density = 0.3;
  std::uint64_t gen_seed = 1;
  std::optional<std::string> gen_primary;
  gen->add_option("--kind", gen_kind,
                  "empty|single|dimer|secondary|monomer-dimer|path|random")->required();
  gen->add_option("--k", gen_k)->required();
  gen->add_option("--depth", gen_depth)->required();
  gen->add_option("--seed", gen_seed);
  gen->add_option("--d-cap", gen_dcap);
  gen->add_option("--density", gen_density);
  gen->add_option("--edge", gen_edge);
  gen->add_option("--primary", gen_primary, "primary dimer cover file (kind=secondary)");
  gen->add_option("-o,--output", gen_out);

  // ---- ground
  auto* ground = app.add_subcommand("ground", "build the reference configuration");
  std::string ground_dset, ground_sign = "+", ground_out;
  ground->add_option("--dset", ground_dset)->required();
  ground->add_option("--sign", ground_sign);
  ground->add_option("-o,--output", ground_out);

  // ---- verify-gs
  auto* vgs = app.add_subcommand("verify-gs", "exhaustive excitation positivity check");
  std::string vgs_dset, vgs_out;
  int vgs_mmax = 3;
  double vgs_j = 1.0;
  vgs->add_option("--dset", vgs_dset)->required();
  vgs->add_option("--mmax", vgs_mmax);
  vgs->add_option("--j", vgs_j);
  vgs->add_option("-o,--output", vgs_out);

  // ---- stability
  auto* stab = app.add_subcommand("stability", "low-energy excitation counts per vertex");
  std::string stab_dset, stab_out;
  double stab_ecap = 1.0, stab_j = 1.0;
  int stab_mmax = 3;
  stab->add_option("--dset", stab_dset)->required();
  stab->add_option("--ecap", stab_ecap)->required();
  stab->add_option("--mmax", stab_mmax);
  stab->add_option("--j", stab_j);
  stab->add_option("-o,--output", stab_out);

  // ---- peierls
  auto* pei = app.add_subcommand("peierls", "contour energy bound check");
  std::string pei_dset, pei_out;
  int pei_mmax = 3, pei_induction = 0;
  double pei_j = 1.0;
  std::uint64_t pei_seed = 1;
  pei->add_option("--dset", pei_dset)->required();
  pei->add_option("--mmax", pei_mmax);
  pei->add_option("--j", pei_j);
  pei->add_option("--induction-samples", pei_induction,
                  "also run the per-site removal check on seeded contours");
  pei->add_option("--seed", pei_seed);
  pei->add_option("-o,--output", pei_out);

  // ---- census
  auto* cen = app.add_subcommand("census", "connected edge-subgraph counts");
  int cen_k = 2, cen_depth = 6, cen_n = 2;
  std::string cen_out;
  cen->add_option("--k", cen_k)->required();
  cen->add_option("--depth", cen_depth)->required();
  cen->add_option("--n", cen_n)->required();
  cen->add_option("-o,--output", cen_out);

  // ---- contours
  auto* con = app.add_subcommand("contours", "extract contours of a configuration");
  std::string con_config, con_dset, con_sign = "+", con_out;
  con->add_option("--config", con_config)->required();
  con->add_option("--dset", con_dset)->required();
  con->add_option("--sign", con_sign);
  con->add_option("-o,--output", con_out);

  // ---- marginals
  auto* mar = app.add_subcommand("marginals", "exact single-site marginals");
  std::string mar_dset, mar_sign = "+", mar_out;
  double mar_beta = 1.0, mar_j = 1.0;
  int mar_depth = -1;
  bool mar_relative = false, mar_free = false;
  mar->add_option("--dset", mar_dset)->required();
  mar->add_option("--sign", mar_sign);
  mar->add_option("--beta", mar_beta)->required();
  mar->add_option("--j", mar_j);
  mar->add_option("--depth", mar_depth);
  mar->add_flag("--relative", mar_relative);
  mar->add_flag("--free", mar_free, "free boundary instead of the clamped reference");
  mar->add_option("-o,--output", mar_out);

  // ---- freeenergy
  auto* fre = app.add_subcommand("freeenergy", "per-vertex free energy at matched depth");
  std::string fre_dset, fre_sign = "+", fre_out;
  double fre_beta = 1.0, fre_j = 1.0;
  int fre_depth = -1;
  fre->add_option("--dset", fre_dset)->required();
  fre->add_option("--sign", fre_sign);
  fre->add_option("--beta", fre_beta)->required();
  fre->add_option("--j", fre_j);
  fre->add_option("--depth", fre_depth);
  fre->add_option("-o,--output", fre_out);

  // ---- scan
  auto* scn = app.add_subcommand("scan", "root marginal vs analysis radius");
  std::string scn_dset, scn_sign = "+", scn_depths, scn_out;
  double scn_beta = 1.0, scn_j = 1.0;
  scn->add_option("--dset", scn_dset)->required();
  scn->add_option("--sign", scn_sign);
  scn->add_option("--beta", scn_beta)->required();
  scn->add_option("--j", scn_j);
  scn->add_option("--depths", scn_depths, "comma-separated radii (default 1..depth-1)");
  scn->add_option("-o,--output", scn_out);

  // ---- mc
  auto* mcc = app.add_subcommand("mc", "seeded single-site dynamics sampler");
  std::string mc_dset, mc_sign = "+", mc_dyn = "glauber", mc_out;
  double mc_beta = 1.0, mc_j = 1.0;
  int mc_depth = -1;
  std::int64_t mc_sweeps = 1000, mc_burn = 100, mc_thin = 1;
  std::uint64_t mc_seed = 1;
  bool mc_trace = false;
  mcc->add_option("--dset", mc_dset)->required();
  mcc->add_option("--sign", mc_sign);
  mcc->add_option("--beta", mc_beta)->required();
  mcc->add_option("--j", mc_j);
  mcc->add_option("--depth", mc_depth);
  mcc->add_option("--sweeps", mc_sweeps);
  mcc->add_option("--burn-in", mc_burn);
  mcc->add_option("--thinning", mc_thin);
  mcc->add_option("--seed", mc_seed)->required();
  mcc->add_option("--dynamics", mc_dyn, "glauber|metropolis");
  mcc->add_flag("--trace", mc_trace, "include the energy trace");
  mcc->add_option("-o,--output", mc_out);

  // ---- render
  auto* ren = app.add_subcommand("render", "emit a DOT figure of spins and bonds");
  std::string ren_dset, ren_sign = "+", ren_out;
  std::optional<std::string> ren_highlight, ren_config;
  ren->add_option("--dset", ren_dset)->required();
  ren->add_option("--sign", ren_sign);
  ren->add_option("--config", ren_config, "spin configuration file (default: the reference)");
  ren->add_option("--highlight", ren_highlight, "second edge set drawn in green");
  ren->add_option("-o,--output", ren_out);

  // ---- run
  auto* run_cmd = app.add_subcommand("run", "execute an experiment spec");
  std::string run_spec, run_out;
  run_cmd->add_option("spec", run_spec, "experiment spec JSON")->required();
  run_cmd->add_option("-o,--outdir", run_out);

  std::vector<const char*> argv{"bethe-gibbs"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto emit = [&](const json& payload, const std::string& path) {
      write_output(path, payload.dump(2) + "\n", out);
    };

    if (gen->parsed()) {
      const EdgeSet d = generate(gen_kind, gen_k, gen_depth, gen_seed, gen_dcap, gen_density,
                                 gen_primary, gen_edge);
      warn_admissibility(d, err);
      write_output(gen_out, edge_set_to_json(d), out);
      return 0;
    }
    if (ground->parsed()) {
      const EdgeSet d = load_dset(ground_dset);
      write_output(ground_out, spin_config_to_json(build_sigma(d, parse_sign(ground_sign))),
                   out);
      return 0;
    }
    if (vgs->parsed()) {
      const EdgeSet d = load_dset(vgs_dset);
      const auto report = verify_ground_state(d, {vgs_j}, vgs_mmax);
      json payload = ground_state_json(report, d.tree());
      payload["provenance"] = provenance("verify-gs", json{{"dset", vgs_dset},
                                                           {"mmax", vgs_mmax},
                                                           {"j", vgs_j}});
      emit(payload, vgs_out);
      return report.all_positive ? 0 : 1;
    }
    if (stab->parsed()) {
      const EdgeSet d = load_dset(stab_dset);
      json payload = stability_json(d, stab_j, stab_ecap, stab_mmax);
      payload["provenance"] = provenance("stability", json{{"dset", stab_dset},
                                                           {"ecap", stab_ecap},
                                                           {"mmax", stab_mmax},
                                                           {"j", stab_j}});
      emit(payload, stab_out);
      return 0;
    }
    if (pei->parsed()) {
      const EdgeSet d = load_dset(pei_dset);
      const auto report = verify_peierls(d, {pei_j}, pei_mmax);
      json payload = peierls_json(report, d.tree());
      bool ok = report.holds;
      if (pei_induction > 0) {
        const auto ind = induction_step_check(d, {pei_j}, pei_induction, pei_seed);
        payload["induction"] = induction_json(ind);
        ok = ok && ind.all_pass;
      }
      payload["provenance"] = provenance("peierls", json{{"dset", pei_dset},
                                                         {"mmax", pei_mmax},
                                                         {"j", pei_j},
                                                         {"inductionSamples", pei_induction},
                                                         {"seed", pei_seed}});
      emit(payload, pei_out);
      return ok ? 0 : 1;
    }
    if (cen->parsed()) {
      json payload = census_json(cen_k, cen_depth, cen_n);
      payload["provenance"] =
          provenance("census", json{{"k", cen_k}, {"depth", cen_depth}, {"n", cen_n}});
      emit(payload, cen_out);
      return payload["withinBound"].get<bool>() ? 0 : 1;
    }
    if (con->parsed()) {
      const EdgeSet d = load_dset(con_dset);
      const SpinConfig sigma = spin_config_from_json(read_file(con_config), d.tree_ptr());
      const auto contours = extract_contours(sigma, build_sigma(d, parse_sign(con_sign)));
      json list = json::array();
      for (const auto& g : contours) {
        json interior = json::array(), boundary = json::array();
        for (VertexId v : g.interior) interior.push_back(d.tree().address(v));
        for (VertexId v : g.external_boundary) boundary.push_back(d.tree().address(v));
        list.push_back(json{{"interior", std::move(interior)},
                            {"externalBoundary", std::move(boundary)},
                            {"excessUnits", set_flip_units(d, g.interior)}});
      }
      json payload{{"contours", std::move(list)},
                   {"provenance", provenance("contours", json{{"dset", con_dset},
                                                              {"config", con_config},
                                                              {"sign", con_sign}})}};
      emit(payload, con_out);
      return 0;
    }
    if (mar->parsed()) {
      const EdgeSet d = load_dset(mar_dset);
      const int depth = mar_depth > 0 ? mar_depth : d.tree().depth() - 1;
      const GibbsParams p{mar_beta, mar_j, depth, mar_relative};
      json payload;
      if (mar_free) {
        const auto mag = free_state_marginals(d.tree(), p);
        payload = json{{"depth", depth},
                       {"order", "breadth-first"},
                       {"magnetization", mag},
                       {"free", true}};
        // exploratory context: root pair correlations under mu0 vs the
        // clamped reference state, out to a few generations
        json pairs = json::array();
        VertexId x = Tree::root();
        for (int g = 1; g <= std::min(3, depth); ++g) {
          x = d.tree().first_child(x);
          pairs.push_back(json{{"distance", g},
                               {"free", free_root_pair_correlation(d.tree(), p, x)},
                               {"clamped", root_pair_correlation(d, +1, p, x)}});
        }
        payload["rootPairCorrelation"] = std::move(pairs);
      } else {
        warn_admissibility(d, err);
        payload = marginal_json(d, parse_sign(mar_sign), p);
      }
      payload["provenance"] = provenance("marginals", json{{"dset", mar_dset},
                                                           {"sign", mar_sign},
                                                           {"beta", mar_beta},
                                                           {"j", mar_j},
                                                           {"depth", depth},
                                                           {"relative", mar_relative},
                                                           {"free", mar_free}});
      emit(payload, mar_out);
      return 0;
    }
    if (fre->parsed()) {
      const EdgeSet d = load_dset(fre_dset);
      const int depth = fre_depth > 0 ? fre_depth : d.tree().depth() - 1;
      const GibbsParams p{fre_beta, fre_j, depth, false};
      json payload{{"f", free_energy_density(d, parse_sign(fre_sign), p)},
                   {"depth", depth},
                   {"volume", d.tree().count_up_to(depth)},
                   {"provenance", provenance("freeenergy", json{{"dset", fre_dset},
                                                                {"sign", fre_sign},
                                                                {"beta", fre_beta},
                                                                {"j", fre_j},
                                                                {"depth", depth}})}};
      emit(payload, fre_out);
      return 0;
    }
    if (scn->parsed()) {
      const EdgeSet d = load_dset(scn_dset);
      std::vector<int> depths;
      if (!scn_depths.empty())
        depths = parse_depth_list(scn_depths);
      else
        for (int r = 1; r < d.tree().depth(); ++r) depths.push_back(r);
      json payload = scan_json(d, parse_sign(scn_sign), scn_beta, scn_j, depths);
      payload["provenance"] = provenance("scan", json{{"dset", scn_dset},
                                                      {"sign", scn_sign},
                                                      {"beta", scn_beta},
                                                      {"j", scn_j},
                                                      {"depths", depths}});
      emit(payload, scn_out);
      return 0;
    }
    if (mcc->parsed()) {
      const EdgeSet d = load_dset(mc_dset);
      const int depth = mc_depth > 0 ? mc_depth : d.tree().depth() - 1;
      const GibbsParams p{mc_beta, mc_j, depth, false};
      McConfig mc;
      mc.sweeps = mc_sweeps;
      mc.burn_in = mc_burn;
      mc.seed = mc_seed;
      mc.thinning = mc_thin;
      if (mc_dyn == "metropolis") mc.dynamics = Dynamics::kMetropolis;
      else if (mc_dyn != "glauber") throw std::invalid_argument("--dynamics must be glauber|metropolis");
      const int sign = parse_sign(mc_sign);
      const auto est = sample(d, sign, p, mc);
      json payload{{"depth", est.depth},
                   {"samples", est.samples},
                   {"magnetization", est.magnetization},
                   {"stdError", est.std_error},
                   {"rng", est.rng_id},
                   {"dynamics", mc_dyn}};
      if (mc_trace) payload["energyTrace"] = energy_trace(d, sign, p, mc);
      payload["provenance"] = provenance("mc", json{{"dset", mc_dset},
                                                    {"sign", mc_sign},
                                                    {"beta", mc_beta},
                                                    {"j", mc_j},
                                                    {"depth", depth},
                                                    {"sweeps", mc_sweeps},
                                                    {"burnIn", mc_burn},
                                                    {"thinning", mc_thin},
                                                    {"seed", mc_seed}});
      emit(payload, mc_out);
      return 0;
    }
    if (ren->parsed()) {
      const EdgeSet d = load_dset(ren_dset);
      std::optional<EdgeSet> highlight;
      if (ren_highlight) highlight.emplace(edge_set_from_json(read_file(*ren_highlight),
                                                              d.tree_ptr()));
      const SpinConfig sigma =
          ren_config ? spin_config_from_json(read_file(*ren_config), d.tree_ptr())
                     : build_sigma(d, parse_sign(ren_sign));
      write_output(ren_out, render_dot(sigma, d, highlight ? &*highlight : nullptr), out);
      return 0;
    }
    if (run_cmd->parsed()) return cmd_run(run_spec, run_out, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {  // missing/mistyped fields in input files
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace bethe::cli

#include "dynlab/cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "dynlab/enveloping.hpp"
#include "dynlab/sensitivity.hpp"

namespace dynlab::cli {
namespace fs = std::filesystem;
namespace {

constexpr std::size_t kListCap = 32;

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
json capped(const std::vector<T>& v, std::size_t cap = kListCap) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size() && i < cap; ++i) out.push_back(v[i]);
  return out;
}

struct Column {
  std::string name;
  std::string type;
  std::string description;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void add_csv(Bundle& b, const std::string& name, const std::vector<Column>& cols,
             const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  for (std::size_t i = 0; i < cols.size(); ++i) text += (i ? "," : "") + csv_field(cols[i].name);
  text += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + csv_field(row[i]);
    text += "\r\n";
  }
  b.documents.push_back({name + ".csv", text});
  json schema{{"file", name + ".csv"}, {"format", "RFC 4180, header row"}, {"columns", json::array()}};
  for (const auto& c : cols) schema["columns"].push_back({{"name", c.name}, {"type", c.type}, {"description", c.description}});
  b.documents.push_back({name + ".schema.json", schema.dump(2) + "\n"});
}

void add_json(Bundle& b, const std::string& name, const json& doc) { b.documents.push_back({name + ".json", doc.dump(2) + "\n"}); }

/// Everything a command needs after defaults are applied.
struct Resolved {
  RunSpec spec;
  Instance inst;
  std::vector<double> grid;
  std::int64_t horizon = 0;
  double r = 0.0;
  double delta = 0.0;
  double tol = 1e-3;
  int depth = 64;

  json scales() const {
    return {{"epsilon_grid", grid}, {"r", r}, {"delta", delta}, {"horizon", horizon}, {"tol", tol}, {"depth", depth}};
  }
};

Resolved resolve(const RunSpec& spec, const Scales& sc) {
  if (sc.threads == 0) throw InputError("--threads must be at least 1");
  set_thread_count(sc.threads);
  Resolved res{spec, build_instance(spec), {}};
  res.grid = sc.eps_grid.value_or(default_epsilon_grid(res.inst.system.space().diameter()));
  validate_grid(res.grid);
  res.horizon = sc.horizon.value_or(res.inst.horizon);
  if (res.horizon < 0) throw InputError("--horizon must be nonnegative");
  res.r = sc.r.value_or(res.inst.r);
  if (!(res.r > 0.0) || !std::isfinite(res.r)) throw InputError("--r must be positive");
  res.delta = sc.delta.value_or(res.inst.delta);
  if (!(res.delta > 0.0) || !std::isfinite(res.delta)) throw InputError("--delta must be positive");
  res.tol = sc.tol.value_or(1e-3);
  if (!(res.tol > 0.0) || !std::isfinite(res.tol)) throw InputError("--tol must be positive");
  res.depth = sc.depth.value_or(64);
  if (res.depth < 1) throw InputError("--depth must be at least 1");
  return res;
}

json verdict_json(const Verdict& v) {
  json j{{"property", to_string(v.property)},
         {"positive", v.positive()},
         {"scales", {{"epsilon_grid", v.epsilon_grid}, {"r", v.r}, {"horizon", v.horizon}}},
         {"witness", capped(v.witness)},
         {"witness_count", v.witness.size()}};
  j["failing_epsilon"] = v.failing_epsilon ? json(*v.failing_epsilon) : json(nullptr);
  if (!v.caveat.empty()) j["caveat"] = v.caveat;
  return j;
}

json fragmentation_json(const FragmentationReport& f) {
  return {{"epsilon", f.epsilon}, {"r", f.r},          {"label", f.label},
          {"fragmented", f.fragmented}, {"stages", f.stages}, {"residual", capped(f.residual)},
          {"residual_count", f.residual.size()}};
}

Bundle start(const std::string& command, const Resolved& res) {
  Bundle b;
  b.manifest = {{"command", command},
                {"spec", res.spec.to_json()},
                {"system", res.inst.system.description.empty() ? res.inst.system.name() : res.inst.system.description},
                {"space", res.inst.system.space().metric_descriptor()},
                {"cloud", {{"size", res.inst.cloud.size()}, {"covering_radius", res.inst.cloud.r},
                           {"provenance", res.inst.cloud.provenance.note}}},
                {"scales", res.scales()},
                {"verdicts", json::object()},
                {"tool_version", kToolVersion},
                {"execution", {{"threads", thread_count()}}}};
  return b;
}

void finish(Bundle& b, std::chrono::steady_clock::time_point t0) {
  b.manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json docs = json::array();
  for (const auto& d : b.documents) docs.push_back("reports/" + d.path);
  b.manifest["documents"] = docs;
  b.manifest["consistency"] = {{"violations", b.violations}};
}

/// Observables registered for the E^f checks, by space kind.
std::vector<Observable> registered_observables(const System& sys) {
  const SpacePtr space = sys.space_ptr();
  switch (space->kind()) {
    case SpaceKind::circle:
      return {make_observable("cos(2 pi x)", [](const Point& p) { return std::cos(2 * std::numbers::pi * p.x[0]); }, 1.0,
                              2 * std::numbers::pi)};
    case SpaceKind::torus2:
      return {make_observable("cos(2 pi x0)", [](const Point& p) { return std::cos(2 * std::numbers::pi * p.x[0]); }, 1.0,
                              2 * std::numbers::pi)};
    case SpaceKind::interval:
      return {make_observable("x", [](const Point& p) { return p.x[0]; }, 1.0, 1.0)};
    case SpaceKind::disk:
      return {make_observable("Re z", [](const Point& p) { return p.x[0]; }, 1.0, 1.0)};
    case SpaceKind::sequence: {
      auto seq = std::static_pointer_cast<const SequenceSpace>(space);
      return {make_observable("symbol at 0", [seq](const Point& p) { return static_cast<double>(seq->symbol(p, 0)); },
                              static_cast<double>(seq->alphabet() - 1))};
    }
    case SpaceKind::suspension: {
      auto sus = std::static_pointer_cast<const SuspensionSpace>(space);
      return {make_observable("height", [sus](const Point& p) { return sus->height(p); }, 1.0)};
    }
    case SpaceKind::finite:
      return {};
  }
  return {};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw InputError("cannot write '" + path.string() + "'");
}

}  // namespace

std::vector<double> parse_eps_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("--eps-grid: '" + item + "' is not a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw InputError("--eps-grid: '" + item + "' is not a number");
    grid.push_back(v);
  }
  if (grid.empty()) throw InputError("--eps-grid is empty");
  std::sort(grid.rbegin(), grid.rend());
  validate_grid(grid);
  return grid;
}

Bundle cmd_analyze(const RunSpec& spec, const Scales& scales) {
  const auto t0 = std::chrono::steady_clock::now();
  const Resolved res = resolve(spec, scales);
  const System& sys = res.inst.system;
  const SampleCloud& cloud = res.inst.cloud;
  const Horizon horizon(res.horizon);
  const SensitivityContext ctx(sys, cloud, horizon, res.r);
  Bundle b = start("analyze", res);
  json& verdicts = b.manifest["verdicts"];

  const Verdict ns = ns_check(ctx, res.grid);
  const Verdict ae = ae_check(ctx, res.grid);
  const Verdict le = le_check(ctx, res.grid);
  const Verdict hns = hns_check(ctx, res.grid);
  verdicts["ns"] = verdict_json(ns);
  verdicts["ae"] = verdict_json(ae);
  verdicts["le"] = verdict_json(le);
  verdicts["hns"] = verdict_json(hns);
  verdicts["sensitivity_constant"] = {{"value", sensitivity_constant(ctx, res.grid)},
                                      {"scales", {{"epsilon_grid", res.grid}, {"r", ctx.r()}, {"horizon", res.horizon}}}};

  json eq_docs = json::array();
  for (double eps : res.grid) {
    const EqReport eq = eq_epsilon(ctx, eps);
    eq_docs.push_back({{"epsilon", eq.epsilon}, {"horizon", eq.horizon}, {"r", eq.r}, {"eq_count", eq.eq_points.size()},
                       {"cloud_size", cloud.size()}, {"dense", eq.dense}, {"invariance_defect", eq.invariance_defect},
                       {"eq_points", eq.eq_points}});
  }
  add_json(b, "eq_reports", eq_docs);

  std::vector<FragmentationReport> kernel;
  json frag_docs = json::array();
  for (double eps : res.grid) {
    kernel.push_back(fragmentation_kernel(ctx.pairs(), eps));
    frag_docs.push_back(fragmentation_json(kernel.back()));
  }
  add_json(b, "fragmentation", frag_docs);
  const double defect = fragmentation_defect(ctx.pairs(), res.grid);
  verdicts["fragmentation_defect"] = {{"value", finite_or_null(defect)},
                                      {"none_fragmented", std::isinf(defect)},
                                      {"scales", {{"epsilon_grid", res.grid}, {"r", ctx.r()}, {"horizon", res.horizon}}}};
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& k : kernel) {
      rows.push_back({num(k.epsilon), num(k.r), std::to_string(k.stages), std::to_string(k.residual.size()),
                      k.fragmented ? "1" : "0"});
    }
    add_csv(b, "defect_curve",
            {{"epsilon", "real", "grid epsilon"},
             {"r", "real", "ball radius"},
             {"stages", "integer", "peeling stages of the d_H kernel"},
             {"residual", "integer", "points left in the kernel"},
             {"fragmented", "0/1", "1 when the residual is empty"}},
            rows);
  }

  // Separability of d_H on the same cloud along growing horizons.
  std::vector<ScheduleEntry> schedule;
  for (std::int64_t n : {res.horizon / 4, res.horizon / 2, res.horizon}) {
    if (schedule.empty() || schedule.back().horizon.n() != n) schedule.push_back({cloud, Horizon(n)});
  }
  const double sep_eps = res.grid.front();
  const SeparabilityProfile sep = separability_profile(sys, schedule, sep_eps);
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : sep.rows) {
      rows.push_back({std::to_string(row.horizon), num(row.epsilon), std::to_string(row.cloud_size),
                      std::to_string(row.net_size)});
    }
    add_csv(b, "separability",
            {{"horizon", "integer", "N of d_H"},
             {"epsilon", "real", "net radius"},
             {"cloud_size", "integer", "sample size"},
             {"net_size", "integer", "greedy epsilon-net size under d_H"}},
            rows);
  }

  // Raw iterate family at the same scales, computed by stepping orbits.
  const auto raw = raw_family_check(sys, cloud, horizon, res.grid, ctx.r());
  bool raw_all = true;
  json raw_docs = json::array();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw_all = raw_all && raw[i].fragmented;
    raw_docs.push_back(fragmentation_json(raw[i]));
    if (raw[i].fragmented != kernel[i].fragmented || raw[i].residual != kernel[i].residual) {
      b.violations.push_back("d_H kernel and raw-iterate kernel disagree at epsilon " + num(res.grid[i]));
    }
  }
  add_json(b, "raw_family", raw_docs);
  verdicts["raw_family_fragmented"] = {{"value", raw_all},
                                       {"scales", {{"epsilon_grid", res.grid}, {"r", ctx.r()}, {"horizon", res.horizon}}}};
  if (hns.positive() && !ns.positive()) b.violations.push_back("HNS without NS");
  if (ae.positive() && !ns.positive()) b.violations.push_back("AE without NS");
  if (hns.positive() != raw_all) b.violations.push_back("HNS verdict differs from the raw-iterate family check");

  finish(b, t0);
  return b;
}

Bundle cmd_classify(const RunSpec& spec, const Scales& scales) {
  const auto t0 = std::chrono::steady_clock::now();
  const Resolved res = resolve(spec, scales);
  if (!res.inst.subshift) throw InputError("classify needs a shift spec (system \"shift\" or \"morse\")");
  const Subshift& sub = *res.inst.subshift;
  Bundle b = start("classify", res);
  json& verdicts = b.manifest["verdicts"];
  const json depth_scale{{"depth", res.depth}};

  const ClassificationResult cls = classify_countability(sub, res.depth);
  verdicts["classification"] = {{"subshift", sub.describe()},
                                {"countability", to_string(cls.countability)},
                                {"rn", to_string(cls.rn)},
                                {"rule", cls.rule},
                                {"depth_exhausted", cls.countability == Countability::unknown},
                                {"scales", depth_scale}};
  add_json(b, "classification",
           {{"countability", to_string(cls.countability)}, {"rn", to_string(cls.rn)}, {"rule", cls.rule},
            {"evidence", cls.evidence}, {"depth", cls.depth}});

  const int n_max = std::min(res.depth, 14);
  const auto profile = complexity_profile(sub, n_max);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n = 0; n < profile.size(); ++n) rows.push_back({std::to_string(n + 1), std::to_string(profile[n])});
  add_csv(b, "complexity", {{"n", "integer", "word length"}, {"p", "integer", "number of admissible words of length n"}},
          rows);
  verdicts["complexity"] = {{"profile", profile}, {"scales", {{"n_max", n_max}}}};

  const auto expansivity = expansivity_constant(sub);
  verdicts["expansivity"] = {{"value", expansivity ? json(*expansivity) : json(nullptr)},
                             {"scales", {{"metric", "2^-min|k|"}}}};

  if (cls.rn == RNVerdict::rn) {
    const PeriodicityCheck pc = recurrent_periodicity_check(sub, res.depth);
    verdicts["recurrent_periodicity"] = {{"passed", pc.passed()}, {"sampled", pc.sampled}, {"recurrent", pc.recurrent},
                                         {"periodic", pc.periodic}, {"scales", depth_scale}};
    if (!pc.passed()) {
      for (const auto& v : pc.violations) b.violations.push_back("recurrent non-periodic point in an RN subshift: " + v);
    }
  }
  finish(b, t0);
  return b;
}

Bundle cmd_envelope(const RunSpec& spec, const Scales& scales) {
  const auto t0 = std::chrono::steady_clock::now();
  const Resolved res = resolve(spec, scales);
  const System& sys = res.inst.system;
  const SampleCloud& cloud = res.inst.cloud;
  const Horizon horizon(res.horizon);
  Bundle b = start("envelope", res);
  json& verdicts = b.manifest["verdicts"];
  const double eps = res.grid.front();

  const EnvelopeApprox env = envelope_approx(sys, cloud, horizon, res.tol);
  json maps = json::array();
  for (const auto& m : env.maps) {
    maps.push_back({{"representative", m.representative()}, {"multiplicity", m.multiplicity()},
                    {"exponents", capped(m.exponents)}});
  }
  add_json(b, "envelope", {{"horizon", env.horizon}, {"tol", env.tol}, {"map_count", env.maps.size()}, {"maps", maps}});
  verdicts["envelope_size"] = {{"value", env.maps.size()}, {"scales", {{"horizon", res.horizon}, {"tol", res.tol}}}};

  std::vector<std::vector<Point>> tables;
  for (const auto& m : env.maps) tables.push_back(m.table);
  const FragmentationReport family = fragmented_family_check(tables, cloud, eps, res.r);
  verdicts["fragmented_family"] = {{"value", family.fragmented},
                                   {"residual_count", family.residual.size()},
                                   {"scales", {{"epsilon", eps}, {"r", res.r}, {"horizon", res.horizon}, {"tol", res.tol}}}};

  json ef = json::array();
  for (const Observable& f : registered_observables(sys)) {
    const auto fam = ef_family(env, f, res.tol);
    const FragmentationReport rep = fragmented_family_check(fam, cloud, eps, res.r);
    ef.push_back({{"observable", f.label}, {"family_size", fam.size()}, {"fragmented", rep.fragmented},
                  {"residual_count", rep.residual.size()},
                  {"scales", {{"epsilon", eps}, {"r", res.r}, {"horizon", res.horizon}, {"tol", res.tol}}}});
  }
  verdicts["ef_families"] = ef;

  const double r_maps = eps / 2;
  const FSemigroupReport fsg = f_semigroup_check(env, cloud, eps, r_maps);
  verdicts["f_semigroup"] = {{"value", fsg.fragmented},
                             {"degraded", fsg.degraded},
                             {"closure_defect", fsg.closure_defect},
                             {"projection_error", fsg.projection_error},
                             {"residual_count", fsg.residual.size()},
                             {"scales", {{"epsilon", eps}, {"r_maps", r_maps}, {"horizon", res.horizon}, {"tol", res.tol}}}};

  std::vector<double> defects(env.maps.size(), 0.0);
  parallel_for(env.maps.size(), [&](std::size_t i) { defects[i] = continuity_defect(env.maps[i], cloud, res.r); });
  {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < env.maps.size(); ++i) {
      rows.push_back({std::to_string(env.maps[i].representative()), std::to_string(env.maps[i].multiplicity()),
                      num(defects[i])});
    }
    add_csv(b, "continuity_defects",
            {{"representative", "integer", "exponent n of the representative T^n"},
             {"multiplicity", "integer", "iterates merged into the map"},
             {"defect", "real", "max ball image diameter at radius r"}},
            rows);
    constexpr int kBins = 10;
    const double top = sys.space().diameter();
    std::vector<std::size_t> counts(kBins, 0);
    for (double d : defects) counts[std::min(kBins - 1, static_cast<int>(d / top * kBins))]++;
    rows.clear();
    for (int k = 0; k < kBins; ++k) {
      rows.push_back({num(top * k / kBins), num(top * (k + 1) / kBins), std::to_string(counts[k])});
    }
    add_csv(b, "continuity_defect_histogram",
            {{"lower", "real", "bin lower edge"},
             {"upper", "real", "bin upper edge (last bin closed)"},
             {"count", "integer", "envelope maps with defect in the bin"}},
            rows);
  }

  if (scales.two_arrows) {
    ContinuedFraction alpha = ContinuedFraction::golden();
    if (res.inst.two_arrows) alpha = res.inst.two_arrows->alpha;
    const std::int64_t depth = scales.depth.value_or(10000);
    const TwoArrowsReport rep = verify_two_arrows(alpha, depth, res.tol);
    std::vector<std::vector<std::string>> rows;
    json doc_rows = json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({std::to_string(row.m), num(row.gamma), num(row.below_cauchy), num(row.above_cauchy),
                      num(row.minus_error), num(row.plus_error), num(row.limits_distance), num(row.factor_error),
                      row.converged ? "1" : "0", row.limits_distinct ? "1" : "0", row.baire_minus ? "1" : "0",
                      row.baire_plus ? "1" : "0"});
      doc_rows.push_back({{"m", row.m}, {"gamma", row.gamma}, {"below", row.below}, {"above", row.above},
                          {"below_cauchy", row.below_cauchy}, {"above_cauchy", row.above_cauchy},
                          {"minus_error", row.minus_error}, {"plus_error", row.plus_error},
                          {"limits_distance", row.limits_distance}, {"factor_error", row.factor_error},
                          {"converged", row.converged}, {"limits_distinct", row.limits_distinct},
                          {"baire_minus", row.baire_minus}, {"baire_plus", row.baire_plus}});
    }
    add_csv(b, "two_arrows",
            {{"m", "integer", "gamma = m alpha"},
             {"gamma", "real", "frac(m alpha)"},
             {"below_cauchy", "real", "sup distance of the last two tables approaching from below"},
             {"above_cauchy", "real", "same from above"},
             {"minus_error", "real", "sup distance of the lower limit to the predicted minus coding"},
             {"plus_error", "real", "sup distance of the upper limit to the predicted plus coding"},
             {"limits_distance", "real", "sup distance between the two limits"},
             {"factor_error", "real", "circle error against rotation by gamma off the orbit"},
             {"converged", "0/1", "both approaches Cauchy within tol"},
             {"limits_distinct", "0/1", "the two limits differ"},
             {"baire_minus", "0/1", "lower limit passes the fragmentation proxy"},
             {"baire_plus", "0/1", "upper limit passes the fragmentation proxy"}},
            rows);
    add_json(b, "two_arrows", {{"depth", rep.depth}, {"tol", rep.tol}, {"shift_range", rep.shift_range},
                               {"min_shift_distance", rep.min_shift_distance}, {"expansivity", rep.expansivity},
                               {"baire_r", rep.baire_r}, {"baire_epsilon", rep.baire_epsilon}, {"rows", doc_rows}});
    verdicts["two_arrows"] = {{"claims_hold", rep.claims_hold()},
                              {"discrete", rep.discrete()},
                              {"min_shift_distance", rep.min_shift_distance},
                              {"rows", rep.rows.size()},
                              {"scales", {{"depth", depth}, {"tol", res.tol}, {"shift_range", rep.shift_range},
                                          {"baire_r", rep.baire_r}, {"baire_epsilon", rep.baire_epsilon}}}};
  }
  finish(b, t0);
  return b;
}

Bundle cmd_chain(const RunSpec& spec, const Scales& scales) {
  const auto t0 = std::chrono::steady_clock::now();
  const Resolved res = resolve(spec, scales);
  const System& sys = res.inst.system;
  const SampleCloud& cloud = res.inst.cloud;
  const Horizon horizon(res.horizon);
  Bundle b = start("chain", res);
  json& verdicts = b.manifest["verdicts"];
  const json scale{{"delta", res.delta}, {"horizon", res.horizon}, {"r", res.r}};

  const ChainDigraph dg = chain_digraph(sys, cloud, res.delta, true);
  const auto recurrent = chain_recurrent_set(dg);
  verdicts["chain_recurrent"] = {{"size", recurrent.size()}, {"cloud_size", cloud.size()},
                                 {"scales", {{"delta", res.delta}, {"two_sided", true}}}};
  verdicts["chain_transitive"] = {{"value", strongly_connected(dg)}, {"scales", {{"delta", res.delta}, {"two_sided", true}}}};
  verdicts["chain_transitive_at_covering_radius"] = {
      {"value", chain_transitivity_probe(sys, cloud, cloud.r)}, {"scales", {{"delta", cloud.r}, {"two_sided", true}}}};

  const BirkhoffResult bk = birkhoff_center_iteration(sys, cloud, res.delta, horizon, 32, res.r);
  json stages = json::array();
  for (const auto& s : bk.stages) stages.push_back(s.size());
  verdicts["birkhoff"] = {{"stages", bk.stages.size()}, {"fixpoint", bk.fixpoint}, {"final_size", bk.final_set().size()},
                          {"final", capped(bk.final_set())}, {"scales", scale}};

  const MincenterResult mc = mincenter_approx(sys, cloud, res.delta, horizon);
  json comps = json::array();
  for (const auto& c : mc.components) comps.push_back({{"size", c.nodes.size()}, {"minimal", c.minimal}, {"nodes", capped(c.nodes)}});
  verdicts["mincenter"] = {{"size", mc.mincenter.size()}, {"components", mc.components.size()},
                           {"scales", {{"delta", res.delta}, {"horizon", res.horizon}, {"gap_bound", mc.gap_bound}}}};

  json prol = json::array();
  const std::size_t n = cloud.size();
  std::vector<std::size_t> bases{0, n / 3, 2 * n / 3, n - 1};
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  for (std::size_t x : bases) {
    const ProlongationReport p = prolongation(sys, cloud, x, res.delta, horizon);
    prol.push_back({{"base", p.base}, {"point", to_string(cloud[x])}, {"size", p.prol_set.size()}, {"set", p.prol_set},
                    {"delta", p.delta}, {"horizon", p.horizon}});
  }
  add_json(b, "chain", {{"chain_recurrent_set", recurrent},
                        {"birkhoff_stage_sizes", stages},
                        {"birkhoff_final", bk.final_set()},
                        {"mincenter", mc.mincenter},
                        {"mincenter_components", comps},
                        {"prolongation", prol}});
  finish(b, t0);
  return b;
}

std::string gallery_listing() {
  std::ostringstream os;
  for (const auto& e : gallery()) {
    os << e.id << " — " << e.citation << "\n";
    os << "    params: " << e.params << "\n";
    os << "    reproduces: " << e.fact << "\n";
    os << "    spec: " << e.spec.dump() << "\n";
  }
  return os.str();
}

std::string registry_root(const std::optional<std::string>& out) {
  if (out) return *out;
  if (const char* env = std::getenv("DYNLAB_REGISTRY"); env && *env) return env;
  return "runs";
}

std::string write_bundle(Bundle& bundle, const std::string& root) {
  const std::string key = bundle.manifest.value("command", "") + bundle.manifest["spec"].dump() +
                          bundle.manifest["scales"].dump();
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
  const std::string base = std::string(stamp) + "-" + std::string(hash).substr(0, 12);

  fs::create_directories(root);
  const fs::path tmp = fs::path(root) / (".tmp-" + base + "-" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  for (int attempt = 1;; ++attempt) {
    const std::string id = attempt == 1 ? base : base + "-" + std::to_string(attempt);
    const fs::path dest = fs::path(root) / id;
    if (fs::exists(dest)) continue;
    bundle.manifest["run_id"] = id;
    write_file(tmp / "manifest.json", bundle.manifest.dump(2) + "\n");
    for (const auto& d : bundle.documents) write_file(tmp / "reports" / d.path, d.content);
    std::error_code ec;
    fs::rename(tmp, dest, ec);
    if (!ec) return dest.string();
    if (fs::exists(dest)) {
      fs::remove_all(tmp);
      continue;
    }
    throw InputError("cannot move run into place: " + ec.message());
  }
}

std::vector<std::string> gallery_ids() {
  std::vector<std::string> ids;
  for (const auto& e : gallery()) ids.push_back(e.id);
  return ids;
}

std::vector<SweepRun> gallery_sweep() {
  std::vector<SweepRun> out;
  for (const auto& e : gallery()) {
    const Bundle b = cmd_analyze(parse_spec(e.spec.dump(), "gallery:" + e.id), Scales{});
    out.push_back({e.id, b.violations});
  }
  return out;
}

std::string verdict_fingerprint(const std::string& id) {
  for (const auto& e : gallery()) {
    if (e.id != id) continue;
    Scales sc;
    sc.threads = thread_count();
    const Bundle b = cmd_analyze(parse_spec(e.spec.dump(), "gallery:" + id), sc);
    return b.manifest["verdicts"].dump() + b.manifest["consistency"].dump();
  }
  throw InputError("unknown gallery id '" + id + "'");
}

}  // namespace dynlab::cli

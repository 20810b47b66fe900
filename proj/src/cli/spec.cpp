#include "dynlab/cli/spec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace dynlab::cli {
namespace {

std::string where(const std::string& origin, const std::string& key) { return origin + ": key '" + key + "': "; }

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& origin) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& k : allowed) list += (list.empty() ? "" : ", ") + k;
      throw InputError(origin + ": unknown key '" + key + "' (expected one of: " + list + ")");
    }
  }
}

double number(const json& obj, const std::string& key, double fallback, const std::string& origin) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw InputError(where(origin, key) + "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(where(origin, key) + "must be finite");
  return x;
}

std::int64_t integer(const json& obj, const std::string& key, std::int64_t fallback, std::int64_t min,
                     const std::string& origin) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw InputError(where(origin, key) + "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min) throw InputError(where(origin, key) + "must be >= " + std::to_string(min));
  return x;
}

std::vector<Word> words(const json& obj, const std::string& key, const std::string& origin) {
  std::vector<Word> out;
  if (!obj.contains(key)) return out;
  if (!obj.at(key).is_array()) throw InputError(where(origin, key) + "expected a list of words");
  for (const json& w : obj.at(key)) {
    if (!w.is_string()) throw InputError(where(origin, key) + "expected a list of words");
    out.push_back(w.get<std::string>());
  }
  return out;
}

std::string text(const json& obj, const std::string& key, const std::string& fallback, const std::string& origin) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw InputError(where(origin, key) + "expected a string");
  return obj.at(key).get<std::string>();
}

// "golden", a number in (0,1), or a list of continued fraction terms [0, a1, a2, ...].
ContinuedFraction angle(const json& obj, const std::string& key, const std::string& origin) {
  if (!obj.contains(key)) return ContinuedFraction::golden();
  const json& v = obj.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "golden") return ContinuedFraction::golden();
    if (v.get<std::string>() == "silver") return ContinuedFraction::from_value(std::numbers::sqrt2_v<long double> - 1.0L);
    throw InputError(where(origin, key) + "unknown named angle '" + v.get<std::string>() + "'");
  }
  if (v.is_number()) return ContinuedFraction::from_value(v.get<double>());
  if (v.is_array()) {
    ContinuedFraction cf;
    for (const json& t : v) {
      if (!t.is_number_integer()) throw InputError(where(origin, key) + "continued fraction terms must be integers");
      cf.terms.push_back(t.get<std::int64_t>());
    }
    if (cf.terms.size() < 2 || cf.terms[0] != 0) throw InputError(where(origin, key) + "terms must read [0, a1, ...]");
    for (std::size_t i = 1; i < cf.terms.size(); ++i) {
      if (cf.terms[i] < 1) throw InputError(where(origin, key) + "partial quotients must be positive");
    }
    return cf;
  }
  throw InputError(where(origin, key) + "expected \"golden\", a number or a list of terms");
}

// Eventually periodic sequence: `left` repeated to the left of the core, `right` to its right.
ExplicitGenerator explicit_from(const json& g, int alphabet, const std::string& origin) {
  if (!g.is_object()) throw InputError(where(origin, "generator") + "expected an object");
  only_keys(g, {"left", "core", "right", "core_start", "eventual", "recurrence"}, origin + ": generator");
  const std::string left = text(g, "left", "0", origin);
  const std::string core = text(g, "core", "", origin);
  const std::string right = text(g, "right", "0", origin);
  const std::int64_t start = integer(g, "core_start", 0, INT64_MIN / 4, origin);
  for (const std::string* w : {&left, &core, &right}) {
    for (char c : *w) {
      if (c < '0' || c >= '0' + alphabet) throw InputError(where(origin, "generator") + "symbol outside the alphabet");
    }
  }
  if (left.empty() || right.empty()) throw InputError(where(origin, "generator") + "left and right words must be nonempty");
  const auto len = static_cast<std::int64_t>(core.size());
  ExplicitGenerator gen;
  gen.label = "(" + left + ")^inf " + core + " (" + right + ")^inf";
  gen.fn = [left, core, right, start, len](std::int64_t n) {
    if (n >= start && n < start + len) return core[static_cast<std::size_t>(n - start)] - '0';
    if (n >= start + len) {
      const auto k = static_cast<std::size_t>((n - start - len) % static_cast<std::int64_t>(right.size()));
      return right[k] - '0';
    }
    const auto ll = static_cast<std::int64_t>(left.size());
    const auto k = static_cast<std::size_t>(ll - 1 - (start - 1 - n) % ll);
    return left[k] - '0';
  };
  if (g.contains("eventual")) {
    const json& e = g.at("eventual");
    if (!e.is_object()) throw InputError(where(origin, "eventual") + "expected an object");
    only_keys(e, {"left_from", "left_period", "right_from", "right_period"}, origin + ": eventual");
    TailDeclaration t;
    t.left_period = integer(e, "left_period", static_cast<std::int64_t>(left.size()), 1, origin);
    t.right_period = integer(e, "right_period", static_cast<std::int64_t>(right.size()), 1, origin);
    t.left_from = integer(e, "left_from", start - 1, INT64_MIN / 4, origin);
    t.right_from = integer(e, "right_from", start + len, INT64_MIN / 4, origin);
    gen.tails = t;
  }
  if (g.contains("recurrence")) {
    const json& rec = g.at("recurrence");
    if (!rec.is_object()) throw InputError(where(origin, "recurrence") + "expected an object");
    only_keys(rec, {"slope", "offset"}, origin + ": recurrence");
    const std::int64_t slope = integer(rec, "slope", 1, 1, origin);
    const std::int64_t offset = integer(rec, "offset", 0, 0, origin);
    gen.recurrence = RecurrenceDeclaration{[slope, offset](std::int64_t n) { return slope * n + offset; }};
  }
  if (!gen.tails && !gen.recurrence) {
    throw InputError(where(origin, "generator") +
                     "an explicit generator needs an 'eventual' or 'recurrence' declaration");
  }
  return gen;
}

const std::set<std::string> kShiftKeys{"kind", "alphabet", "forbidden", "rules", "alpha", "intercept", "generator", "window"};

struct Defaults {
  int density;
  std::int64_t horizon;
  double r;  // <= 0: the cloud's own radius
};

Defaults defaults_for(const std::string& system) {
  if (system == "rotation") return {512, 2048, 0.0};
  if (system == "toral-auto") return {64, 16, std::ldexp(1.0, -6)};
  if (system == "interval-homeo") return {512, 10000, std::ldexp(1.0, -9)};
  if (system == "circle-homeo") return {256, 512, 0.0};
  if (system == "disk-twist") return {26, 1000, 0.0};
  if (system == "takens") return {20, 64, 5e-4};
  if (system == "two-arrows") return {300, 200, 0.0};
  if (system == "morse") return {256, 256, 0.25};
  return {512, 512, 0.25};  // shift
}

}  // namespace

json RunSpec::to_json() const {
  json j;
  j["system"] = system;
  j["params"] = params;
  if (density) j["density"] = *density;
  if (horizon) j["horizon"] = *horizon;
  if (r) j["r"] = *r;
  if (delta) j["delta"] = *delta;
  j["merge_tol"] = merge_tol;
  return j;
}

RunSpec parse_spec(const std::string& content, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < content.size(); ++i) {
      if (content[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto cut = msg.find("; ");
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": syntax error" +
                     (cut == std::string::npos ? "" : msg.substr(cut)));
  }
  if (doc.is_object() && doc.contains("run_id") && doc.contains("spec")) doc = doc.at("spec");
  if (!doc.is_object()) throw InputError(origin + ": a spec must be a JSON object");
  only_keys(doc, {"system", "params", "density", "horizon", "r", "delta", "merge_tol"}, origin);
  RunSpec spec;
  if (!doc.contains("system") || !doc.at("system").is_string()) throw InputError(where(origin, "system") + "required string");
  spec.system = doc.at("system").get<std::string>();
  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) throw InputError(where(origin, "params") + "expected an object");
    spec.params = doc.at("params");
  }
  if (doc.contains("density")) spec.density = static_cast<int>(integer(doc, "density", 0, 2, origin));
  if (doc.contains("horizon")) spec.horizon = integer(doc, "horizon", 0, 0, origin);
  if (doc.contains("r")) {
    spec.r = number(doc, "r", 0.0, origin);
    if (!(*spec.r > 0.0)) throw InputError(where(origin, "r") + "must be positive");
  }
  if (doc.contains("delta")) {
    spec.delta = number(doc, "delta", 0.0, origin);
    if (!(*spec.delta > 0.0)) throw InputError(where(origin, "delta") + "must be positive");
  }
  spec.merge_tol = number(doc, "merge_tol", 0.0, origin);
  if (spec.merge_tol < 0.0) throw InputError(where(origin, "merge_tol") + "must be nonnegative");
  // Validate the parameters now so that errors surface as parse errors.
  if (spec.system == "shift") parse_subshift(spec.params);
  else (void)make_gallery_system(spec.system, spec.params);
  return spec;
}

RunSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read spec file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_spec(os.str(), path);
}

Subshift parse_subshift(const json& params) {
  const std::string origin = "params";
  only_keys(params, kShiftKeys, origin);
  const std::string kind = text(params, "kind", "full", origin);
  const int alphabet = static_cast<int>(integer(params, "alphabet", 2, 1, origin));
  if (alphabet > 10) throw InputError(where(origin, "alphabet") + "at most 10 symbols");
  if (kind == "full") return Subshift::full(alphabet);
  if (kind == "sft") return Subshift::sft(alphabet, words(params, "forbidden", origin));
  if (kind == "substitution") return Subshift::substitution(alphabet, words(params, "rules", origin));
  if (kind == "sturmian") return Subshift::sturmian(angle(params, "alpha", origin), number(params, "intercept", 0.0, origin));
  if (kind == "morse") return morse_generator();
  if (kind == "explicit") {
    if (!params.contains("generator")) throw InputError(where(origin, "generator") + "required for kind 'explicit'");
    return Subshift::explicit_generator(alphabet, explicit_from(params.at("generator"), alphabet, origin));
  }
  throw InputError(where(origin, "kind") + "unknown subshift kind '" + kind + "'");
}

System make_gallery_system(const std::string& name, const json& params) {
  const std::string origin = "params";
  if (!params.is_object()) throw InputError(origin + ": expected an object");
  if (name == "rotation") {
    only_keys(params, {"alpha"}, origin);
    return make_rotation(number(params, "alpha", std::numbers::sqrt2 - 1.0, origin));
  }
  if (name == "toral-auto") {
    only_keys(params, {"matrix", "hyperbolic"}, origin);
    std::array<std::array<long long, 2>, 2> m{{{2, 1}, {1, 1}}};
    if (params.contains("matrix")) {
      const json& v = params.at("matrix");
      if (!v.is_array() || v.size() != 2 || !v[0].is_array() || !v[1].is_array() || v[0].size() != 2 || v[1].size() != 2) {
        throw InputError(where(origin, "matrix") + "expected a 2x2 integer matrix");
      }
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (!v[i][j].is_number_integer()) throw InputError(where(origin, "matrix") + "entries must be integers");
          m[i][j] = v[i][j].get<long long>();
        }
    }
    bool hyperbolic = false;
    if (params.contains("hyperbolic")) {
      if (!params.at("hyperbolic").is_boolean()) throw InputError(where(origin, "hyperbolic") + "expected true or false");
      hyperbolic = params.at("hyperbolic").get<bool>();
    }
    return make_toral_automorphism(m, hyperbolic);
  }
  if (name == "interval-homeo") {
    only_keys(params, {"power", "knots"}, origin);
    IntervalHomeoSpec spec;
    spec.power = number(params, "power", 2.0, origin);
    if (params.contains("knots")) {
      const json& v = params.at("knots");
      if (!v.is_array()) throw InputError(where(origin, "knots") + "expected a list of [x, y] pairs");
      for (const json& k : v) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw InputError(where(origin, "knots") + "expected a list of [x, y] pairs");
        }
        spec.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
    }
    return make_interval_homeo(spec);
  }
  if (name == "circle-homeo") {
    only_keys(params, {"alpha", "beta"}, origin);
    return make_circle_homeo(number(params, "alpha", std::numbers::sqrt2 - 1.0, origin), number(params, "beta", 0.5, origin));
  }
  if (name == "disk-twist") {
    only_keys(params, {}, origin);
    return make_disk_twist();
  }
  if (name == "takens") {
    only_keys(params, {}, origin);
    const System base = make_fixed_points(2);
    const Point a{{0.0, 0.0}, 0, 0};
    const Point b{{0.0, 0.0}, 1, 0};
    return takens_suspension({a, a, a, b, b, b}, -3, base);
  }
  if (name == "two-arrows") {
    only_keys(params, {"alpha", "depth", "orbit_reach"}, origin);
    const auto model = sturmian_two_arrows(angle(params, "alpha", origin), integer(params, "depth", 10000, 1, origin),
                                           integer(params, "orbit_reach", 300, 1, origin));
    return model.system;
  }
  if (name == "shift" || name == "morse") {
    json p = params;
    if (name == "morse") {
      only_keys(params, {"window"}, origin);
      p["kind"] = "morse";
    }
    const int window = static_cast<int>(integer(p, "window", name == "morse" ? 32 : 8, 1, origin));
    p.erase("window");
    const Subshift sub = parse_subshift(p);
    return shift_system(name == "morse" ? "morse" : "shift(" + to_string(sub.kind()) + ")", sub.alphabet(), window,
                        {subshift_point(sub)});
  }
  throw InputError("unknown gallery id '" + name + "' (see the gallery subcommand)");
}

Instance build_instance(const RunSpec& spec) {
  const Defaults def = defaults_for(spec.system);
  const int density = spec.density.value_or(def.density);
  const std::int64_t horizon = spec.horizon.value_or(def.horizon);
  auto finish = [&](System sys, SampleCloud cloud) {
    Instance inst{std::move(sys), std::move(cloud), horizon, 0.0, 0.0, std::nullopt, std::nullopt};
    inst.r = spec.r.value_or(def.r > 0.0 ? def.r : inst.cloud.r);
    inst.delta = spec.delta.value_or(inst.cloud.r);
    return inst;
  };
  if (spec.system == "shift" || spec.system == "morse") {
    System sys = make_gallery_system(spec.system, spec.params);
    json p = spec.params;
    p.erase("window");
    if (spec.system == "morse") p["kind"] = "morse";
    const Subshift sub = parse_subshift(p);
    SampleCloud cloud = orbit_closure_sample(sys, Point::symbolic(0, 0), Horizon(density), spec.merge_tol);
    Instance inst = finish(std::move(sys), std::move(cloud));
    inst.subshift = sub;
    return inst;
  }
  if (spec.system == "takens") {
    System sys = make_gallery_system("takens", spec.params);
    const Point a{{0.0, 0.0}, 0, 0};
    const Point b{{0.0, 0.0}, 1, 0};
    SampleCloud cloud = takens_cloud(sys, {a, b}, density);
    return finish(std::move(sys), std::move(cloud));
  }
  if (spec.system == "two-arrows") {
    const std::string origin = "params";
    auto model = sturmian_two_arrows(angle(spec.params, "alpha", origin), integer(spec.params, "depth", 10000, 1, origin),
                                     integer(spec.params, "orbit_reach", density, 1, origin));
    Instance inst = finish(model.system, model.cloud);
    inst.two_arrows = std::move(model);
    return inst;
  }
  System sys = make_gallery_system(spec.system, spec.params);
  SampleCloud cloud = sample_space(sys.space_ptr(), density);
  if (spec.merge_tol > 0.0) {
    cloud.points = merge_points(sys.space(), cloud.points, spec.merge_tol);
  }
  return finish(std::move(sys), std::move(cloud));
}

const std::vector<GalleryEntry>& gallery() {
  static const std::vector<GalleryEntry> entries{
      {"rotation", "Prop interval", "alpha in (0,1), default sqrt2-1",
       "isometry: equicontinuous, so NS, AE, LE and HNS",
       {{"system", "rotation"},
        {"params", {{"alpha", std::numbers::sqrt2 - 1.0}}},
        {"density", 512},
        {"horizon", 1024},
        {"delta", 0.00390625}}},
      {"rotation-quarter", "Prop interval", "alpha = 1/4",
       "periodic rotation: four envelope maps, F-semigroup",
       {{"system", "rotation"}, {"params", {{"alpha", 0.25}}}, {"density", 64}, {"horizon", 64}}},
      {"toral-auto", "Example ex-simple.1", "matrix [[a,b],[c,d]] with det +-1, hyperbolic flag",
       "hyperbolic automorphism is weakly mixing, hence sensitive and not RN",
       {{"system", "toral-auto"}, {"params", {{"hyperbolic", true}}}, {"density", 64}, {"horizon", 16}, {"r", 0.015625}}},
      {"interval-homeo", "Prop interval", "power p > 0 or increasing knots [[x,y],...] fixing 0 and 1",
       "every interval homeomorphism is HNS",
       {{"system", "interval-homeo"}, {"density", 512}, {"horizon", 2000}, {"r", 0.001953125}}},
      {"circle-homeo", "Prop interval", "x -> x + alpha + beta sin(2 pi x)/(2 pi), |beta| < 1",
       "every circle homeomorphism is HNS",
       {{"system", "circle-homeo"}, {"params", {{"alpha", std::numbers::sqrt2 - 1.0}, {"beta", 0.5}}}, {"density", 256},
        {"horizon", 128}, {"r", 0.001}}},
      {"disk-twist", "Example exp", "none; Tz = z exp(2 pi i |z|)", "LE system which is not AE",
       {{"system", "disk-twist"}, {"density", 16}, {"horizon", 1000}, {"delta", 0.19}}},
      {"takens", "Lemma trans", "none; two fixed points joined by an asymptotic pseudo-orbit",
       "transitive AE cascade whose Birkhoff center is the two fixed points",
       {{"system", "takens"}, {"density", 20}, {"horizon", 64}, {"r", 0.0005}, {"delta", 0.0005}}},
      {"full-shift", "Cor shift", "alphabet k, window w", "uncountable subshift: expansive, sensitive, not RN",
       {{"system", "shift"}, {"params", {{"kind", "full"}, {"alphabet", 2}, {"window", 8}}}, {"density", 256},
        {"horizon", 256}, {"r", 0.25}}},
      {"golden-mean", "Cor shift", "forbidden words [\"11\"]", "uncountable SFT, not RN",
       {{"system", "shift"}, {"params", {{"kind", "sft"}, {"forbidden", {"11"}}, {"window", 8}}}, {"density", 256},
        {"horizon", 256}, {"r", 0.25}}},
      {"three-cycle", "Cor shift", "alphabet 3, only 01, 12, 20 allowed", "countable subshift: RN",
       {{"system", "shift"},
        {"params", {{"kind", "sft"}, {"alphabet", 3}, {"forbidden", {"00", "02", "10", "11", "21", "22"}}, {"window", 8}}},
        {"density", 64}, {"horizon", 64}, {"r", 0.25}}},
      {"morse", "Example ex-simple.4", "window w", "Morse generator is not an Asplund function; uncountable, not RN",
       {{"system", "morse"}, {"density", 128}, {"horizon", 128}, {"r", 0.25}}},
      {"two-arrows", "Example two-arr", "alpha (default golden), depth, orbit_reach",
       "enveloping semigroup = shifts plus two arrows of limit maps",
       {{"system", "two-arrows"}, {"params", {{"depth", 10000}}}, {"density", 60}, {"horizon", 64}, {"r", 0.015625}}},
  };
  return entries;
}

}  // namespace dynlab::cli

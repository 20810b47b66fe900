// One line per acceptance criterion: "[PASS] 3 ..." or "[FAIL] 3 ...".
// Exit status is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dynlab/cli/runner.hpp"
#include "dynlab/enveloping.hpp"
#include "dynlab/recurrence.hpp"
#include "dynlab/sensitivity.hpp"
#include "dynlab/symbolic.hpp"
#include "oracles.hpp"

using namespace dynlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> dyadic_grid(int from, int to) {
  std::vector<double> g;
  for (int k = from; k <= to; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

Outcome kernel_oracle() {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> size_dist(1, 12);
  std::uniform_int_distribution<int> level(0, 7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int agree = 0;
  int fragmented = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const int n = size_dist(rng);
    // Cloud metric: points on a line; pseudometric: sup-norm embedding with
    // coarse coordinates so that ties and zero distances occur.
    std::vector<double> pos(n);
    std::vector<std::array<int, 3>> emb(n);
    for (int i = 0; i < n; ++i) {
      pos[i] = unit(rng);
      for (auto& c : emb[i]) c = level(rng);
    }
    std::vector<std::vector<double>> d(n, std::vector<double>(n)), rho(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        d[i][j] = std::fabs(pos[i] - pos[j]);
        int m = 0;
        for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(emb[i][k] - emb[j][k]));
        rho[i][j] = m / 8.0;
      }
    const double r = unit(rng) * 0.4;
    const double eps = (1 + level(rng) % 7) / 8.0;
    auto space = std::make_shared<FiniteMetricSpace>(d);
    const SampleCloud cloud = make_cloud(space, space->points(), std::max(r, 1e-9));
    Pseudometric p{"random", [&rho](std::size_t i, std::size_t j) { return rho[i][j]; }};
    const auto rep = fragmentation_kernel(cloud, p, eps, r);
    const bool truth = oracle::fragmented_by_subsets(d, rho, eps, r);
    agree += rep.fragmented == truth;
    fragmented += truth;
  }
  std::ostringstream os;
  os << agree << "/" << trials << " agree (" << fragmented << " fragmented)";
  return {agree == trials, os.str()};
}

Outcome equicontinuous_baseline() {
  const System sys = make_rotation(std::numbers::sqrt2 - 1.0);
  const SampleCloud cloud = sample_space(sys.space_ptr(), 512);
  const Horizon horizon(2048);
  const SensitivityContext ctx(sys, cloud, horizon);
  const auto grid = default_epsilon_grid(sys.space().diameter());
  bool eq_full = true;
  for (double eps : grid) eq_full = eq_full && eq_epsilon(ctx, eps).eq_points.size() == cloud.size();
  const double constant = sensitivity_constant(ctx, grid);
  const bool hns = hns_check(ctx, grid).positive();
  const bool le = le_check(ctx, grid).positive();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Point x = Point::real(unit(rng));
    const Point y = Point::real(unit(rng));
    worst = std::max(worst, std::fabs(d_H(sys, x, y, horizon) - sys.distance(x, y)));
  }
  std::ostringstream os;
  os << "constant=" << constant << " eq_full=" << eq_full << " HNS=" << hns << " LE=" << le << " max|d_H-d|=" << worst
     << " (r=" << cloud.r << ")";
  return {constant == 0.0 && eq_full && hns && le && worst <= 1e-9, os.str()};
}

Outcome sensitive_baselines() {
  // Cat map on the 64x64 lattice.
  const System cat = make_toral_automorphism({{{2, 1}, {1, 1}}}, true);
  const SampleCloud grid_cloud = sample_space(cat.space_ptr(), 64);
  const Horizon h16(16);
  const double r = std::ldexp(1.0, -6);
  const SensitivityContext cat_ctx(cat, grid_cloud, h16, r);
  const auto cat_grid = default_epsilon_grid(cat.space().diameter());
  const double cat_constant = sensitivity_constant(cat_ctx, cat_grid);
  const bool cat_sensitive = !ns_check(cat_ctx, cat_grid).positive();

  // Exact lattice oracle: every r-ball holds a pair whose d_H exceeds the constant.
  const oracle::LatticeCat lattice{64};
  double oracle_constant = 0.0;
  for (double eps : cat_grid) {
    bool all_spread = true;
    for (int a = 0; a < 64 && all_spread; ++a)
      for (int b = 0; b < 64 && all_spread; ++b) {
        double diam = 0.0;
        for (int da = -1; da <= 1; ++da)
          for (int db = -1; db <= 1; ++db)
            for (int ea = -1; ea <= 1; ++ea)
              for (int eb = -1; eb <= 1; ++eb) {
                const std::pair<int, int> p{(a + da + 64) % 64, (b + db + 64) % 64};
                const std::pair<int, int> q{(a + ea + 64) % 64, (b + eb + 64) % 64};
                diam = std::max(diam, lattice.d_H(p, q, 16));
              }
        all_spread = diam > eps;
      }
    if (all_spread) {
      oracle_constant = eps;
      break;
    }
  }

  // Full shift on two symbols seen through a window of 8.
  const System shift = shift_system("full-shift", 2, 8, {champernowne_source()});
  const SampleCloud shift_cloud = orbit_closure_sample(shift, Point::symbolic(0, 0), Horizon(512), 0.0);
  const SensitivityContext shift_ctx(shift, shift_cloud, Horizon(512), 0.25);
  const auto shift_grid = default_epsilon_grid(1.0);
  const double shift_constant = sensitivity_constant(shift_ctx, shift_grid);
  const auto expansivity = expansivity_constant(Subshift::full(2));
  const bool not_rn = classify_countability(Subshift::full(2), 12).rn == RNVerdict::not_rn;

  std::ostringstream os;
  os << "cat constant=" << cat_constant << " (oracle " << oracle_constant << ", sensitive=" << cat_sensitive
     << "); shift constant=" << shift_constant << " (expansivity " << expansivity.value_or(0) << ", samples "
     << shift_cloud.size() << ", not-RN=" << not_rn << ")";
  const bool pass = cat_sensitive && cat_constant >= 0.0625 && cat_constant == oracle_constant &&
                    shift_constant >= 0.5 && expansivity && shift_constant == *expansivity && not_rn;
  return {pass, os.str()};
}

Outcome classification_table() {
  struct Row {
    std::string name;
    Subshift sub;
    RNVerdict expected;
  };
  ExplicitGenerator single;
  single.fn = [](std::int64_t n) { return n == 0 ? 1 : 0; };
  single.label = "...0001000...";
  single.tails = TailDeclaration{-1, 1, 1, 1};
  const std::vector<Row> rows{
      {"full", Subshift::full(2), RNVerdict::not_rn},
      {"golden-mean", Subshift::sft(2, {"11"}), RNVerdict::not_rn},
      {"3-cycle", Subshift::sft(3, {"00", "02", "10", "11", "21", "22"}), RNVerdict::rn},
      {"morse", morse_generator(), RNVerdict::not_rn},
      {"single-one", Subshift::explicit_generator(2, single), RNVerdict::rn},
  };
  int wrong = 0;
  int periodicity_failures = 0;
  std::ostringstream os;
  for (const auto& row : rows) {
    const auto res = classify_countability(row.sub, 64);
    wrong += res.rn != row.expected;
    os << row.name << "=" << to_string(res.rn) << " ";
    if (res.rn == RNVerdict::rn) {
      const auto check = recurrent_periodicity_check(row.sub, 64);
      periodicity_failures += !check.passed();
      os << "(recurrent " << check.recurrent << "/" << check.sampled << " periodic " << check.periodic << ") ";
    }
  }
  os << "misclassified=" << wrong;
  return {wrong == 0 && periodicity_failures == 0, os.str()};
}

Outcome interval_hns() {
  const System sys = make_interval_homeo();
  const SampleCloud cloud = sample_space(sys.space_ptr(), 512);
  const SensitivityContext ctx(sys, cloud, Horizon(10000), std::ldexp(1.0, -9));
  const auto grid = dyadic_grid(1, 6);
  const auto v = hns_check(ctx, grid);
  std::size_t largest_ball = 0;
  for (const auto& b : ctx.pairs().balls()) largest_ball = std::max(largest_ball, b.size());
  std::ostringstream os;
  os << to_string(v.property) << " residual=" << v.witness.size() << " max ball size=" << largest_ball;
  return {v.property == Property::hns && v.witness.empty(), os.str()};
}

Outcome disk_twist() {
  const System sys = make_disk_twist();
  const SampleCloud cloud = sample_space(sys.space_ptr(), 26);
  const SensitivityContext ctx(sys, cloud, Horizon(1000));
  const std::vector<double> grid{std::ldexp(1.0, -5)};
  const auto le = le_check(ctx, grid);
  const auto ae = ae_check(ctx, grid);
  const auto eq = eq_epsilon(ctx, grid.front());
  double max_radius = 0.0;
  for (std::size_t i : eq.eq_points) max_radius = std::max(max_radius, std::hypot(cloud[i].x[0], cloud[i].x[1]));
  std::ostringstream os;
  os << to_string(le.property) << ", " << to_string(ae.property) << ", |Eq|=" << eq.eq_points.size()
     << " max|z| in Eq=" << max_radius << " (samples " << cloud.size() << ", r=" << cloud.r << ")";
  return {le.positive() && !ae.positive() && max_radius <= 0.1, os.str()};
}

Outcome takens() {
  const System base = make_fixed_points(2);
  const Point a = Point{{0.0, 0.0}, 0, 0};
  const Point b = Point{{0.0, 0.0}, 1, 0};
  const System sys = takens_suspension({a, a, a, b, b, b}, -3, base);
  const SampleCloud cloud = takens_cloud(sys, {a, b}, 20);
  const bool chain = chain_transitivity_probe(sys, cloud, cloud.r);
  const double fine = 5e-4;
  const SampleCloud fine_cloud = cloud.with_radius(fine);
  const SensitivityContext ctx(sys, fine_cloud, Horizon(64));
  const bool ae = ae_check(ctx, default_epsilon_grid(sys.space().diameter())).positive();
  const auto birkhoff = birkhoff_center_iteration(sys, fine_cloud, fine, Horizon(64));
  const auto& final_set = birkhoff.final_set();
  const bool two_fixed = final_set.size() == 2 && fine_cloud[final_set[0]].source != kArcSource &&
                         fine_cloud[final_set[1]].source != kArcSource;
  std::ostringstream os;
  os << "chain transitive at delta=" << cloud.r << ": " << chain << "; AE=" << ae << "; Birkhoff stages "
     << birkhoff.stages.size() << " final " << final_set.size() << " points";
  return {chain && ae && birkhoff.fixpoint && two_fixed, os.str()};
}

Outcome two_arrows() {
  const auto rep = verify_two_arrows(ContinuedFraction::golden(), 10000, 1e-3);
  std::size_t distinct = 0, agree = 0, baire = 0;
  double worst_factor = 0.0;
  for (const auto& row : rep.rows) {
    distinct += row.converged && row.limits_distinct;
    agree += row.factor_error <= rep.tol;
    baire += row.baire_minus && row.baire_plus;
    worst_factor = std::max(worst_factor, row.factor_error);
  }
  std::ostringstream os;
  os << "min shift distance=" << rep.min_shift_distance << "; gammas with distinct limits " << distinct << "/"
     << rep.rows.size() << ", factor agreement " << agree << " (worst " << worst_factor << "), baire " << baire;
  return {rep.claims_hold() && rep.rows.size() == 10, os.str()};
}

Outcome complexity() {
  const auto golden = ContinuedFraction::golden();
  const auto sturm = complexity_profile(Subshift::sturmian(golden), 12);
  const std::string mech = oracle::mechanical_word(golden.value(), 0.0L, 20000);
  bool sturm_ok = true;
  for (int n = 1; n <= 12; ++n) {
    sturm_ok = sturm_ok && sturm[n - 1] == static_cast<std::size_t>(n + 1) && oracle::factor_count(mech, n) == sturm[n - 1];
  }
  const auto morse = complexity_profile(morse_generator(), 4);
  const std::string tm = oracle::morse_prefix(1 << 14);
  bool morse_ok = morse == std::vector<std::size_t>{2, 4, 6, 10};
  for (int n = 1; n <= 4; ++n) morse_ok = morse_ok && oracle::factor_count(tm, n) == morse[n - 1];
  const auto cycle = complexity_profile(Subshift::sft(3, {"00", "02", "10", "11", "21", "22"}), 10);
  bool cycle_ok = true;
  for (int n = 1; n <= 10; ++n) cycle_ok = cycle_ok && cycle[n - 1] == 3;
  std::ostringstream os;
  os << "sturmian=" << sturm_ok << " morse=(" << morse[0] << "," << morse[1] << "," << morse[2] << "," << morse[3]
     << ") periodic saturation=" << cycle_ok;
  return {sturm_ok && morse_ok && cycle_ok, os.str()};
}

Outcome separability() {
  const System morse = shift_system("morse", 2, 64, {subshift_point(morse_generator())});
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  std::vector<ScheduleEntry> morse_schedule, rot_schedule;
  for (int depth : {1 << 6, 1 << 8, 1 << 10}) {
    morse_schedule.push_back({orbit_closure_sample(morse, Point::symbolic(0, 0), Horizon(depth), 0.0), Horizon(depth)});
    rot_schedule.push_back({orbit_closure_sample(rot, Point::real(0.0), Horizon(depth), 0.0), Horizon(depth)});
  }
  const auto mp = separability_profile(morse, morse_schedule, 0.5);
  const auto rp = separability_profile(rot, rot_schedule, 0.5);
  bool increasing = true, constant = true;
  std::ostringstream os;
  os << "morse nets";
  for (std::size_t i = 0; i < mp.rows.size(); ++i) {
    os << " " << mp.rows[i].net_size;
    if (i > 0) {
      increasing = increasing && mp.rows[i].net_size > mp.rows[i - 1].net_size;
      constant = constant && rp.rows[i].net_size == rp.rows[0].net_size;
    }
  }
  os << "; rotation nets";
  for (const auto& row : rp.rows) os << " " << row.net_size;
  return {increasing && constant, os.str()};
}

Outcome gallery_consistency() {
  const auto sweep = cli::gallery_sweep();
  std::size_t violations = 0;
  std::ostringstream os;
  for (const auto& run : sweep) {
    violations += run.violations.size();
    for (const auto& v : run.violations) os << run.id << ": " << v << "; ";
  }
  os << sweep.size() << " gallery runs, " << violations << " violations";
  return {violations == 0 && !sweep.empty(), os.str()};
}

Outcome determinism() {
  std::size_t mismatches = 0;
  const auto ids = cli::gallery_ids();
  for (const auto& id : ids) {
    set_thread_count(1);
    const std::string one = cli::verdict_fingerprint(id);
    set_thread_count(8);
    const std::string eight = cli::verdict_fingerprint(id);
    mismatches += one != eight;
  }
  set_thread_count(1);
  std::ostringstream os;
  os << ids.size() << " manifests, " << mismatches << " differ between 1 and 8 threads";
  return {mismatches == 0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fragmentation kernel agrees with subset enumeration", kernel_oracle},
      {"rotation is equicontinuous", equicontinuous_baseline},
      {"cat map and full shift are sensitive", sensitive_baselines},
      {"subshift RN classification table", classification_table},
      {"x^2 on the interval is HNS", interval_hns},
      {"disk twist is LE but not AE", disk_twist},
      {"Takens suspension is chain transitive and AE", takens},
      {"two-arrows enveloping semigroup", two_arrows},
      {"complexity profiles", complexity},
      {"separability growth", separability},
      {"gallery cross-module consistency", gallery_consistency},
      {"thread-count determinism", determinism},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !out.pass;
    std::printf("[%s] %2zu %s: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}

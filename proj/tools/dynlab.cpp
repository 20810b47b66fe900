// dynlab: batch front end. Exit 0 = completed, 1 = input error, 2 = invariant violation.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dynlab/cli/runner.hpp"

namespace {

struct Flags {
  std::string spec;
  std::string eps_grid;
  std::optional<double> r, delta, tol;
  std::optional<std::int64_t> horizon;
  std::optional<int> depth;
  std::optional<std::string> out;
  unsigned threads = 1;
  bool two_arrows = false;
};

void add_common(CLI::App* cmd, Flags& f, bool two_arrows) {
  cmd->add_option("--spec", f.spec, "system spec (JSON) or a previous run manifest")->required();
  cmd->add_option("--eps-grid", f.eps_grid, "comma-separated epsilon grid");
  cmd->add_option("--r", f.r, "ball radius");
  cmd->add_option("--delta", f.delta, "chain / wandering tolerance");
  cmd->add_option("--horizon", f.horizon, "iterate window N");
  cmd->add_option("--tol", f.tol, "envelope merge tolerance");
  cmd->add_option("--depth", f.depth, "classification / two-arrows depth");
  cmd->add_option("--out", f.out, "registry root (default $DYNLAB_REGISTRY or ./runs)");
  cmd->add_option("--threads", f.threads, "worker threads");
  if (two_arrows) cmd->add_flag("--two-arrows", f.two_arrows, "Sturmian two-arrows verification table");
}

dynlab::cli::Scales scales_of(const Flags& f) {
  dynlab::cli::Scales s;
  if (!f.eps_grid.empty()) s.eps_grid = dynlab::cli::parse_eps_grid(f.eps_grid);
  s.r = f.r;
  s.delta = f.delta;
  s.tol = f.tol;
  s.horizon = f.horizon;
  s.depth = f.depth;
  s.threads = f.threads;
  s.two_arrows = f.two_arrows;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynlab: sensitivity, fragmentation and enveloping-semigroup diagnostics"};
  app.require_subcommand(1);
  Flags f;
  CLI::App* analyze = app.add_subcommand("analyze", "NS/AE/LE/HNS verdicts, fragmentation and separability");
  CLI::App* classify = app.add_subcommand("classify", "countability / RN classification of a subshift");
  CLI::App* envelope = app.add_subcommand("envelope", "enveloping semigroup approximation");
  CLI::App* chain = app.add_subcommand("chain", "chain recurrence, Birkhoff center, prolongations");
  app.add_subcommand("gallery", "list gallery systems");
  add_common(analyze, f, false);
  add_common(classify, f, false);
  add_common(envelope, f, true);
  add_common(chain, f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("gallery")) {
      std::cout << dynlab::cli::gallery_listing();
      return 0;
    }
    const dynlab::cli::RunSpec spec = dynlab::cli::load_spec(f.spec);
    const dynlab::cli::Scales scales = scales_of(f);
    dynlab::cli::Bundle bundle;
    if (analyze->parsed()) bundle = dynlab::cli::cmd_analyze(spec, scales);
    else if (classify->parsed()) bundle = dynlab::cli::cmd_classify(spec, scales);
    else if (envelope->parsed()) bundle = dynlab::cli::cmd_envelope(spec, scales);
    else bundle = dynlab::cli::cmd_chain(spec, scales);
    const std::string dir = dynlab::cli::write_bundle(bundle, dynlab::cli::registry_root(f.out));
    std::cout << dir << "\n" << bundle.manifest["verdicts"].dump(2) << "\n";
    if (!bundle.violations.empty()) {
      for (const auto& v : bundle.violations) std::cerr << "invariant violation: " << v << "\n";
      return 2;
    }
    return 0;
  } catch (const dynlab::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dynlab::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dynlab::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const dynlab::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  }
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynlab/cli/spec.hpp"

namespace dynlab::cli {

inline constexpr const char* kToolVersion = "dynlab 0.3.0";

/// Command-line scales; unset ones fall back to the spec and gallery defaults.
struct Scales {
  std::optional<std::vector<double>> eps_grid;
  std::optional<double> r;
  std::optional<double> delta;
  std::optional<std::int64_t> horizon;
  std::optional<double> tol;
  std::optional<int> depth;
  unsigned threads = 1;
  bool two_arrows = false;
};

/// "0.5,0.25,0.125" -> descending list. Throws InputError.
std::vector<double> parse_eps_grid(const std::string& text);

struct Document {
  std::string path;  // relative to reports/
  std::string content;
};

struct Bundle {
  json manifest;
  std::vector<Document> documents;
  /// Cross-module consistency failures; nonempty means exit code 2.
  std::vector<std::string> violations;
};

Bundle cmd_analyze(const RunSpec& spec, const Scales& scales);
Bundle cmd_classify(const RunSpec& spec, const Scales& scales);
Bundle cmd_envelope(const RunSpec& spec, const Scales& scales);
Bundle cmd_chain(const RunSpec& spec, const Scales& scales);

/// Gallery ids with parameter schemas and the facts each reproduces.
std::string gallery_listing();

/// Registry root: `out` if given, else $DYNLAB_REGISTRY, else "runs".
std::string registry_root(const std::optional<std::string>& out);

/// Writes runs/<run-id>/{manifest.json, reports/*} atomically and returns the run directory.
/// Existing runs are never touched.
std::string write_bundle(Bundle& bundle, const std::string& root);

struct SweepRun {
  std::string id;
  std::vector<std::string> violations;
};

std::vector<std::string> gallery_ids();
/// analyze over every gallery spec; violations of HNS => NS, AE => NS and HNS <=> raw-iterate fragmentation.
std::vector<SweepRun> gallery_sweep();
/// Serialized verdict fields of analyze on a gallery spec at the current thread count.
std::string verdict_fingerprint(const std::string& id);

}  // namespace dynlab::cli

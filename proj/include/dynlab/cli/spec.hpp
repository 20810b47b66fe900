#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynlab/symbolic.hpp"

namespace dynlab::cli {

using json = nlohmann::json;

/// A parsed system-spec document: {system, params, density, horizon, r, delta, merge_tol}.
struct RunSpec {
  std::string system;
  json params = json::object();
  std::optional<int> density;
  std::optional<std::int64_t> horizon;
  std::optional<double> r;
  std::optional<double> delta;
  double merge_tol = 0.0;

  json to_json() const;
};

/// Parses a spec document. Errors carry line/column for syntax problems and
/// the offending key for schema problems. A run manifest is accepted too: its
/// echoed spec is used.
RunSpec parse_spec(const std::string& text, const std::string& origin = "<spec>");
RunSpec load_spec(const std::string& path);

/// A system with the sample it is analysed on.
struct Instance {
  System system;
  SampleCloud cloud;
  std::int64_t horizon = 0;
  double r = 0.0;
  double delta = 0.0;
  std::optional<Subshift> subshift;
  std::optional<TwoArrowsModel> two_arrows;
};

/// Builds the gallery system named by the spec and its default cloud.
Instance build_instance(const RunSpec& spec);

/// make_gallery_system: the system alone.
System make_gallery_system(const std::string& name, const json& params);

/// Subshift described by shift params (kind, alphabet, forbidden, rules, alpha, generator ...).
Subshift parse_subshift(const json& params);

struct GalleryEntry {
  std::string id;
  std::string citation;
  std::string params;
  std::string fact;
  /// Spec used by the gallery sweep.
  json spec;
};

const std::vector<GalleryEntry>& gallery();

}  // namespace dynlab::cli

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kqmolsa/descriptor_distance.hpp"

namespace kqmolsa {

/// Score weights: x on the area ratio, y on 1/(1+d). x + y = 1, 0 <= x < 0.5.
struct Weights {
  double x = 0.3;
  double y = 0.7;

  void validate() const;  // throws std::invalid_argument
  /// "x,y", e.g. "0.3,0.7".
  static Weights parse(std::string_view text);
};

struct SimilarityScore {
  double score = 0;
  double distance = 0;
  double area_ratio = 0;
  double scale_p = 0;
  bool converged = false;
  Weights weights;
};

/// x * area_ratio + y / (1 + distance).
double combine_score(double area_ratio, double distance, const Weights& w);
/// min(a1, a2) / max(a1, a2); throws std::invalid_argument for non-positive areas.
double area_ratio(double a1, double a2);

SimilarityScore score(const ShapeDescriptor& d1, const ShapeDescriptor& d2, const Weights& w = {},
                      const DistanceOptions& opts = {});

struct ScreenRow {
  std::string name;
  std::size_t library_index = 0;
  std::optional<SimilarityScore> result;  // empty: skipped
  std::string error;
};

struct ScreenOptions {
  Weights weights;
  DistanceOptions distance;
  std::size_t top_n = 0;  // 0: all rows
  unsigned jobs = 1;
};

/// Scores the query against every library entry. Rows are sorted by score
/// (descending, ties by name then input order); skipped rows follow, in input
/// order. top_n limits the scored rows only.
std::vector<ScreenRow> screen(const ShapeDescriptor& query, const std::vector<ShapeDescriptor>& library,
                              const ScreenOptions& opts = {});

}  // namespace kqmolsa

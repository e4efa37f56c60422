#include "kqmolsa/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

namespace kqmolsa {

void Weights::validate() const {
  if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("weights must be finite");
  if (std::abs(x + y - 1.0) > 1e-9) throw std::invalid_argument("weights must satisfy x + y = 1");
  if (x < 0 || x >= 0.5) throw std::invalid_argument("area weight x must satisfy 0 <= x < 0.5");
}

Weights Weights::parse(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw std::invalid_argument("weights must be given as x,y");
  auto number = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw std::invalid_argument("bad weight '" + std::string(s) + "'");
    return v;
  };
  Weights w{number(text.substr(0, comma)), number(text.substr(comma + 1))};
  w.validate();
  return w;
}

double combine_score(double ratio, double distance, const Weights& w) {
  return w.x * ratio + w.y / (1.0 + distance);
}

double area_ratio(double a1, double a2) {
  if (!(a1 > 0) || !(a2 > 0)) throw std::invalid_argument("surface areas must be positive");
  return std::min(a1, a2) / std::max(a1, a2);
}

SimilarityScore score(const ShapeDescriptor& d1, const ShapeDescriptor& d2, const Weights& w,
                      const DistanceOptions& opts) {
  w.validate();
  const DescriptorComparison cmp = compare_descriptors(d1, d2, opts);
  SimilarityScore s;
  s.weights = w;
  s.distance = cmp.alignment.distance;
  s.area_ratio = area_ratio(d1.area_original, d2.area_original);
  s.scale_p = cmp.alignment.scale;
  s.converged = cmp.alignment.converged;
  s.score = std::clamp(combine_score(s.area_ratio, s.distance, w), 0.0, 1.0);
  return s;
}

std::vector<ScreenRow> screen(const ShapeDescriptor& query, const std::vector<ShapeDescriptor>& library,
                              const ScreenOptions& opts) {
  opts.weights.validate();
  std::vector<ScreenRow> rows(library.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < library.size(); i = next++) {
      ScreenRow& row = rows[i];
      row.name = library[i].molecule_name;
      row.library_index = i;
      try {
        row.result = score(query, library[i], opts.weights, opts.distance);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(library.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<ScreenRow> scored, skipped;
  for (auto& r : rows) (r.result ? scored : skipped).push_back(std::move(r));
  std::stable_sort(scored.begin(), scored.end(), [](const ScreenRow& a, const ScreenRow& b) {
    if (a.result->score != b.result->score) return a.result->score > b.result->score;
    return a.name < b.name;
  });
  if (opts.top_n > 0 && scored.size() > opts.top_n) scored.resize(opts.top_n);
  scored.insert(scored.end(), std::make_move_iterator(skipped.begin()), std::make_move_iterator(skipped.end()));
  return scored;
}

}  // namespace kqmolsa

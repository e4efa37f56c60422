#include "kqmolsa/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "kqmolsa/descriptor_io.hpp"
#include "kqmolsa/pipeline.hpp"
#include "kqmolsa/selftest.hpp"
#include "kqmolsa/similarity.hpp"

namespace fs = std::filesystem;

namespace kqmolsa {

namespace {

struct Settings {
  int k = 1;
  int n_r = 15;
  int n_theta = 10;
  std::string weights = "0.3,0.7";
  std::string minimizer = "nelder-mead";
  std::string radii_path;
  unsigned jobs = 1;
  std::string format = "text";
  std::string output;
  std::size_t top = 0;
  std::uint64_t seed = 12345;
};

void add_quadrature_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--k", s.k, "quantization level")->check(CLI::Range(1, 8));
  cmd->add_option("--nr", s.n_r, "radial quadrature points")->check(CLI::Range(2, 100000));
  cmd->add_option("--ntheta", s.n_theta, "angular quadrature points")->check(CLI::Range(2, 100000));
  cmd->add_option("--radii", s.radii_path, "van der Waals radii override file (SYMBOL value per line)");
}

void add_compare_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--weights", s.weights, "score weights x,y (area, shape)");
  cmd->add_option("--minimizer", s.minimizer, "alignment search")
      ->check(CLI::IsMember({"nelder-mead", "powell"}));
  cmd->add_option("--format", s.format, "report format")->check(CLI::IsMember({"text", "csv", "json"}));
}

PipelineOptions pipeline_options(const Settings& s) {
  PipelineOptions o;
  o.k = s.k;
  o.quadrature.n_r = s.n_r;
  o.quadrature.n_theta = s.n_theta;
  o.quadrature.validate();
  return o;
}

DistanceOptions distance_options(const Settings& s) {
  DistanceOptions o;
  o.minimizer = s.minimizer == "powell" ? Minimizer::Powell : Minimizer::NelderMead;
  return o;
}

// Flag beats environment beats the built-in Bondi table.
RadiiTable radii_table(const Settings& s) {
  std::string path = s.radii_path;
  if (path.empty())
    if (const char* env = std::getenv("KQ_RADII_TABLE"); env && *env) path = env;
  return path.empty() ? RadiiTable::bondi() : RadiiTable::from_file(path);
}

bool is_descriptor_file(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.size() > 5 && name.compare(name.size() - 5, 5, ".json") == 0;
}

struct Loaded {
  std::string label;  // molecule name or "<file>#<record>"
  std::optional<ShapeDescriptor> descriptor;
  std::string error;
};

// Run f(i) for i in [0, n) on up to `jobs` threads.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& f) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<Loaded> describe_sdf(const std::string& path, const Settings& s) {
  const auto mols = read_sdf_file(path);
  if (mols.empty()) throw ParseError(path + ": no molecule records");
  const RadiiTable radii = radii_table(s);
  const PipelineOptions opts = pipeline_options(s);
  std::vector<Loaded> out(mols.size());
  parallel_for(mols.size(), s.jobs, [&](std::size_t i) {
    Loaded& l = out[i];
    l.label = mols[i].name.empty() ? fs::path(path).stem().string() + "#" + std::to_string(i + 1) : mols[i].name;
    try {
      l.descriptor = describe_molecule(mols[i], radii, opts);
      if (l.descriptor->molecule_name.empty()) l.descriptor->molecule_name = l.label;
    } catch (const RejectedMolecule& e) {
      l.error = std::string("rejected: ") + e.what();
    } catch (const std::exception& e) {
      l.error = e.what();
    }
  });
  return out;
}

// .kq.json file, directory of .kq.json files, or SDF.
std::vector<Loaded> load_inputs(const std::string& path, const Settings& s) {
  const fs::path p(path);
  if (!fs::exists(p)) throw Error("no such file: " + path);
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(p))
      if (e.is_regular_file() && is_descriptor_file(e.path())) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(path + ": directory holds no .json descriptor files");
    std::vector<Loaded> out;
    for (const auto& f : files) {
      Loaded l;
      l.label = f.filename().string();
      try {
        l.descriptor = read_descriptor(f.string());
        if (l.descriptor->molecule_name.empty()) l.descriptor->molecule_name = f.stem().stem().string();
        l.label = l.descriptor->molecule_name;
      } catch (const std::exception& e) {
        l.error = e.what();
      }
      out.push_back(std::move(l));
    }
    return out;
  }
  if (is_descriptor_file(p)) {
    Loaded l;
    l.descriptor = read_descriptor(path);
    if (l.descriptor->molecule_name.empty()) l.descriptor->molecule_name = p.stem().stem().string();
    l.label = l.descriptor->molecule_name;
    return {std::move(l)};
  }
  return describe_sdf(path, s);
}

std::string num(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

const char* kCsvHeader = "name,score,distance,area_ratio,scale_p,converged";

std::string csv_row(const std::string& name, const SimilarityScore& s) {
  return csv_field(name) + "," + num(s.score) + "," + num(s.distance) + "," + num(s.area_ratio) + "," +
         num(s.scale_p) + "," + (s.converged ? "true" : "false");
}

nlohmann::json json_row(const std::string& name, const SimilarityScore& s) {
  return {{"name", name},           {"score", s.score},     {"distance", s.distance},
          {"area_ratio", s.area_ratio}, {"scale_p", s.scale_p}, {"converged", s.converged}};
}

std::string safe_stem(const std::string& name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  while (!out.empty() && out.front() == '.') out.erase(out.begin());
  return out.empty() ? "molecule" : out;
}

int cmd_descriptor(const std::string& input, const Settings& s, std::ostream& out, std::ostream& err) {
  const auto loaded = describe_sdf(input, s);
  const fs::path dir = s.output.empty() ? fs::path(".") : fs::path(s.output);
  fs::create_directories(dir);
  std::set<std::string> used;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const Loaded& l = loaded[i];
    if (!l.descriptor) {
      err << l.label << ": " << l.error << '\n';
      continue;
    }
    for (const auto& w : l.descriptor->warnings) err << l.label << ": warning: " << w << '\n';
    std::string stem = safe_stem(l.label);
    if (!used.insert(stem).second) {
      stem += "_" + std::to_string(i + 1);
      used.insert(stem);
    }
    const fs::path file = dir / (stem + ".kq.json");
    write_descriptor(*l.descriptor, file.string());
    out << file.string() << '\n';
    ++ok;
  }
  if (ok == 0) {
    err << "no descriptor written: every molecule was rejected\n";
    return 1;
  }
  return ok == loaded.size() ? 0 : 2;
}

ShapeDescriptor single_input(const std::string& path, const Settings& s, std::ostream& err) {
  auto loaded = load_inputs(path, s);
  if (loaded.size() > 1) err << path << ": " << loaded.size() << " records, using the first\n";
  Loaded& l = loaded.front();
  if (!l.descriptor) throw Error(l.label + ": " + l.error);
  return std::move(*l.descriptor);
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const Settings& s, std::ostream& out,
                std::ostream& err) {
  const Weights w = Weights::parse(s.weights);
  const ShapeDescriptor a = single_input(a_path, s, err);
  const ShapeDescriptor b = single_input(b_path, s, err);
  if (a.k != b.k) {
    err << "quantization level mismatch: " << a_path << " has k=" << a.k << ", " << b_path << " has k=" << b.k
        << '\n';
    return 1;
  }
  const SimilarityScore sc = score(a, b, w, distance_options(s));
  if (s.format == "csv") {
    out << kCsvHeader << '\n' << csv_row(b.molecule_name, sc) << '\n';
  } else if (s.format == "json") {
    nlohmann::json j = json_row(b.molecule_name, sc);
    j["query"] = a.molecule_name;
    j["k"] = a.k;
    out << j.dump(2) << '\n';
  } else {
    out << "query:      " << a.molecule_name << '\n'
        << "target:     " << b.molecule_name << '\n'
        << "k:          " << a.k << '\n'
        << "score:      " << num(sc.score, 3) << '\n'
        << "distance:   " << num(sc.distance) << '\n'
        << "area_ratio: " << num(sc.area_ratio) << '\n'
        << "scale_p:    " << num(sc.scale_p) << '\n'
        << "converged:  " << (sc.converged ? "yes" : "no") << '\n';
  }
  return 0;
}

int cmd_screen(const std::string& query_path, const std::string& library_path, const Settings& s,
               std::ostream& out, std::ostream& err) {
  ScreenOptions so;
  so.weights = Weights::parse(s.weights);
  so.distance = distance_options(s);
  so.top_n = s.top;
  so.jobs = s.jobs;
  const ShapeDescriptor query = single_input(query_path, s, err);

  const auto loaded = load_inputs(library_path, s);
  std::vector<ShapeDescriptor> library;
  std::vector<std::pair<std::string, std::string>> failed;  // label, reason
  for (const auto& l : loaded) {
    if (l.descriptor) {
      if (l.descriptor->k != query.k)
        failed.emplace_back(l.label, "quantization level mismatch (k=" + std::to_string(l.descriptor->k) + ")");
      else
        library.push_back(*l.descriptor);
    } else {
      failed.emplace_back(l.label, l.error);
    }
  }
  const auto rows = screen(query, library, so);
  for (const auto& r : rows)
    if (!r.result) failed.emplace_back(r.name, r.error);

  std::ostringstream report;
  if (s.format == "json") {
    nlohmann::json j = {{"query", query.molecule_name}, {"k", query.k}, {"rows", nlohmann::json::array()},
                        {"skipped", nlohmann::json::array()}};
    for (const auto& r : rows)
      if (r.result) j["rows"].push_back(json_row(r.name, *r.result));
    for (const auto& [name, why] : failed) j["skipped"].push_back({{"name", name}, {"error", why}});
    report << j.dump(2) << '\n';
  } else if (s.format == "csv") {
    report << kCsvHeader << '\n';
    for (const auto& r : rows)
      if (r.result) report << csv_row(r.name, *r.result) << '\n';
  } else {
    int rank = 0;
    for (const auto& r : rows)
      if (r.result)
        report << ++rank << ". " << r.name << "  score " << num(r.result->score, 3) << "  distance "
               << num(r.result->distance, 4) << "  area_ratio " << num(r.result->area_ratio, 3)
               << (r.result->converged ? "" : "  (not converged)") << '\n';
  }
  if (s.output.empty()) {
    out << report.str();
  } else {
    std::ofstream f(s.output);
    if (!f) throw Error("cannot open " + s.output + " for writing");
    f << report.str();
  }
  for (const auto& [name, why] : failed) err << "skipped " << name << ": " << why << '\n';
  if (library.empty()) {
    err << "no usable library entries\n";
    return 1;
  }
  return failed.empty() ? 0 : 2;
}

int cmd_selftest(const Settings& s, std::ostream& out) {
  SelfTestOptions o;
  o.quadrature.n_r = s.n_r;
  o.quadrature.n_theta = s.n_theta;
  o.seed = s.seed;
  return print_selftest(run_selftest(o), out) ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"KQMolSA: molecular shape descriptors from Kahler quantization"};
  app.require_subcommand(1);
  Settings s;
  std::string input, query, library;
  std::vector<std::string> pair;

  auto* desc = app.add_subcommand("descriptor", "write one .kq.json descriptor per SDF record");
  desc->add_option("--input,input", input, "SDF file")->required();
  desc->add_option("--output", s.output, "output directory (default: current directory)");
  desc->add_option("--jobs", s.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  add_quadrature_flags(desc, s);

  auto* cmp = app.add_subcommand("compare", "score two molecules (SDF or .kq.json)");
  cmp->add_option("inputs", pair, "two inputs")->expected(0, 2);
  cmp->add_option("--query", query, "first input");
  cmp->add_option("--library", library, "second input");
  add_quadrature_flags(cmp, s);
  add_compare_flags(cmp, s);

  auto* scr = app.add_subcommand("screen", "rank a library against a query");
  scr->add_option("--query", query, "query molecule (SDF or .kq.json)")->required();
  scr->add_option("--library", library, "SDF, .kq.json or a directory of .kq.json files")->required();
  scr->add_option("--top", s.top, "keep the best N rows (0: all)");
  scr->add_option("--jobs", s.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  scr->add_option("--output", s.output, "write the report here instead of stdout");
  add_quadrature_flags(scr, s);
  add_compare_flags(scr, s);

  auto* st = app.add_subcommand("selftest", "run the built-in oracle checks");
  st->add_option("--nr", s.n_r, "radial quadrature points")->check(CLI::Range(2, 100000));
  st->add_option("--ntheta", s.n_theta, "angular quadrature points")->check(CLI::Range(2, 100000));
  st->add_option("--seed", s.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (*desc) return cmd_descriptor(input, s, out, err);
    if (*cmp) {
      std::vector<std::string> paths = pair;
      if (!query.empty()) paths.insert(paths.begin(), query);
      if (!library.empty()) paths.push_back(library);
      if (paths.size() != 2) {
        err << "compare needs exactly two inputs\n";
        return 1;
      }
      return cmd_compare(paths[0], paths[1], s, out, err);
    }
    if (*scr) return cmd_screen(query, library, s, out, err);
    if (*st) return cmd_selftest(s, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace kqmolsa

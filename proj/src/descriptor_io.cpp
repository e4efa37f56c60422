#include "kqmolsa/descriptor_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kqmolsa {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) throw Error("cannot serialize a non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

void write_matrix(std::ostringstream& out, const Eigen::MatrixXcd& M, const char* indent) {
  out << "[\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    out << indent << "  [";
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ", ";
      out << '[' << num(M(i, j).real()) << ", " << num(M(i, j).imag()) << ']';
    }
    out << (i + 1 < M.rows() ? "],\n" : "]\n");
  }
  out << indent << ']';
}

const char* hole_name(HoleMode h) { return h == HoleMode::ClipRays ? "clip-rays" : "zero-nodes"; }
const char* radial_name(RadialRule r) { return r == RadialRule::EqualArea ? "equal-area" : "uniform"; }

Eigen::MatrixXcd read_matrix(const nlohmann::json& j, Eigen::Index n, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
    throw ParseError(std::string(what) + ": expected " + std::to_string(n) + " rows");
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ParseError(std::string(what) + ": row " + std::to_string(i) + " has the wrong length");
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError(std::string(what) + ": entries must be [re, im] pairs");
      M(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return M;
}

}  // namespace

std::string descriptor_to_json(const ShapeDescriptor& d) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"schema_version\": " << kDescriptorSchemaVersion << ",\n";
  out << "  \"molecule_name\": " << quoted(d.molecule_name) << ",\n";
  out << "  \"k\": " << d.k << ",\n";
  out << "  \"n_spheres\": " << d.n_spheres << ",\n";
  out << "  \"area_original\": " << num(d.area_original) << ",\n";
  out << "  \"area_check\": " << num(d.area_check) << ",\n";
  out << "  \"quadrature\": {\"n_r\": " << d.quadrature.n_r << ", \"n_theta\": " << d.quadrature.n_theta
      << ", \"holes\": \"" << hole_name(d.quadrature.holes) << "\", \"radial\": \""
      << radial_name(d.quadrature.radial) << "\"},\n";
  out << "  \"warnings\": [";
  for (std::size_t i = 0; i < d.warnings.size(); ++i) out << (i ? ", " : "") << quoted(d.warnings[i]);
  out << "],\n";
  if (d.seed_k1) {
    out << "  \"seed_matrix_k1\": ";
    write_matrix(out, *d.seed_k1, "  ");
    out << ",\n";
  }
  out << "  \"matrix\": ";
  write_matrix(out, d.M, "  ");
  out << "\n}\n";
  return out.str();
}

ShapeDescriptor descriptor_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("descriptor: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ParseError("descriptor: top level must be an object");
    const int version = j.at("schema_version").get<int>();
    if (version != kDescriptorSchemaVersion)
      throw ParseError("descriptor: unsupported schema_version " + std::to_string(version));
    ShapeDescriptor d;
    d.k = j.at("k").get<int>();
    if (d.k < 1) throw ParseError("descriptor: k must be >= 1");
    d.molecule_name = j.value("molecule_name", "");
    d.n_spheres = j.value("n_spheres", 0);
    d.area_original = j.at("area_original").get<double>();
    d.area_check = j.value("area_check", 0.0);
    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      d.quadrature.n_r = q.value("n_r", d.quadrature.n_r);
      d.quadrature.n_theta = q.value("n_theta", d.quadrature.n_theta);
      if (q.contains("holes")) {
        const std::string h = q["holes"].get<std::string>();
        if (h != "zero-nodes" && h != "clip-rays") throw ParseError("descriptor: unknown hole mode '" + h + "'");
        d.quadrature.holes = h == "zero-nodes" ? HoleMode::ZeroNodes : HoleMode::ClipRays;
      }
      if (q.contains("radial")) {
        const std::string r = q["radial"].get<std::string>();
        if (r != "uniform" && r != "equal-area") throw ParseError("descriptor: unknown radial rule '" + r + "'");
        d.quadrature.radial = r == "uniform" ? RadialRule::Uniform : RadialRule::EqualArea;
      }
    }
    if (j.contains("warnings"))
      for (const auto& w : j["warnings"]) d.warnings.push_back(w.get<std::string>());
    d.M = read_matrix(j.at("matrix"), 2 * d.k + 1, "matrix");
    if (j.contains("seed_matrix_k1")) d.seed_k1 = read_matrix(j["seed_matrix_k1"], 3, "seed_matrix_k1");
    if (!(d.area_original > 0)) throw ParseError("descriptor: area_original must be positive");
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("descriptor: ") + e.what());
  }
}

void write_descriptor(const ShapeDescriptor& d, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << descriptor_to_json(d);
  if (!f) throw Error("write failed: " + path);
}

ShapeDescriptor read_descriptor(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return descriptor_from_json(ss.str());
}

}  // namespace kqmolsa

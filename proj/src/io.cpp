#include "mrwspec/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mrwspec {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  return is;
}

void write_meta(std::ofstream& os, const HeaderMeta& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << "\n";
}

// strips "# key = value" lines off the front, leaves `is` at the column line
HeaderMeta read_meta(std::ifstream& is, std::string& first_data_line) {
  HeaderMeta meta;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') {
      first_data_line = line;
      break;
    }
    std::string body = line.substr(1);
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    meta.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return meta;
}

double parse_double(const std::string& tok) {
  // from_chars rejects "nan"/"inf" spellings only on some libcs; strtod takes all
  return std::strtod(tok.c_str(), nullptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(line);
  while (std::getline(is, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_eigenvalues_csv(const std::filesystem::path& path,
                           std::span<const std::vector<double>> per_sample,
                           const HeaderMeta& meta) {
  auto os = open_out(path);
  write_meta(os, meta);
  os << "sample_id,eigenvalue\n";
  for (std::size_t s = 0; s < per_sample.size(); ++s)
    for (double lam : per_sample[s])
      os << s << ',' << format_double(lam) << '\n';
}

void write_histogram_csv(const std::filesystem::path& path,
                         const EsdHistogram& h, const HeaderMeta& meta) {
  auto os = open_out(path);
  write_meta(os, meta);
  os << "bin_left,bin_right,probability\n";
  for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
    os << format_double(h.bin_edges[b]) << ',' << format_double(h.bin_edges[b + 1])
       << ',' << format_double(h.probabilities[b]) << '\n';
}

void write_curve_csv(const std::filesystem::path& path, const DensityCurve& c,
                     const std::string& x_name, const HeaderMeta& meta) {
  auto os = open_out(path);
  write_meta(os, meta);
  os << x_name << ",density\n";
  for (std::size_t j = 0; j < c.x_points.size(); ++j)
    os << format_double(c.x_points[j]) << ',' << format_double(c.values[j])
       << '\n';
}

void write_k_csv(const std::filesystem::path& path, const KFunction& k,
                 const HeaderMeta& meta) {
  auto os = open_out(path);
  write_meta(os, meta);
  os << "t,re_k,im_k\n";
  for (std::size_t j = 0; j < k.values.size(); ++j)
    os << format_double(k.config.k_grid.center(static_cast<int>(j))) << ','
       << format_double(k.values[j].real()) << ','
       << format_double(k.values[j].imag()) << '\n';
}

EigenvaluesFile read_eigenvalues_csv(const std::filesystem::path& path) {
  auto is = open_in(path);
  EigenvaluesFile out;
  std::string line;
  out.meta = read_meta(is, line);  // `line` now holds the column names
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto toks = split_csv(line);
    if (toks.size() != 2)
      throw std::runtime_error("bad eigenvalues row: " + line);
    out.sample_ids.push_back(std::atoi(toks[0].c_str()));
    out.eigenvalues.push_back(parse_double(toks[1]));
  }
  return out;
}

HistogramFile read_histogram_csv(const std::filesystem::path& path) {
  auto is = open_in(path);
  HistogramFile out;
  std::string line;
  out.meta = read_meta(is, line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto toks = split_csv(line);
    if (toks.size() != 3) throw std::runtime_error("bad histogram row: " + line);
    const double left = parse_double(toks[0]);
    const double right = parse_double(toks[1]);
    if (out.histogram.bin_edges.empty())
      out.histogram.bin_edges.push_back(left);
    out.histogram.bin_edges.push_back(right);
    out.histogram.probabilities.push_back(parse_double(toks[2]));
  }
  return out;
}

CurveFile read_curve_csv(const std::filesystem::path& path) {
  auto is = open_in(path);
  CurveFile out;
  std::string line;
  out.meta = read_meta(is, line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto toks = split_csv(line);
    if (toks.size() != 2) throw std::runtime_error("bad curve row: " + line);
    const double v = parse_double(toks[1]);
    out.curve.x_points.push_back(parse_double(toks[0]));
    out.curve.values.push_back(v);
    out.curve.converged.push_back(std::isfinite(v) ? 1 : 0);
  }
  for (const auto& [k, v] : out.meta)
    if (k == "eps_im") out.curve.eps_im = parse_double(v);
  for (std::size_t j = 0; j + 1 < out.curve.x_points.size(); ++j) {
    if (!out.curve.converged[j] || !out.curve.converged[j + 1]) continue;
    out.curve.mass += 0.5 * (out.curve.values[j] + out.curve.values[j + 1]) *
                      (out.curve.x_points[j + 1] - out.curve.x_points[j]);
  }
  return out;
}

void write_diagnostics_json(const std::filesystem::path& path,
                            std::span<const PointDiag> diags,
                            const HeaderMeta& run_info) {
  nlohmann::ordered_json root;
  auto& info = root["run_info"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : run_info) info[k] = v;
  auto& pts = root["points"] = nlohmann::ordered_json::array();
  for (const auto& d : diags) {
    nlohmann::ordered_json p;
    p["z"] = {{"re", d.z.real()}, {"im", d.z.imag()}};
    p["iterations"] = d.iterations;
    p["residual"] = d.residual;
    p["mu2"] = {{"re", d.mu2.real()}, {"im", d.mu2.imag()}};
    p["clipped_embedding_mass"] = d.clipped_embedding_mass;
    p["converged"] = d.converged;
    p["richardson_stage"] = d.richardson_stage;
    pts.push_back(std::move(p));
  }
  auto os = open_out(path);
  os << root.dump(2) << '\n';
}

void write_manifest(const std::filesystem::path& path,
                    const std::string& command, const HeaderMeta& entries) {
  auto os = open_out(path);
  os << "# command: " << command << "\n";
  for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
}

}  // namespace mrwspec

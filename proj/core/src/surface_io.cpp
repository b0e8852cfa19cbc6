#include "parsio/surface_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace parsio {

namespace {

constexpr const char* kTag = "# parsio-surface v1";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("surface csv: bad number '" + s + "'");
  return v;
}

}  // namespace

void write_surface_csv(const Surface& s, std::ostream& out) {
  const auto& g = s.grid();
  const int n = g.n();
  out << kTag << '\n';
  out << "# n=" << n << " h=" << fmt(g.h()) << " counts=";
  for (int a = 0; a < n; ++a) out << (a ? "," : "") << g.count(a);
  out << " M=" << fmt(s.M) << " periodic=" << (s.periodic ? 1 : 0) << " label=" << s.label << '\n';
  out << "index";
  for (int a = 0; a < n - 1; ++a) out << ",x" << a + 1;
  out << ",t,A";
  for (int a = 0; a < n - 1; ++a) out << ",dA_dx" << a + 1;
  out << ",dA_dt,DnA\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.point(i);
    out << i;
    for (int a = 0; a < n - 1; ++a) out << ',' << fmt(p.x[a]);
    out << ',' << fmt(p.t) << ',' << fmt(s.A[i]);
    for (int a = 0; a < n - 1; ++a) out << ',' << fmt(s.grad[a][i]);
    out << ',' << fmt(s.dt[i]) << ',' << fmt(s.dn[i]) << '\n';
  }
}

void write_surface_csv(const Surface& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_surface_csv(s, out);
}

Surface read_surface_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTag) {
    throw std::invalid_argument("surface csv: missing format tag");
  }
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw std::invalid_argument("surface csv: missing parameter line");
  }
  std::map<std::string, std::string> params;
  {
    const std::string body = line.substr(2);
    const auto label_pos = body.find(" label=");
    const std::string head = label_pos == std::string::npos ? body : body.substr(0, label_pos);
    if (label_pos != std::string::npos) params["label"] = body.substr(label_pos + 7);
    for (const auto& tok : split(head, ' ')) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      params[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  for (const char* key : {"n", "h", "counts", "M", "periodic"}) {
    if (!params.count(key)) throw std::invalid_argument(std::string("surface csv: missing ") + key);
  }
  const int n = std::stoi(params["n"]);
  std::vector<int> counts;
  for (const auto& c : split(params["counts"], ',')) counts.push_back(std::stoi(c));
  const ParabolicGrid grid(n, parse_double(params["h"]), counts);
  Surface s = zero_surface(grid);
  s.M = parse_double(params["M"]);
  s.periodic = params["periodic"] == "1";
  s.label = params["label"];
  std::getline(in, line);  // column names
  const std::size_t columns = 1 + n + 1 + (n - 1) + 2;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("surface csv: truncated data");
    const auto cells = split(line, ',');
    if (cells.size() != columns) throw std::invalid_argument("surface csv: wrong column count");
    if (std::stoull(cells[0]) != i) throw std::invalid_argument("surface csv: rows out of order");
    std::size_t c = 1 + n;
    s.A[i] = parse_double(cells[c++]);
    for (int a = 0; a < n - 1; ++a) s.grad[a][i] = parse_double(cells[c++]);
    s.dt[i] = parse_double(cells[c++]);
    s.dn[i] = parse_double(cells[c++]);
  }
  return s;
}

Surface read_surface_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_surface_csv(in);
}

}  // namespace parsio

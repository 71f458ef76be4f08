#include "ricci/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ricci/error.hpp"

namespace ricci::io {

namespace {
std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::Io, "cannot open " + path.string());
  return os;
}
}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<Eigen::ArrayXd>& columns) {
  if (header.size() != columns.size()) throw Error(Errc::InvalidArgument, "header/column mismatch");
  const Eigen::Index n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) throw Error(Errc::InvalidArgument, "ragged columns");
  std::ofstream os = open_out(path);
  for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << quote(header[j]);
  os << "\r\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << format_number(columns[j](i));
    os << "\r\n";
  }
}

const Eigen::ArrayXd& CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return columns[j];
  throw Error(Errc::InvalidArgument, "no column " + name);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::Io, "cannot open " + path.string());
  CsvTable t;
  std::string line;
  auto split = [](std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char c = s[i];
      if (c == '"') {
        if (quoted && i + 1 < s.size() && s[i + 1] == '"') {
          out.back() += '"';
          ++i;
        } else {
          quoted = !quoted;
        }
      } else if (c == ',' && !quoted) {
        out.emplace_back();
      } else {
        out.back() += c;
      }
    }
    return out;
  };
  if (!std::getline(is, line)) throw Error(Errc::Io, "empty csv " + path.string());
  t.header = split(line);
  std::vector<std::vector<double>> cols(t.header.size());
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw Error(Errc::Io, "ragged row in " + path.string());
    for (std::size_t j = 0; j < cells.size(); ++j) cols[j].push_back(std::stod(cells[j]));
  }
  for (auto& c : cols) t.columns.push_back(Eigen::Map<Eigen::ArrayXd>(c.data(), Eigen::Index(c.size())));
  return t;
}

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& p) {
  write_csv(path, {"rho", "h"}, {p.rho, p.h});
}

RadialProfile read_profile_csv(const std::filesystem::path& path) {
  CsvTable t = read_csv(path);
  RadialProfile p;
  p.rho = t.column("rho");
  p.h = t.column("h");
  p.validate();
  return p;
}

void write_conformal_csv(const std::filesystem::path& path, const Eigen::ArrayXd& r, const Eigen::ArrayXd& u) {
  write_csv(path, {"r", "u"}, {r, u});
}

void write_obj(const std::filesystem::path& path, const Embedding& e, int theta_res) {
  if (theta_res < 3) throw Error(Errc::InvalidArgument, "theta resolution must be at least 3");
  const Eigen::Index n = e.h.size();
  std::ofstream os = open_out(path);
  os << "# surface of revolution, " << n << " profile nodes x " << theta_res << " meridians\n";
  std::vector<std::vector<long>> ring(n);
  long next = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (e.h(i) == 0.0) {
      os << "v 0 0 " << format_number(e.z(i)) << "\n";
      ring[i].assign(theta_res, next++);
      continue;
    }
    for (int j = 0; j < theta_res; ++j) {
      const double th = 2.0 * std::numbers::pi * j / theta_res;
      os << "v " << format_number(e.h(i) * std::cos(th)) << " " << format_number(e.h(i) * std::sin(th)) << " "
         << format_number(e.z(i)) << "\n";
      ring[i].push_back(next++);
    }
  }
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    for (int j = 0; j < theta_res; ++j) {
      const int k = (j + 1) % theta_res;
      const long a = ring[i][j], b = ring[i][k], c = ring[i + 1][k], d = ring[i + 1][j];
      if (a != b) os << "f " << a << " " << b << " " << c << "\n";
      if (c != d) os << "f " << a << " " << c << " " << d << "\n";
    }
  }
}

}  // namespace ricci::io

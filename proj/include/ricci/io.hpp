#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

#include "ricci/geom.hpp"

namespace ricci::io {

// RFC-4180 CSV, every value printed with %.12e
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<Eigen::ArrayXd>& columns);
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<Eigen::ArrayXd> columns;
  const Eigen::ArrayXd& column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& p);
RadialProfile read_profile_csv(const std::filesystem::path& path);
void write_conformal_csv(const std::filesystem::path& path, const Eigen::ArrayXd& r, const Eigen::ArrayXd& u);

// surface of revolution, closed tips collapse to a single pole vertex, CCW seen from outside
void write_obj(const std::filesystem::path& path, const Embedding& e, int theta_res);

}  // namespace ricci::io

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ricci/geom.hpp"

namespace ricci::cli {

// exit codes: 0 ok, 1 numerical/domain failure, 2 usage error
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "sphere", "cigar", "flatcone:beta", "football:a1,a2" (degrees), "teardrop:a,b"
RadialProfile preset_profile(const std::string& spec, std::size_t n);

}  // namespace ricci::cli

#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "vcomp/equilibria.hpp"
#include "vcomp/learning.hpp"
#include "vcomp/smoothness.hpp"

namespace vcomp::report {

using Json = nlohmann::ordered_json;

/// {"exact": "p/q", "approx": decimal}
Json number(const Rational& r);
Json number(const BigRational& r);

std::string sha256_hex(const std::string& bytes);

/// Named view of a game for rendering bundles and profiles.
struct Names {
  std::vector<std::string> items;
  std::vector<std::string> agents;
};

Json outcome(const Outcome& o, const Names& names);
Json profile(const Game& game, const Profile& p, const Names& names);
Json distribution(const Game& game, const JointDistribution& d, const Names& names);
Json poa(const Game& game, const PoaReport& r, const Names& names, bool cce);
Json smoothness(const SmoothnessReport& r, const Names& names);
Json hedge(const Game& game, const RegretTrace& trace, const Theorem3Check& check, const EmpiricalCce& empirical);

}  // namespace vcomp::report

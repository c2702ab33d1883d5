#pragma once

#include "dre/model/io.hpp"
#include "dre/model/parametrize.hpp"

#include <string>
#include <vector>

namespace fixtures {

inline std::string path(const std::string& rel) { return std::string(DRE_DATA_DIR) + "/" + rel; }
inline std::string text(const std::string& rel) { return dre::model::read_file(path(rel)); }

/// base.txt + plan.tt + directives.txt of a fixture directory.
inline dre::model::ParametrizedPair load(const std::string& dir) {
  auto base = dre::model::parse_problem(text(dir + "/base.txt"));
  auto tt = dre::model::parse_time_triggered_plan(text(dir + "/plan.tt"));
  auto directives = dre::model::parse_directives(text(dir + "/directives.txt"));
  return dre::model::parametrize(base, tt, directives);
}

inline const std::vector<std::string>& all() {
  static const std::vector<std::string> dirs = {"unit", "twoact", "delivery", "delivery-battery"};
  return dirs;
}

}  // namespace fixtures

#pragma once

#include "dre/irr/irr.hpp"
#include "dre/model/problem.hpp"

#include "json.hpp"

namespace dre::irr {

nlohmann::json dre_to_json(const model::ParametrizedProblem& problem, const IrrResult& result,
                           const IrrOptions& options);
/// Reads the region back from a DRE document.
Dre dre_from_json(const nlohmann::json& doc);

nlohmann::json snapshot_to_json(const Snapshot& s);
Snapshot snapshot_from_json(const nlohmann::json& j);

}  // namespace dre::irr

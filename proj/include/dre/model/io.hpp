#pragma once

#include "dre/model/plan.hpp"
#include "dre/model/problem.hpp"

#include "json.hpp"
#include <string>
#include <string_view>

namespace dre::model {

/// Line-oriented documents; grammar in docs/formats.md.
ParametrizedProblem parse_problem(std::string_view text);
std::string print_problem(const ParametrizedProblem& problem);

/// Parses and checks a plan against its problem: declared actions and
/// parameters, complete instances, and a nominal schedule satisfying every
/// constraint (InconsistentPlan otherwise).
ParametrizedSTNPlan parse_plan(std::string_view text, const ParametrizedProblem& problem);
std::string print_plan(const ParametrizedSTNPlan& plan);

/// `start: (action) [duration]` per line; ';' starts a comment.
TimeTriggeredPlan parse_time_triggered_plan(std::string_view text);
std::string print_time_triggered_plan(const TimeTriggeredPlan& plan);

nlohmann::json problem_to_json(const ParametrizedProblem& problem);
ParametrizedProblem problem_from_json(const nlohmann::json& doc);
nlohmann::json plan_to_json(const ParametrizedSTNPlan& plan);
ParametrizedSTNPlan plan_from_json(const nlohmann::json& doc, const ParametrizedProblem& problem);

/// Structural checks shared by both document formats.
void check_problem(const ParametrizedProblem& problem);
void check_plan(const ParametrizedSTNPlan& plan, const ParametrizedProblem& problem);

std::string read_file(const std::string& path);

}  // namespace dre::model

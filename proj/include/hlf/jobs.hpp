#pragma once

// Task dispatch shared by the command line, job files and the Python module.

#include <string>

#include "hlf/basic_open.hpp"

namespace hlf {

// Kinds: valuation, member, converge, units, points-member, points-map,
// points-converge, weil, witness-subgroup, witness-product, check-suite.
// Throws hlf::Error on bad inputs.
Json run_task_inputs(const std::string &kind, const Json &inputs);

// {"id", "kind", "inputs", "expect"?} -> report entry with "status" in
// pass | fail | error | done. `expect` matches as a recursive subset of the result,
// or {"error": CODE} for an expected failure.
Json run_task(const Json &task);

// {"tasks": [...]} -> {"tasks": [...], "summary": {...}}; entries keep task order.
Json run_job(const Json &job);
bool job_ok(const Json &report);

// @file or inline JSON
Json load_json_arg(const std::string &arg);

} // namespace hlf

#pragma once

#include <map>
#include <string>
#include <vector>

#include "marketgraph/instance_io.hpp"

namespace marketgraph {

/// Evaluates one named operation on an instance; returns a flat key/value
/// map (rationals canonical "p/q", floats printed via %.12g).  Unknown op
/// or bad arguments throw ParseError.
std::map<std::string, std::string> run_op(
    const std::string& op, const Instance& inst,
    const std::map<std::string, std::string>& args);

struct SuiteRow {
  std::string name;
  std::string key;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  bool all_pass = true;
};

/// Executes a JSON config of cases: each case names an instance (inline,
/// file path, or generator), an op, args, and expected key/values with
/// optional float tolerances.
SuiteResult run_suite(const std::string& config_path);

std::string format_double(double v);

}  // namespace marketgraph

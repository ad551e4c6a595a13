#pragma once

#include <string>

#include "ehrkit/harness.hpp"

namespace ehrkit {

/**
 * JSON text for the core structures. Rational numbers are rendered as plain
 * JSON integers when integral and small enough, and as "p/q" strings
 * otherwise; parsers accept integers, "p/q" strings, and "p" strings.
 *
 * A polytope document is {"dim": d, "ineqs": [{"a": [..], "b": r}, ..]},
 * read as the system <a_i, x> <= s * b_i.
 */

std::string polytope_to_json(const HPolytope& p, int indent = 2);
HPolytope polytope_from_json(const std::string& text);

// Breakpoints carry entering/leaving only when the function recorded them.
std::string stepfn_to_json(const QStepFunction& f, int indent = 2);

// One line per breakpoint: s, value_at, value_after, decimal approximation.
std::string stepfn_to_csv(const QStepFunction& f);

std::string jumps_to_json(const std::vector<JumpReport>& js, int indent = 2);
std::string ppyr_volumes_to_json(const PpyrVolumes& pv, int indent = 2);
std::string rvol_report_to_json(const RvolLimitReport& rep, int indent = 2);
std::string translate_check_to_json(const TranslateCheck& tc, int indent = 2);
std::string report_to_json(const ReconstructionReport& rep, int indent = 2);
std::string codim1_demo_to_json(const Codim1Demo& demo, int indent = 2);
std::string suite_to_json(const SuiteResult& res, int indent = 2);

// One compact JSON object per instance, then one summary line.
std::string suite_to_json_lines(const SuiteResult& res);

// {"dim", "normal_bound", "den_bound", "count", "seed"}, all optional.
InstanceSpec instance_spec_from_json(const std::string& text);

// Array of integer arrays, e.g. [[1,0],[0,-1]].
std::vector<IVec> normals_from_json(const std::string& text);

}  // namespace ehrkit

#pragma once

#include "flatdetect/detect.hpp"
#include "flatdetect/families.hpp"
#include "flatdetect/multiform.hpp"
#include "flatdetect/repvar.hpp"

#include <json.hpp>

#include <string>

namespace flatdetect {

using Json = nlohmann::ordered_json;

// A JSON integer, or a decimal string outside the int64 range.
Json integer_to_json(const Integer& v);

// {"num": n, "den": d}; components outside the int64 range are written as decimal strings.
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

// {"base": b, "param": p, "terms": [{"labels": ["z1", "x1"], "num": 1, "den": 1}, ...]}
Json form_to_json(const MultiForm& f);
MultiForm form_from_json(const Json& j);

Json report_to_json(const DetectionReport& r);
// Throws ParseError on a malformed document.
DetectionReport report_from_json(const Json& j);
// Plain-text rendering: header, verdict, matrix, undetected classes, scope, conventions.
std::string render_report(const DetectionReport& r);

Json solve_to_json(const SolveResult& r, const GroupPresentation& g, const SolveConfig& cfg, int dim);

Json family_to_json(const Family& f, const std::string& expr, const FamilyCheck& check);

// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

}  // namespace flatdetect

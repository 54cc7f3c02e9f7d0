#include "flatdetect/serialize.hpp"

#include "flatdetect/error.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace flatdetect {

Json integer_to_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

namespace {

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos || s.find('-', 1) != std::string::npos)
      throw ParseError("malformed integer '" + s + "'", 1, 1);
    return Integer(s);
  }
  throw ParseError("expected an integer", 1, 1);
}

[[noreturn]] void malformed(const std::string& what) { throw ParseError("malformed document: " + what, 1, 1); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing \"") + key + "\"");
  return j.at(key);
}

std::string matrix_text(const std::optional<Rational>& e) { return e ? to_string(*e) : "?"; }

// Inverse of monomial_label for parameter-only monomials: "1" or "x1^x3".
std::uint32_t param_monomial_from_label(const std::string& s) {
  if (s == "1") return 0;
  std::uint32_t out = 0;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t end = std::min(s.find('^', pos), s.size());
    const std::string tok = s.substr(pos, end - pos);
    if (tok.size() < 2 || tok[0] != 'x' || tok.find_first_not_of("0123456789", 1) != std::string::npos)
      malformed("column monomial '" + s + "'");
    const int idx = std::stoi(tok.substr(1)) - 1;
    if (idx < 0 || idx >= kMaxLabels) malformed("column monomial '" + s + "'");
    out |= 1u << idx;
    pos = end + 1;
  }
  return out;
}

}  // namespace

Json rational_to_json(const Rational& q) {
  Json j;
  j["num"] = integer_to_json(numerator(q));
  j["den"] = integer_to_json(denominator(q));
  return j;
}

Rational rational_from_json(const Json& j) {
  const Integer num = integer_from_json(field(j, "num"));
  const Integer den = integer_from_json(field(j, "den"));
  if (den == 0) malformed("zero denominator");
  return Rational(num, den);
}

Json form_to_json(const MultiForm& f) {
  Json j;
  j["base"] = f.space().base;
  j["param"] = f.space().param;
  j["terms"] = Json::array();
  for (const auto& [mono, c] : f.terms()) {
    Json t;
    t["labels"] = Json::array();
    for (int i = 0; i < 64; ++i)
      if (mono & (Monomial{1} << i)) t["labels"].push_back(i < 32 ? "z" + std::to_string(i + 1) : "x" + std::to_string(i - 31));
    const Json q = rational_to_json(c);
    t["num"] = q["num"];
    t["den"] = q["den"];
    j["terms"].push_back(std::move(t));
  }
  return j;
}

MultiForm form_from_json(const Json& j) {
  try {
    MultiForm out(LabelSpace{field(j, "base").get<int>(), field(j, "param").get<int>()});
    for (const Json& t : field(j, "terms")) {
      MultiForm term = MultiForm::scalar(out.space(), rational_from_json(t));
      for (const Json& label : field(t, "labels")) {
        const std::string s = label.get<std::string>();
        if (s.size() < 2 || (s[0] != 'z' && s[0] != 'x')) malformed("label '" + s + "'");
        const int idx = std::stoi(s.substr(1)) - 1;
        const int limit = s[0] == 'z' ? out.space().base : out.space().param;
        if (idx < 0 || idx >= limit) malformed("label '" + s + "' outside the label space");
        term = wedge(term, s[0] == 'z' ? MultiForm::base_generator(out.space(), idx)
                                       : MultiForm::param_generator(out.space(), idx));
      }
      out += term;
    }
    return out;
  } catch (const Json::exception& e) {
    malformed(e.what());
  } catch (const std::logic_error& e) {
    malformed(e.what());
  }
}

Json report_to_json(const DetectionReport& r) {
  Json j;
  j["group"] = r.group;
  j["families"] = r.families;
  j["pairing"] = r.numeric ? "numeric" : "exact";
  j["columns"] = Json::array();
  for (const auto& c : r.columns) {
    Json col;
    col["family"] = c.family;
    col["component"] = c.component;
    col["monomial"] = monomial_label(make_monomial(0, c.x_monomial));
    col["label"] = c.label;
    j["columns"].push_back(std::move(col));
  }
  j["rows"] = Json::array();
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    Json row;
    row["class"] = r.row_labels[i];
    row["degree"] = r.row_degrees[i];
    row["detected"] = static_cast<bool>(r.detected[i]);
    row["entries"] = Json::array();
    for (const auto& e : r.matrix[i]) row["entries"].push_back(e ? rational_to_json(*e) : Json(nullptr));
    j["rows"].push_back(std::move(row));
  }
  j["verdict"] = to_string(r.verdict);
  j["undetected"] = r.undetected;
  j["scope"] = r.scope;
  j["sign_conventions"] = r.sign_conventions;
  return j;
}

DetectionReport report_from_json(const Json& j) {
  DetectionReport r;
  try {
    r.group = field(j, "group").get<std::string>();
    r.families = field(j, "families").get<std::vector<std::string>>();
    r.numeric = field(j, "pairing").get<std::string>() == "numeric";
    for (const Json& c : field(j, "columns")) {
      DetectionColumn col;
      col.family = field(c, "family").get<std::size_t>();
      col.component = field(c, "component").get<std::size_t>();
      col.x_monomial = param_monomial_from_label(field(c, "monomial").get<std::string>());
      col.label = field(c, "label").get<std::string>();
      r.columns.push_back(std::move(col));
    }
    for (const Json& row : field(j, "rows")) {
      r.row_labels.push_back(field(row, "class").get<std::string>());
      r.row_degrees.push_back(field(row, "degree").get<int>());
      r.detected.push_back(field(row, "detected").get<bool>());
      std::vector<std::optional<Rational>> entries;
      for (const Json& e : field(row, "entries")) {
        if (e.is_null()) entries.emplace_back(std::nullopt);
        else entries.emplace_back(rational_from_json(e));
      }
      if (entries.size() != r.columns.size()) malformed("row length differs from the column count");
      r.matrix.push_back(std::move(entries));
    }
    const std::string verdict = field(j, "verdict").get<std::string>();
    if (verdict == to_string(Verdict::FdCertified)) r.verdict = Verdict::FdCertified;
    else if (verdict == to_string(Verdict::Undetected)) r.verdict = Verdict::Undetected;
    else if (verdict == to_string(Verdict::Obstructed)) r.verdict = Verdict::Obstructed;
    else malformed("unknown verdict '" + verdict + "'");
    r.undetected = field(j, "undetected").get<std::vector<std::string>>();
    r.scope = field(j, "scope").get<std::string>();
    r.sign_conventions = field(j, "sign_conventions").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    malformed(e.what());
  }
  return r;
}

std::string render_report(const DetectionReport& r) {
  std::ostringstream out;
  out << "group:    " << r.group << "\n";
  for (std::size_t i = 0; i < r.families.size(); ++i) out << "family " << (i + 1) << ": " << r.families[i] << "\n";
  out << "pairing:  " << (r.numeric ? "numeric" : "exact") << "\n";
  out << "verdict:  " << to_string(r.verdict) << "\n\n";

  std::size_t label_width = 5;
  for (const auto& l : r.row_labels) label_width = std::max(label_width, l.size());
  std::vector<std::size_t> widths;
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    std::size_t w = r.columns[c].label.size();
    for (const auto& row : r.matrix) w = std::max(w, matrix_text(row[c]).size());
    widths.push_back(w);
  }
  out << std::string(label_width, ' ');
  for (std::size_t c = 0; c < r.columns.size(); ++c)
    out << "  " << std::string(widths[c] - r.columns[c].label.size(), ' ') << r.columns[c].label;
  out << "\n";
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    out << r.row_labels[i] << std::string(label_width - r.row_labels[i].size(), ' ');
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
      const std::string t = matrix_text(r.matrix[i][c]);
      out << "  " << std::string(widths[c] - t.size(), ' ') << t;
    }
    out << (r.detected[i] ? "  detected" : "  -") << "\n";
  }
  if (!r.undetected.empty()) {
    out << "\nundetected:";
    for (const auto& u : r.undetected) out << " " << u;
    out << "\n";
  }
  out << "\nscope: " << r.scope << "\n";
  out << "conventions:\n";
  for (const auto& s : r.sign_conventions) out << "  - " << s << "\n";
  return out.str();
}

Json solve_to_json(const SolveResult& r, const GroupPresentation& g, const SolveConfig& cfg, int dim) {
  Json j;
  j["group"] = g.to_text();
  j["dimension"] = dim;
  j["seed"] = cfg.seed;
  j["tolerance"] = cfg.tolerance;
  j["max_iter"] = cfg.max_iter;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["defect"] = r.defect;
  j["worst_unitarity"] = r.worst_unitarity;
  j["matrices"] = Json::object();
  for (std::size_t i = 0; i < r.point.matrices.size(); ++i) {
    const Matrix& m = r.point.matrices[i];
    Json rows = Json::array();
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      Json row = Json::array();
      for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back(Json::array({m(a, b).real(), m(a, b).imag()}));
      rows.push_back(std::move(row));
    }
    j["matrices"][g.generators()[i]] = std::move(rows);
  }
  return j;
}

Json family_to_json(const Family& f, const std::string& expr, const FamilyCheck& check) {
  Json j;
  j["expr"] = expr;
  j["structure"] = f.structure();
  j["group"] = f.group().to_text();
  j["space"] = f.space().describe();
  j["fiber_dims"] = f.fiber_dims();
  if (f.has_chern()) {
    j["chern"] = Json::array();
    for (const MultiForm& c : f.chern()) j["chern"].push_back(form_to_json(c));
  } else {
    j["chern"] = nullptr;
  }
  Json v;
  v["points"] = check.points;
  v["max_defect"] = check.max_defect;
  v["max_unitarity"] = check.max_unitarity;
  v["passed"] = check.passed;
  j["verification"] = std::move(v);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace flatdetect

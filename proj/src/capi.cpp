#define FLATDETECT_BUILDING
#include "flatdetect.h"

#include "flatdetect/charforms.hpp"
#include "flatdetect/detect.hpp"
#include "flatdetect/error.hpp"
#include "flatdetect/expr.hpp"
#include "flatdetect/serialize.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

struct fd_presentation {
  flatdetect::GroupPresentation group;
};

struct fd_family {
  flatdetect::Family family;
  std::string expr;
};

namespace {

using namespace flatdetect;

thread_local std::string last_error;

template <typename Fn>
fd_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const ParseError& e) {
    last_error = e.what();
    return FD_ERR_PARSE;
  } catch (const InvalidInput& e) {
    last_error = e.what();
    return FD_ERR_USAGE;
  } catch (const VerificationError& e) {
    last_error = e.what();
    return FD_ERR_VERIFICATION;
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return FD_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw InvalidInput(std::string(what) + " must not be null");
}

std::string base_dir_or_default(const char* base_dir) { return base_dir && *base_dir ? base_dir : "."; }

Json poincare_report(int resolution) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const GridConnection c = poincare_connection(resolution);
  const std::vector<Matrix> f_xz = numerical_curvature(c, 1, 0);
  double deviation = 0.0;
  for (const Matrix& f : f_xz) deviation = std::max(deviation, std::abs(f(0, 0) - Complex(0.0, kTwoPi)));
  const ChernNumber zx = chern_number(c, 0, 1);
  const ChernNumber xz = chern_number(c, 1, 0);
  Json j;
  j["connection"] = "poincare";
  j["resolution"] = resolution;
  j["curvature_xz"] = Json::array({f_xz.front()(0, 0).real(), f_xz.front()(0, 0).imag()});
  j["curvature_max_deviation_from_2pi_i"] = deviation;
  auto chern = [](const ChernNumber& n) {
    Json out;
    out["value"] = n.value;
    out["raw"] = n.raw;
    out["residual"] = n.residual;
    out["integral"] = n.integral;
    return out;
  };
  j["chern_zx"] = chern(zx);
  j["chern_xz"] = chern(xz);
  return j;
}

struct FamilyChern {
  Json json;
  bool agree = true;
};

// Exact Chern data next to first Chern numbers of det rho(g_i) integrated along each axis.
FamilyChern family_chern_report(const Family& f, int resolution) {
  FamilyChern out;
  Json& j = out.json;
  j["structure"] = f.structure();
  j["resolution"] = resolution;
  j["components"] = Json::array();
  for (std::size_t c = 0; c < f.components().size(); ++c) {
    Json comp;
    comp["component"] = c;
    comp["exact"] = f.has_chern() ? form_to_json(f.chern()[c]) : Json(nullptr);
    comp["pairs"] = Json::array();
    const int dim = f.components()[c].dim();
    for (std::size_t g = 0; g < f.group().generator_count(); ++g)
      for (int axis = 0; axis < dim; ++axis) {
        std::vector<Complex> holonomy;
        for (int k = 0; k < resolution; ++k) {
          ParamPoint p{c, std::vector<double>(dim, 0.0)};
          p.coords[axis] = static_cast<double>(k) / resolution;
          holonomy.push_back(f.evaluate(p).matrices[g].determinant());
        }
        const ChernNumber n = chern_number(holonomy_line_connection(holonomy), 0, 1);
        Json pair;
        pair["generator"] = f.group().generators()[g];
        pair["axis"] = "x" + std::to_string(axis + 1);
        pair["numeric"] = n.value;
        pair["residual"] = n.residual;
        if (f.has_chern()) {
          const Rational exact =
              f.chern()[c].coefficient(make_monomial(1u << g, 1u << axis));
          pair["exact"] = rational_to_json(exact);
          const bool ok = n.integral && Rational(n.value) == exact;
          pair["agree"] = ok;
          out.agree = out.agree && ok;
        }
        comp["pairs"].push_back(std::move(pair));
      }
    j["components"].push_back(std::move(comp));
  }
  j["agree"] = out.agree;
  return out;
}

}  // namespace

extern "C" {

const char* fd_version(void) { return "1.0.0"; }

const char* fd_last_error(void) { return last_error.c_str(); }

void fd_string_free(char* s) { std::free(s); }

fd_status fd_presentation_parse(const char* text, fd_presentation** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new fd_presentation{parse_presentation(text)};
    return FD_OK;
  });
}

fd_status fd_presentation_load(const char* path, fd_presentation** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new fd_presentation{load_presentation(path)};
    return FD_OK;
  });
}

fd_status fd_group_build(const char* expr, const char* base_dir, fd_presentation** out) {
  return guarded([&] {
    require(expr, "expr");
    require(out, "out");
    *out = new fd_presentation{build_group(parse_expr(expr), base_dir_or_default(base_dir))};
    return FD_OK;
  });
}

fd_status fd_presentation_format(const fd_presentation* p, char** out_text) {
  return guarded([&] {
    require(p, "presentation");
    require(out_text, "out_text");
    *out_text = copy_string(p->group.to_text() + "\n");
    return FD_OK;
  });
}

size_t fd_presentation_generator_count(const fd_presentation* p) { return p ? p->group.generator_count() : 0; }

void fd_presentation_free(fd_presentation* p) { delete p; }

fd_status fd_rep_solve(const fd_presentation* p, int dim, unsigned long long seed, double tol, int max_iter,
                       char** out_json) {
  return guarded([&] {
    require(p, "presentation");
    require(out_json, "out_json");
    if (dim < 1) throw InvalidInput("dimension must be at least 1");
    if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
    if (max_iter < 0) throw InvalidInput("max-iter must be nonnegative");
    SolveConfig cfg;
    cfg.seed = seed;
    cfg.tolerance = tol;
    cfg.max_iter = max_iter;
    const SolveResult r = solve_representation(p->group, dim, cfg);
    *out_json = copy_string(dump(solve_to_json(r, p->group, cfg, dim)));
    if (!r.converged) {
      last_error = "solver stopped at defect " + std::to_string(r.defect) + " after " + std::to_string(r.iterations) +
                   " iterations";
      return FD_ERR_NONCONVERGENCE;
    }
    return FD_OK;
  });
}

fd_status fd_family_build(const char* expr, const char* base_dir, fd_family** out) {
  return guarded([&] {
    require(expr, "expr");
    require(out, "out");
    *out = new fd_family{parse_family(expr, base_dir_or_default(base_dir)), expr};
    return FD_OK;
  });
}

fd_status fd_family_load(const char* path, fd_family** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new fd_family{load_family(path), family_source(path)};
    return FD_OK;
  });
}

fd_status fd_family_describe(const fd_family* f, double tol, char** out_json) {
  return guarded([&] {
    require(f, "family");
    require(out_json, "out_json");
    if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
    const FamilyCheck check = verify_family(f->family, tol);
    *out_json = copy_string(dump(family_to_json(f->family, f->expr, check)));
    if (!check.passed) {
      last_error = "family fails the homomorphism check (defect " + std::to_string(check.max_defect) + ")";
      return FD_ERR_VERIFICATION;
    }
    return FD_OK;
  });
}

void fd_family_free(fd_family* f) { delete f; }

fd_status fd_forms_eval(const char* text, char** out_json) {
  return guarded([&] {
    require(text, "text");
    require(out_json, "out_json");
    const MultiForm form = parse_form(text);
    Json j;
    j["text"] = form.to_string();
    j["form"] = form_to_json(form);
    *out_json = copy_string(dump(j));
    return FD_OK;
  });
}

fd_status fd_forms_chern(const fd_family* f, int resolution, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    if (resolution < 2) throw InvalidInput("resolution must be at least 2");
    if (!f) {
      *out_json = copy_string(dump(poincare_report(resolution)));
      return FD_OK;
    }
    const FamilyChern r = family_chern_report(f->family, resolution);
    *out_json = copy_string(dump(r.json));
    if (!r.agree) {
      last_error = "numeric Chern numbers disagree with the exact Chern data";
      return FD_ERR_VERIFICATION;
    }
    return FD_OK;
  });
}

fd_status fd_detect_run(const char* descriptor, const char* base_dir, const fd_family* const* families, size_t count,
                        int numeric, char** out_json) {
  return guarded([&] {
    require(descriptor, "descriptor");
    require(out_json, "out_json");
    if (count == 0) throw InvalidInput("detection needs at least one family");
    require(families, "families");
    const GroupClassDescriptor d = parse_descriptor(descriptor, base_dir_or_default(base_dir));
    std::vector<Family> fams;
    for (size_t i = 0; i < count; ++i) {
      require(families[i], "family");
      fams.push_back(families[i]->family);
    }
    const DetectionReport r = numeric ? numeric_detection_matrix(d, fams) : detection_matrix(d, fams);
    *out_json = copy_string(dump(report_to_json(r)));
    if (r.verdict == Verdict::Obstructed) {
      last_error = "some classes could not be paired by the numeric path";
      return FD_ERR_VERIFICATION;
    }
    return FD_OK;
  });
}

fd_status fd_report_render(const char* report_json, char** out_text) {
  return guarded([&] {
    require(report_json, "report_json");
    require(out_text, "out_text");
    Json j;
    try {
      j = Json::parse(report_json);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("report is not valid JSON: ") + e.what(), 1, static_cast<int>(e.byte));
    }
    *out_text = copy_string(render_report(report_from_json(j)));
    return FD_OK;
  });
}

fd_status fd_transfer_check(const fd_family* f, const char* cover, const char* base_dir, char** out_json) {
  return guarded([&] {
    require(f, "family");
    require(cover, "cover");
    require(out_json, "out_json");
    const SubgroupCover c = build_cover(parse_expr(cover), base_dir_or_default(base_dir));
    const TransferCheck t = transfer_scaling_check(f->family, c);
    Json j;
    j["family"] = f->family.structure();
    j["cover"] = c.describe();
    j["index"] = t.index;
    j["exact_entries"] = t.exact_entries;
    j["numeric_entries"] = t.numeric_entries;
    j["passed"] = t.passed;
    j["detail"] = t.detail;
    *out_json = copy_string(dump(j));
    if (!t.passed) {
      last_error = t.detail;
      return FD_ERR_VERIFICATION;
    }
    return FD_OK;
  });
}

fd_status fd_bm_obstruction(long long f, long long index, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    const BmObstruction b = bm_obstruction(Integer(f), Integer(index));
    Json j;
    j["f"] = f;
    j["index"] = index;
    j["g"] = integer_to_json(b.g);
    j["h2_lower_bound"] = integer_to_json(b.h2_lower_bound);
    j["excluded"] = b.excluded;
    *out_json = copy_string(dump(j));
    return FD_OK;
  });
}

fd_status fd_betti_inequality(int m, int n, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    const BettiInequality b = betti_inequality_check(m, n);
    Json j;
    j["m"] = m;
    j["n"] = n;
    j["lhs"] = integer_to_json(b.lhs);
    j["rhs"] = integer_to_json(b.rhs);
    j["holds"] = b.holds;
    *out_json = copy_string(dump(j));
    return FD_OK;
  });
}

}  // extern "C"

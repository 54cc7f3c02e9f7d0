#include "flatdetect.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Owned {
  char* text = nullptr;
  ~Owned() { fd_string_free(text); }
};

struct PresentationDeleter {
  void operator()(fd_presentation* p) const { fd_presentation_free(p); }
};
struct FamilyDeleter {
  void operator()(fd_family* f) const { fd_family_free(f); }
};
using PresentationPtr = std::unique_ptr<fd_presentation, PresentationDeleter>;
using FamilyPtr = std::unique_ptr<fd_family, FamilyDeleter>;

int report_error(int status) {
  std::cerr << "flatdetect: " << fd_last_error() << "\n";
  return status;
}

// Writes text to `out`, or stdout when empty. Returns an exit status.
int emit(const std::string& out, const char* text) {
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file || !(file << text)) {
    std::cerr << "flatdetect: cannot write '" << out << "'\n";
    return FD_ERR_USAGE;
  }
  return 0;
}

bool read_text(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return true;
}

// Finishes a call that produced text: writes it when present, then maps the status.
int finish(int status, const Owned& result, const std::string& out) {
  if (result.text) {
    const int written = emit(out, result.text);
    if (written != 0) return written;
  }
  return status == FD_OK ? 0 : report_error(status);
}

// Either a file holding a descriptor expression or the expression itself.
std::string descriptor_text(const std::string& arg) {
  std::string text;
  if (std::filesystem::is_regular_file(arg) && read_text(arg, text)) return text;
  return arg;
}

struct Options {
  std::string out;
  double tol = 1e-8;
  int grid = 32;
  unsigned long long seed = 1;
  int max_iter = 20000;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat detectability toolkit: representation families, Chern data, detection reports"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fd_version()));

  Options o;

  auto* parse = app.add_subcommand("parse", "Parse a presentation file and print its normalized form");
  std::string parse_file;
  parse->add_option("file", parse_file, "Presentation file")->required();
  parse->add_option("--out", o.out, "Output file");

  auto* rep = app.add_subcommand("rep", "Representation varieties");
  rep->require_subcommand(1);
  auto* solve = rep->add_subcommand("solve", "Search for a unitary representation");
  std::string solve_group;
  int solve_dim = 2;
  solve->add_option("--group", solve_group, "Group expression or presentation file")->required();
  solve->add_option("--dim", solve_dim, "Unitary dimension")->check(CLI::PositiveNumber);
  solve->add_option("--tol", o.tol, "Defect tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--seed", o.seed, "Random seed");
  solve->add_option("--max-iter", o.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  solve->add_option("--out", o.out, "Output file");

  auto* family = app.add_subcommand("family", "Representation families");
  family->require_subcommand(1);
  auto* build = family->add_subcommand("build", "Build and verify a family from an expression file");
  std::string build_expr;
  build->add_option("--expr", build_expr, "File holding a family expression")->required();
  build->add_option("--tol", o.tol, "Homomorphism tolerance")->check(CLI::PositiveNumber);
  build->add_option("--out", o.out, "Output file");

  auto* forms = app.add_subcommand("forms", "Characteristic forms");
  forms->require_subcommand(1);
  auto* eval = forms->add_subcommand("eval", "Normalize an exterior-algebra expression");
  std::string eval_text;
  eval->add_option("form", eval_text, "Form, e.g. \"(1 + z1 x1)(1 + z2 x2)\"")->required();
  eval->add_option("--out", o.out, "Output file");
  auto* chern = forms->add_subcommand("chern", "Chern data of a family, or the Poincare connection");
  std::string chern_family;
  chern->add_option("--family", chern_family, "Family file");
  chern->add_option("--grid,--resolution", o.grid, "Grid resolution")->check(CLI::Range(2, 1 << 14));
  chern->add_option("--out", o.out, "Output file");

  auto* detect = app.add_subcommand("detect", "Detection pairings and obstructions");
  detect->require_subcommand(1);
  auto* run = detect->add_subcommand("run", "Detection report for a group and families");
  std::string run_group;
  std::vector<std::string> run_families;
  bool run_numeric = false;
  run->add_option("--group", run_group, "Group descriptor expression or file")->required();
  run->add_option("--families", run_families, "Family files")->required();
  run->add_flag("--numeric", run_numeric, "Use the numeric winding pairing");
  run->add_option("--out", o.out, "Output file");
  auto* transfer = detect->add_subcommand("transfer", "Check that restriction followed by induction scales by the index");
  std::string transfer_family, transfer_cover;
  transfer->add_option("--family", transfer_family, "Family file")->required();
  transfer->add_option("--cover", transfer_cover, "Cover expression or JSON file")->required();
  transfer->add_option("--out", o.out, "Output file");
  auto* bm = detect->add_subcommand("bm", "Euler-characteristic obstruction arithmetic");
  long long bm_f = 2, bm_index = 2;
  bm->add_option("--f", bm_f, "Free rank")->required();
  bm->add_option("--index", bm_index, "Subgroup index")->required();
  bm->add_option("--out", o.out, "Output file");
  auto* betti = detect->add_subcommand("betti", "Betti-sum inequality for Hom(F_m, U(n))");
  int betti_m = 1, betti_n = 1;
  betti->add_option("--m", betti_m, "Free rank")->required();
  betti->add_option("--n", betti_n, "Unitary dimension")->required();
  betti->add_option("--out", o.out, "Output file");

  auto* report = app.add_subcommand("report", "Render a detection report as text");
  std::string report_file;
  report->add_option("file", report_file, "Report JSON")->required();
  report->add_option("--out", o.out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return FD_ERR_USAGE;
  }

  Owned result;

  if (*parse) {
    fd_presentation* p = nullptr;
    if (const int s = fd_presentation_load(parse_file.c_str(), &p); s != FD_OK) return report_error(s);
    PresentationPtr owned(p);
    return finish(fd_presentation_format(p, &result.text), result, o.out);
  }

  if (*solve) {
    fd_presentation* p = nullptr;
    if (const int s = fd_group_build(solve_group.c_str(), ".", &p); s != FD_OK) return report_error(s);
    PresentationPtr owned(p);
    return finish(fd_rep_solve(p, solve_dim, o.seed, o.tol, o.max_iter, &result.text), result, o.out);
  }

  if (*build) {
    fd_family* f = nullptr;
    if (const int s = fd_family_load(build_expr.c_str(), &f); s != FD_OK) return report_error(s);
    FamilyPtr owned(f);
    return finish(fd_family_describe(f, o.tol, &result.text), result, o.out);
  }

  if (*eval) return finish(fd_forms_eval(eval_text.c_str(), &result.text), result, o.out);

  if (*chern) {
    FamilyPtr owned;
    if (!chern_family.empty()) {
      fd_family* f = nullptr;
      if (const int s = fd_family_load(chern_family.c_str(), &f); s != FD_OK) return report_error(s);
      owned.reset(f);
    }
    return finish(fd_forms_chern(owned.get(), o.grid, &result.text), result, o.out);
  }

  if (*run) {
    std::vector<FamilyPtr> owned;
    std::vector<const fd_family*> handles;
    for (const std::string& path : run_families) {
      fd_family* f = nullptr;
      if (const int s = fd_family_load(path.c_str(), &f); s != FD_OK) return report_error(s);
      owned.emplace_back(f);
      handles.push_back(f);
    }
    const std::string desc = descriptor_text(run_group);
    const std::string base = std::filesystem::is_regular_file(run_group)
                                 ? std::filesystem::path(run_group).parent_path().string()
                                 : std::string(".");
    return finish(fd_detect_run(desc.c_str(), base.c_str(), handles.data(), handles.size(), run_numeric ? 1 : 0,
                                &result.text),
                  result, o.out);
  }

  if (*transfer) {
    fd_family* f = nullptr;
    if (const int s = fd_family_load(transfer_family.c_str(), &f); s != FD_OK) return report_error(s);
    FamilyPtr owned(f);
    return finish(fd_transfer_check(f, transfer_cover.c_str(), ".", &result.text), result, o.out);
  }

  if (*bm) return finish(fd_bm_obstruction(bm_f, bm_index, &result.text), result, o.out);
  if (*betti) return finish(fd_betti_inequality(betti_m, betti_n, &result.text), result, o.out);

  if (*report) {
    std::string json;
    if (!read_text(report_file, json)) {
      std::cerr << "flatdetect: cannot open report '" << report_file << "'\n";
      return FD_ERR_USAGE;
    }
    return finish(fd_report_render(json.c_str(), &result.text), result, o.out);
  }
  return FD_ERR_USAGE;
}

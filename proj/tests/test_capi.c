#include "flatdetect.h"

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                      \
  do {                                                                    \
    if (!(cond)) {                                                        \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                         \
    }                                                                     \
  } while (0)

static int contains(const char* s, const char* needle) { return s && strstr(s, needle) != NULL; }

int main(int argc, char** argv) {
  const char* data = argc > 1 ? argv[1] : "data";
  char path[4096];
  char* out = NULL;
  fd_presentation* p = NULL;
  fd_family* f = NULL;

  EXPECT(strlen(fd_version()) > 0);

  EXPECT(fd_presentation_parse("gens: a b; rels: a b a^-1 b^-1;", &p) == FD_OK);
  EXPECT(fd_presentation_generator_count(p) == 2);
  EXPECT(fd_presentation_format(p, &out) == FD_OK);
  EXPECT(contains(out, "rels: a b a^-1 b^-1;"));
  fd_string_free(out);
  out = NULL;

  EXPECT(fd_rep_solve(p, 2, 1, 1e-10, 20000, &out) == FD_OK);
  EXPECT(contains(out, "\"converged\": true"));
  fd_string_free(out);
  out = NULL;
  EXPECT(fd_rep_solve(p, 2, 1, 1e-10, 0, &out) == FD_ERR_NONCONVERGENCE);
  EXPECT(out != NULL);
  fd_string_free(out);
  out = NULL;
  fd_presentation_free(p);
  p = NULL;

  EXPECT(fd_presentation_parse("gens: a; rels: b;", &p) == FD_ERR_PARSE);
  EXPECT(p == NULL);
  EXPECT(contains(fd_last_error(), "line 1"));
  EXPECT(fd_presentation_parse(NULL, &p) == FD_ERR_USAGE);

  snprintf(path, sizeof path, "%s/klein.grp", data);
  EXPECT(fd_presentation_load(path, &p) == FD_OK);
  fd_presentation_free(p);
  p = NULL;
  EXPECT(fd_group_build("surface(2)", ".", &p) == FD_OK);
  EXPECT(fd_presentation_generator_count(p) == 4);
  fd_presentation_free(p);
  p = NULL;

  snprintf(path, sizeof path, "%s/families/zn2.fam", data);
  EXPECT(fd_family_load(path, &f) == FD_OK);
  EXPECT(fd_family_describe(f, 1e-8, &out) == FD_OK);
  EXPECT(contains(out, "\"passed\": true"));
  fd_string_free(out);
  out = NULL;
  EXPECT(fd_forms_chern(f, 64, &out) == FD_OK);
  fd_string_free(out);
  out = NULL;

  {
    const fd_family* fams[1] = {f};
    EXPECT(fd_detect_run("zn(2)", ".", fams, 1, 0, &out) == FD_OK);
    EXPECT(contains(out, "\"verdict\": \"FD-certified\""));
    char* text = NULL;
    EXPECT(fd_report_render(out, &text) == FD_OK);
    EXPECT(contains(text, "[e1^e2]"));
    fd_string_free(text);
    fd_string_free(out);
    out = NULL;
    EXPECT(fd_detect_run("zn(3)", ".", fams, 1, 0, &out) == FD_ERR_USAGE);
    EXPECT(fd_detect_run("zn(2)", ".", fams, 1, 1, &out) == FD_ERR_VERIFICATION);
    EXPECT(contains(out, "\"verdict\": \"obstructed\""));
    fd_string_free(out);
    out = NULL;
  }
  fd_family_free(f);
  f = NULL;

  EXPECT(fd_family_build("char_zn(1, 32)", ".", &f) == FD_OK);
  EXPECT(fd_transfer_check(f, "circle(3)", ".", &out) == FD_OK);
  EXPECT(contains(out, "\"passed\": true"));
  fd_string_free(out);
  out = NULL;
  fd_family_free(f);
  f = NULL;
  EXPECT(fd_family_build("char_zn(", ".", &f) == FD_ERR_PARSE);

  EXPECT(fd_forms_chern(NULL, 64, &out) == FD_OK);
  EXPECT(contains(out, "chern_zx"));
  fd_string_free(out);
  out = NULL;
  EXPECT(fd_forms_eval("(1 + z1 x1)(1 + z2 x2)", &out) == FD_OK);
  fd_string_free(out);
  out = NULL;

  EXPECT(fd_bm_obstruction(2, 10, &out) == FD_OK);
  EXPECT(contains(out, "\"g\": 11"));
  fd_string_free(out);
  out = NULL;
  EXPECT(fd_bm_obstruction(1, 10, &out) == FD_ERR_USAGE);
  EXPECT(fd_betti_inequality(2, 2, &out) == FD_OK);
  EXPECT(contains(out, "16"));
  fd_string_free(out);
  out = NULL;
  EXPECT(fd_report_render("{", &out) == FD_ERR_PARSE);

  fd_string_free(NULL);
  fd_presentation_free(NULL);
  fd_family_free(NULL);

  if (failures) fprintf(stderr, "%d C API check(s) failed\n", failures);
  else printf("C API checks passed\n");
  return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}

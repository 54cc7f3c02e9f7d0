#pragma once

#include "flatdetect/cover.hpp"
#include "flatdetect/detect.hpp"
#include "flatdetect/families.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace flatdetect {

// Syntax tree of the small call language used for family files and group descriptors:
//   expr  := call | integer | list | symbol | "string"
//   call  := name '(' [arg {',' arg}] ')'
//   arg   := [name '='] expr
//   list  := '[' [expr {',' expr}] ']'
// Symbols may contain letters, digits and `_ . / -`, so relative file paths need no quotes.
struct Expr {
  enum class Kind { Call, Integer, List, Symbol, String };
  Kind kind = Kind::Symbol;
  std::string text;  // call name, symbol, string contents, or integer digits
  long value = 0;
  std::vector<Expr> items;           // list items or positional call arguments
  std::vector<std::string> keys;     // per call argument: keyword or empty
  int line = 1;
  int column = 1;
};

// Throws ParseError with line/column.
Expr parse_expr(std::string_view text);

// Groups: zn(n), free(m), surface(g), klein(), prod(G, H), freeprod(G, H), or a path to a
// presentation file.
GroupPresentation build_group(const Expr& e, const std::string& base_dir = ".");

// Covers: circle(k), torus([[..], ..]), klein(), or a path to a JSON cover description.
SubgroupCover build_cover(const Expr& e, const std::string& base_dir = ".");

// Descriptors: zn(n), free(m), surface(g), freeprod(D, E), prod(D, E),
// super(D, index, G, betti=[..], h1=[..]) with G a group expression.
GroupClassDescriptor build_descriptor(const Expr& e, const std::string& base_dir = ".");
GroupClassDescriptor parse_descriptor(std::string_view text, const std::string& base_dir = ".");

// Families:
//   char_zn(n, res)   char([[w11, ..], ..], res)
//   trivial(dim, group=G, space=S) | trivial(dim, like=F)   with S = torus(d, res) | points(k)
//   tensor(F, F)   union(F, F)   sum(F, F)
//   extend(F, group=G, map=[gen, ..])
//   induce(F, cover=C)   restrict(F, cover=C)
Family build_family(const Expr& e, const std::string& base_dir = ".");
Family parse_family(std::string_view text, const std::string& base_dir = ".");

// Reads a family file: either a JSON document with an "expr" field (as written by
// `family build`) or a bare expression. Paths inside resolve against the file's directory.
Family load_family(const std::string& path);
// The expression text of a family file.
std::string family_source(const std::string& path);

}  // namespace flatdetect

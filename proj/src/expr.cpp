#include "flatdetect/expr.hpp"

#include "flatdetect/error.hpp"

#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace flatdetect {

namespace {

bool symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '/' || c == '-';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_value();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "' after expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  Expr at_here(Expr::Kind kind) const {
    Expr e;
    e.kind = kind;
    e.line = line_;
    e.column = col_;
    return e;
  }

  Expr parse_value() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '[') return parse_list();
    if (c == '"') return parse_string();
    const bool negative = c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
    if (std::isdigit(static_cast<unsigned char>(c)) || negative) return parse_integer();
    if (!symbol_char(c)) fail("unexpected '" + std::string(1, c) + "'");
    Expr e = at_here(Expr::Kind::Symbol);
    while (pos_ < text_.size() && symbol_char(text_[pos_])) {
      e.text += text_[pos_];
      advance();
    }
    if (peek('(')) {
      e.kind = Expr::Kind::Call;
      advance();
      if (!peek(')')) {
        while (true) {
          parse_argument(e);
          if (peek(',')) {
            advance();
            continue;
          }
          break;
        }
      }
      expect(')');
    }
    return e;
  }

  void parse_argument(Expr& call) {
    skip();
    const std::size_t save_pos = pos_;
    const int save_line = line_, save_col = col_;
    std::string key;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      key += text_[pos_];
      advance();
    }
    if (!key.empty() && peek('=')) {
      advance();
    } else {
      pos_ = save_pos;
      line_ = save_line;
      col_ = save_col;
      key.clear();
    }
    call.keys.push_back(key);
    call.items.push_back(parse_value());
  }

  Expr parse_list() {
    Expr e = at_here(Expr::Kind::List);
    advance();
    if (!peek(']')) {
      while (true) {
        e.items.push_back(parse_value());
        if (peek(',')) {
          advance();
          continue;
        }
        break;
      }
    }
    expect(']');
    return e;
  }

  Expr parse_string() {
    Expr e = at_here(Expr::Kind::String);
    advance();
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\n') fail("unterminated string");
      e.text += text_[pos_];
      advance();
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    advance();
    return e;
  }

  Expr parse_integer() {
    Expr e = at_here(Expr::Kind::Integer);
    if (text_[pos_] == '-') {
      e.text += '-';
      advance();
    }
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      e.text += text_[pos_];
      advance();
    }
    if (pos_ < text_.size() && symbol_char(text_[pos_])) fail("malformed number '" + e.text + text_[pos_] + "'");
    try {
      e.value = std::stol(e.text);
    } catch (const std::out_of_range&) {
      fail("integer out of range: " + e.text);
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

[[noreturn]] void fail_at(const Expr& e, const std::string& msg) { throw ParseError(msg, e.line, e.column); }

// Positional and keyword arguments of a call, with arity checks.
class Args {
 public:
  Args(const Expr& call, std::size_t min_positional, std::size_t max_positional,
       std::initializer_list<const char*> keywords) {
    for (std::size_t i = 0; i < call.items.size(); ++i) {
      if (call.keys[i].empty()) {
        if (!named_.empty()) fail_at(call.items[i], "positional argument after keyword argument");
        positional_.push_back(&call.items[i]);
      } else {
        bool known = false;
        for (const char* k : keywords) known = known || call.keys[i] == k;
        if (!known) fail_at(call.items[i], call.text + "() has no argument '" + call.keys[i] + "'");
        for (const auto& [k, v] : named_)
          if (k == call.keys[i]) fail_at(call.items[i], "argument '" + k + "' given twice");
        named_.emplace_back(call.keys[i], &call.items[i]);
      }
    }
    if (positional_.size() < min_positional || positional_.size() > max_positional) {
      std::string want = std::to_string(min_positional);
      if (max_positional != min_positional) want += "-" + std::to_string(max_positional);
      fail_at(call, call.text + "() takes " + want + " positional argument(s), got " + std::to_string(positional_.size()));
    }
  }

  const Expr& at(std::size_t i) const { return *positional_.at(i); }
  std::size_t size() const { return positional_.size(); }
  const Expr* named(const std::string& key) const {
    for (const auto& [k, v] : named_)
      if (k == key) return v;
    return nullptr;
  }

 private:
  std::vector<const Expr*> positional_;
  std::vector<std::pair<std::string, const Expr*>> named_;
};

long integer(const Expr& e, const char* what) {
  if (e.kind != Expr::Kind::Integer) fail_at(e, std::string("expected an integer for ") + what);
  return e.value;
}

int small_int(const Expr& e, const char* what, long lo, long hi) {
  const long v = integer(e, what);
  if (v < lo || v > hi)
    fail_at(e, std::string(what) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                   std::to_string(v));
  return static_cast<int>(v);
}

const std::vector<Expr>& list(const Expr& e, const char* what) {
  if (e.kind != Expr::Kind::List) fail_at(e, std::string("expected a list for ") + what);
  return e.items;
}

std::string word_text(const Expr& e) {
  if (e.kind == Expr::Kind::Symbol || e.kind == Expr::Kind::String) return e.text;
  if (e.kind == Expr::Kind::Integer && e.value == 1) return "1";
  fail_at(e, "expected a word");
}

std::vector<std::vector<int>> int_matrix(const Expr& e, const char* what) {
  std::vector<std::vector<int>> rows;
  for (const Expr& row : list(e, what)) {
    rows.emplace_back();
    for (const Expr& x : list(row, what)) rows.back().push_back(small_int(x, what, -1000000, 1000000));
  }
  if (rows.empty()) fail_at(e, std::string(what) + " must not be empty");
  return rows;
}

bool is_path(const Expr& e) { return e.kind == Expr::Kind::Symbol || e.kind == Expr::Kind::String; }

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

constexpr int kMaxResolution = 1 << 16;

ParameterSpace build_space(const Expr& e) {
  if (e.kind != Expr::Kind::Call) fail_at(e, "expected torus(d, res) or points(k)");
  if (e.text == "torus") {
    Args a(e, 2, 2, {});
    return ParameterSpace::torus(small_int(a.at(0), "torus dimension", 1, kMaxLabels),
                                 small_int(a.at(1), "resolution", 2, kMaxResolution));
  }
  if (e.text == "points") {
    Args a(e, 1, 1, {});
    return ParameterSpace::points(small_int(a.at(0), "point count", 1, 1 << 20));
  }
  fail_at(e, "unknown parameter space '" + e.text + "'");
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse_all(); }

GroupPresentation build_group(const Expr& e, const std::string& base_dir) {
  if (is_path(e)) return load_presentation(resolve(base_dir, e.text));
  if (e.kind != Expr::Kind::Call) fail_at(e, "expected a group");
  if (e.text == "zn") return free_abelian_group(small_int(Args(e, 1, 1, {}).at(0), "rank", 0, kMaxLabels));
  if (e.text == "free") return free_group(small_int(Args(e, 1, 1, {}).at(0), "rank", 0, kMaxLabels));
  if (e.text == "surface") return surface_group(small_int(Args(e, 1, 1, {}).at(0), "genus", 1, kMaxLabels / 2));
  if (e.text == "klein") {
    Args(e, 0, 0, {});
    return klein_bottle_group();
  }
  if (e.text == "prod" || e.text == "freeprod") {
    Args a(e, 2, 2, {});
    const GroupPresentation l = build_group(a.at(0), base_dir);
    const GroupPresentation r = build_group(a.at(1), base_dir);
    return e.text == "prod" ? direct_product(l, r) : free_product(l, r);
  }
  fail_at(e, "unknown group '" + e.text + "'");
}

SubgroupCover build_cover(const Expr& e, const std::string& base_dir) {
  if (is_path(e)) return load_cover(resolve(base_dir, e.text));
  if (e.kind != Expr::Kind::Call) fail_at(e, "expected a cover");
  if (e.text == "circle") return circle_cover(small_int(Args(e, 1, 1, {}).at(0), "cover index", 1, 1 << 16));
  if (e.text == "klein") {
    Args(e, 0, 0, {});
    return klein_cover();
  }
  if (e.text == "torus") {
    const auto rows = int_matrix(Args(e, 1, 1, {}).at(0), "lattice matrix");
    RationalMatrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) fail_at(e, "lattice matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return torus_cover(m);
  }
  fail_at(e, "unknown cover '" + e.text + "'");
}

GroupClassDescriptor build_descriptor(const Expr& e, const std::string& base_dir) {
  if (e.kind != Expr::Kind::Call) fail_at(e, "expected a group descriptor");
  if (e.text == "zn") return GroupClassDescriptor::free_abelian(small_int(Args(e, 1, 1, {}).at(0), "rank", 0, kMaxLabels));
  if (e.text == "free") return GroupClassDescriptor::free(small_int(Args(e, 1, 1, {}).at(0), "rank", 0, kMaxLabels));
  if (e.text == "surface")
    return GroupClassDescriptor::surface(small_int(Args(e, 1, 1, {}).at(0), "genus", 1, kMaxLabels / 2));
  if (e.text == "prod" || e.text == "freeprod") {
    Args a(e, 2, 2, {});
    const auto l = build_descriptor(a.at(0), base_dir);
    const auto r = build_descriptor(a.at(1), base_dir);
    return e.text == "prod" ? GroupClassDescriptor::direct_product(l, r) : GroupClassDescriptor::free_product(l, r);
  }
  if (e.text == "super") {
    Args a(e, 3, 3, {"betti", "h1"});
    const auto sub = build_descriptor(a.at(0), base_dir);
    const int index = small_int(a.at(1), "index", 2, 1 << 20);
    const Expr& g = a.at(2);
    const std::string label = g.text;
    std::optional<HomologyTable> table;
    if (const Expr* betti = a.named("betti")) {
      table.emplace();
      for (const Expr& b : list(*betti, "betti")) table->betti.push_back(small_int(b, "Betti number", 0, 1 << 20));
      if (const Expr* h1 = a.named("h1"))
        for (const Expr& w : list(*h1, "h1")) table->h1_words.push_back(word_text(w));
    } else if (a.named("h1")) {
      fail_at(e, "h1 representatives need a betti table");
    }
    return GroupClassDescriptor::finite_index_super(sub, index, label, build_group(g, base_dir), table);
  }
  fail_at(e, "unknown group descriptor '" + e.text + "'");
}

GroupClassDescriptor parse_descriptor(std::string_view text, const std::string& base_dir) {
  return build_descriptor(parse_expr(text), base_dir);
}

Family build_family(const Expr& e, const std::string& base_dir) {
  if (is_path(e)) return load_family(resolve(base_dir, e.text));
  if (e.kind != Expr::Kind::Call) fail_at(e, "expected a family expression");
  const std::string& f = e.text;
  if (f == "char_zn") {
    Args a(e, 2, 2, {});
    return character_family_Zn(small_int(a.at(0), "rank", 1, kMaxLabels), small_int(a.at(1), "resolution", 2, kMaxResolution));
  }
  if (f == "char") {
    Args a(e, 2, 2, {});
    return character_family(int_matrix(a.at(0), "winding matrix"), small_int(a.at(1), "resolution", 2, kMaxResolution));
  }
  if (f == "trivial") {
    Args a(e, 1, 1, {"group", "space", "like"});
    const int dim = small_int(a.at(0), "dimension", 1, 1 << 12);
    if (const Expr* like = a.named("like")) {
      if (a.named("group") || a.named("space")) fail_at(e, "trivial(): 'like' excludes 'group' and 'space'");
      const Family model = build_family(*like, base_dir);
      return trivial_family(model.group(), dim, model.space());
    }
    const Expr* group = a.named("group");
    if (!group) fail_at(e, "trivial() needs group= or like=");
    const ParameterSpace space = a.named("space") ? build_space(*a.named("space")) : ParameterSpace::points(1);
    return trivial_family(build_group(*group, base_dir), dim, space);
  }
  if (f == "tensor" || f == "union" || f == "sum") {
    Args a(e, 2, 2, {});
    const Family l = build_family(a.at(0), base_dir);
    const Family r = build_family(a.at(1), base_dir);
    if (f == "tensor") return tensor_families(l, r);
    if (f == "union") return disjoint_union(l, r);
    return direct_sum(l, r);
  }
  if (f == "extend") {
    Args a(e, 1, 1, {"group", "map"});
    const Family inner = build_family(a.at(0), base_dir);
    const Expr* group = a.named("group");
    if (!group) fail_at(e, "extend() needs group=");
    std::vector<std::string> placement;
    if (const Expr* map = a.named("map"))
      for (const Expr& g : list(*map, "map")) placement.push_back(word_text(g));
    return extend_free_product(inner, build_group(*group, base_dir), placement);
  }
  if (f == "induce" || f == "restrict") {
    Args a(e, 1, 1, {"cover"});
    const Family inner = build_family(a.at(0), base_dir);
    const Expr* cover = a.named("cover");
    if (!cover) fail_at(e, f + "() needs cover=");
    const SubgroupCover c = build_cover(*cover, base_dir);
    return f == "induce" ? induce_family(inner, c) : restrict_family(inner, c);
  }
  fail_at(e, "unknown family combinator '" + f + "'");
}

Family parse_family(std::string_view text, const std::string& base_dir) {
  return build_family(parse_expr(text), base_dir);
}

std::string family_source(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return text;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("family file is not valid JSON: ") + err.what(), 1, static_cast<int>(err.byte));
  }
  if (!doc.is_object() || !doc.contains("expr") || !doc["expr"].is_string())
    throw ParseError("family file has no \"expr\" string", 1, 1);
  return doc["expr"].get<std::string>();
}

Family load_family(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_family(family_source(path), dir.empty() ? "." : dir);
}

}  // namespace flatdetect

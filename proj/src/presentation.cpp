#include "flatdetect/presentation.hpp"

#include "flatdetect/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

namespace flatdetect {

Word Word::inverse() const {
  Word out;
  out.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back({it->generator, !it->inverse});
  return out;
}

Word Word::operator*(const Word& rhs) const {
  Word out = *this;
  out.letters.insert(out.letters.end(), rhs.letters.begin(), rhs.letters.end());
  return out;
}

Word free_reduce(const Word& w) {
  // Stack reduction: each letter either cancels the top or is pushed.
  Word out;
  out.letters.reserve(w.letters.size());
  for (const Letter& l : w.letters) {
    if (!out.letters.empty() && out.letters.back().generator == l.generator &&
        out.letters.back().inverse != l.inverse) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.letters.size(); ++i) {
    const Letter& a = w.letters[i - 1];
    const Letter& b = w.letters[i];
    if (a.generator == b.generator && a.inverse != b.inverse) return false;
  }
  return true;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto head = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(head) || s[0] == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_';
  });
}

GroupPresentation::GroupPresentation(std::vector<std::string> generators, std::vector<Word> relators)
    : generators_(std::move(generators)), relators_(std::move(relators)) {
  std::unordered_set<std::string> seen;
  for (const auto& g : generators_) {
    if (!is_identifier(g)) throw InvalidInput("invalid generator name '" + g + "'");
    if (!seen.insert(g).second) throw InvalidInput("duplicate generator '" + g + "'");
  }
  for (const auto& r : relators_)
    for (const Letter& l : r.letters)
      if (l.generator >= generators_.size()) throw InvalidInput("relator letter refers to an undeclared generator");
}

std::size_t GroupPresentation::index_of(std::string_view name) const {
  const auto it = std::find(generators_.begin(), generators_.end(), name);
  if (it == generators_.end()) throw InvalidInput("undeclared generator '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - generators_.begin());
}

bool GroupPresentation::has_generator(std::string_view name) const {
  return std::find(generators_.begin(), generators_.end(), name) != generators_.end();
}

std::string GroupPresentation::format_word(const Word& w) const {
  std::string out;
  for (const Letter& l : w.letters) {
    if (!out.empty()) out += ' ';
    out += generators_.at(l.generator);
    if (l.inverse) out += "^-1";
  }
  return out;
}

std::string GroupPresentation::to_text() const {
  std::string out = "gens:";
  for (const auto& g : generators_) out += " " + g;
  out += "; rels:";
  for (std::size_t i = 0; i < relators_.size(); ++i) {
    out += (i == 0 ? " " : ", ");
    out += format_word(relators_[i]);
  }
  out += ";";
  return out;
}

namespace {

// Hand-written scanner; the grammar is small enough that a generator would only add weight.
class PresentationScanner {
 public:
  explicit PresentationScanner(std::string_view text) : text_(text) {}

  struct Token {
    enum class Kind { Identifier, Colon, Semicolon, Comma, Inverse, End } kind;
    std::string text;
    int line;
    int column;
  };

  Token next() {
    skip_space();
    const int line = line_;
    const int col = col_;
    if (pos_ >= text_.size()) return {Token::Kind::End, "", line, col};
    const char c = text_[pos_];
    if (c == ':') return single(Token::Kind::Colon, line, col);
    if (c == ';') return single(Token::Kind::Semicolon, line, col);
    if (c == ',') return single(Token::Kind::Comma, line, col);
    if (c == '^') {
      if (text_.substr(pos_, 3) == "^-1") {
        advance(3);
        return {Token::Kind::Inverse, "^-1", line, col};
      }
      throw ParseError("only '^-1' exponents are supported", line, col);
    }
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc) || c == '_') {
      std::string id;
      while (pos_ < text_.size()) {
        const auto u = static_cast<unsigned char>(text_[pos_]);
        if (!(std::isalnum(u) || text_[pos_] == '_')) break;
        id += text_[pos_];
        advance(1);
      }
      return {Token::Kind::Identifier, id, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  Token single(Token::Kind kind, int line, int col) {
    std::string t(1, text_[pos_]);
    advance(1);
    return {kind, t, line, col};
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

using Token = PresentationScanner::Token;

class PresentationParser {
 public:
  explicit PresentationParser(std::string_view text) : scanner_(text) { shift(); }

  GroupPresentation parse() {
    expect_keyword("gens");
    expect(Token::Kind::Colon, "':'");
    std::vector<std::string> gens;
    while (current_.kind == Token::Kind::Identifier) {
      if (std::find(gens.begin(), gens.end(), current_.text) != gens.end())
        throw ParseError("duplicate generator '" + current_.text + "'", current_.line, current_.column);
      gens.push_back(current_.text);
      shift();
    }
    expect(Token::Kind::Semicolon, "';' after generator list");

    expect_keyword("rels");
    expect(Token::Kind::Colon, "':'");
    std::vector<Word> rels;
    if (current_.kind != Token::Kind::Semicolon) {
      while (true) {
        Word w = parse_relator(gens);
        w = free_reduce(w);
        if (!w.empty()) rels.push_back(std::move(w));
        if (current_.kind == Token::Kind::Comma) {
          shift();
          continue;
        }
        break;
      }
    }
    expect(Token::Kind::Semicolon, "';' after relator list");
    if (current_.kind != Token::Kind::End)
      throw ParseError("trailing input after presentation", current_.line, current_.column);
    return GroupPresentation(std::move(gens), std::move(rels));
  }

 private:
  Word parse_relator(const std::vector<std::string>& gens) {
    Word w;
    if (current_.kind != Token::Kind::Identifier)
      throw ParseError("expected a relator word", current_.line, current_.column);
    while (current_.kind == Token::Kind::Identifier) {
      const auto it = std::find(gens.begin(), gens.end(), current_.text);
      if (it == gens.end())
        throw ParseError("undeclared generator '" + current_.text + "' in relator", current_.line, current_.column);
      Letter l{static_cast<std::size_t>(it - gens.begin()), false};
      shift();
      if (current_.kind == Token::Kind::Inverse) {
        l.inverse = true;
        shift();
      }
      w.letters.push_back(l);
    }
    return w;
  }

  void expect_keyword(const char* word) {
    if (current_.kind != Token::Kind::Identifier || current_.text != word)
      throw ParseError(std::string("expected '") + word + "'", current_.line, current_.column);
    shift();
  }

  void expect(Token::Kind kind, const char* what) {
    if (current_.kind != kind) throw ParseError(std::string("expected ") + what, current_.line, current_.column);
    shift();
  }

  void shift() { current_ = scanner_.next(); }

  PresentationScanner scanner_;
  Token current_{};
};

}  // namespace

GroupPresentation parse_presentation(std::string_view text) { return PresentationParser(text).parse(); }

GroupPresentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open presentation file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_presentation(buf.str());
}

Word parse_word(std::string_view text, const GroupPresentation& g) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    bool inverse = false;
    if (tok.size() > 3 && tok.ends_with("^-1")) {
      inverse = true;
      tok.resize(tok.size() - 3);
    }
    if (!g.has_generator(tok) && (tok == "e" || tok == "1") && !inverse) continue;
    if (!g.has_generator(tok)) throw InvalidInput("undeclared generator '" + tok + "' in word '" + std::string(text) + "'");
    w.letters.push_back({g.index_of(tok), inverse});
  }
  return w;
}

Matrix evaluate_word(const Word& w, const RepPoint& point) {
  std::optional<Eigen::Index> dim;
  for (const Letter& l : w.letters) {
    if (l.generator >= point.matrices.size()) throw InvalidInput("word refers to a generator without an assigned matrix");
    const Matrix& m = point.matrices[l.generator];
    if (m.rows() != m.cols()) throw InvalidInput("assigned matrix is not square");
    if (dim && *dim != m.rows()) throw InvalidInput("dimension mismatch among assigned matrices");
    dim = m.rows();
  }
  const Eigen::Index n = dim.value_or(point.dimension());
  Matrix out = Matrix::Identity(n, n);
  for (const Letter& l : w.letters) {
    const Matrix& m = point.matrices[l.generator];
    if (l.inverse) {
      out = out * m.adjoint();
    } else {
      out = out * m;
    }
  }
  return out;
}

}  // namespace flatdetect

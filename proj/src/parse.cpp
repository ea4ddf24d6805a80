#include "rlab/parse.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rlab {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(fmt::format("line {}, column {}: {}", line, column, message)),
      line_(line),
      column_(column) {}

namespace {

struct Factor {
  FieldExpr expr;
  bool literal = false;  // bare number, possibly negated
};

class Parser {
 public:
  Parser(std::string_view text, int line) : text_(text), line_(line) {}

  FieldExpr parse() {
    FieldExpr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, int(pos_) + 1, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }

  bool peek_number() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_space();
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
      if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
        end = exp;
        digits();
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end || end == start) fail("malformed number");
    pos_ = end;
    return value;
  }

  FieldExpr expr() {
    std::vector<FieldExpr> terms;
    terms.push_back(term());
    while (true) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(FieldExpr::scale(-1.0, term()));
      } else {
        break;
      }
    }
    if (terms.size() == 1) return terms.front();
    return FieldExpr::sum(std::move(terms));
  }

  FieldExpr term() {
    Factor acc = unary();
    while (accept('*')) {
      Factor next = unary();
      if (acc.literal) {
        acc = {FieldExpr::scale(acc.expr.value(), next.expr), false};
      } else if (next.literal) {
        acc = {FieldExpr::scale(next.expr.value(), acc.expr), false};
      } else {
        acc = {FieldExpr::product(acc.expr, next.expr), false};
      }
    }
    return acc.expr;
  }

  Factor unary() {
    if (accept('-')) {
      Factor f = unary();
      if (f.literal) return {FieldExpr::constant(-f.expr.value()), true};
      return {FieldExpr::scale(-1.0, f.expr), false};
    }
    return primary();
  }

  Factor primary() {
    if (peek_number()) return {FieldExpr::constant(number()), true};
    if (accept('(')) {
      FieldExpr e = expr();
      expect(')');
      return {e, false};
    }
    const std::size_t ident_pos = pos_;
    const std::string name = identifier();
    if (name.empty()) {
      if (pos_ >= text_.size()) fail("unexpected end of input");
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    if (name == "q") return {FieldExpr::coord(Var::q), false};
    if (name == "p") return {FieldExpr::coord(Var::p), false};
    if (name == "sin" || name == "cos") return {trig(name == "sin" ? Phase::sin : Phase::cos), false};
    if (name == "bump" || name == "cbump") return {bump(name == "bump"), false};
    pos_ = ident_pos;
    skip_space();
    fail("unknown identifier '" + name + "'");
  }

  Var coordinate() {
    const std::size_t at = pos_;
    const std::string name = identifier();
    if (name == "q") return Var::q;
    if (name == "p") return Var::p;
    pos_ = at;
    skip_space();
    if (name.empty()) fail("expected 'q' or 'p'");
    fail("unknown identifier '" + name + "'");
  }

  int integer_mode(double value, std::size_t at) {
    if (value != std::nearbyint(value) || std::abs(value) > 1e6) {
      pos_ = at;
      fail(fmt::format("non-integer trig mode {} (torus modes must be integers)", value));
    }
    return static_cast<int>(value);
  }

  FieldExpr trig(Phase phase) {
    expect('(');
    skip_space();
    // 2pi, with `2*pi` accepted as a spelling
    const std::size_t at = pos_;
    if (!peek_number() || number() != 2.0) {
      pos_ = at;
      fail("expected '2pi' in trig argument");
    }
    accept('*');
    if (identifier() != "pi") {
      pos_ = at;
      fail("expected '2pi' in trig argument");
    }
    expect('*');
    expect('(');
    int kq = 0;
    int kp = 0;
    bool first = true;
    while (true) {
      double sign = 1.0;
      if (!first) {
        if (accept('+')) {
        } else if (accept('-')) {
          sign = -1.0;
        } else {
          break;
        }
      }
      first = false;
      while (accept('-')) sign = -sign;
      skip_space();
      const std::size_t coef_at = pos_;
      double coef = 1.0;
      if (peek_number()) {
        coef = number();
        expect('*');
      }
      while (accept('-')) sign = -sign;
      const Var v = coordinate();
      const int k = integer_mode(sign * coef, coef_at);
      (v == Var::q ? kq : kp) += k;
    }
    expect(')');
    expect(')');
    return FieldExpr::trig(kq, kp, phase);
  }

  double signed_number() {
    double sign = 1.0;
    while (accept('-')) sign = -sign;
    if (!peek_number()) fail("expected a number");
    return sign * number();
  }

  FieldExpr bump(bool periodic) {
    expect('(');
    const Var v = coordinate();
    int order = 0;
    if (accept(',')) {
      skip_space();
      const std::size_t at = pos_;
      const double o = signed_number();
      if (o != std::nearbyint(o) || o < 0) {
        pos_ = at;
        fail("bump derivative order must be a non-negative integer");
      }
      order = static_cast<int>(o);
    }
    expect(';');
    skip_space();
    const std::size_t at = pos_;
    const double center = signed_number();
    expect(',');
    const double inner = signed_number();
    expect(',');
    const double outer = signed_number();
    expect(')');
    try {
      return FieldExpr::bump(v, center, inner, outer, periodic, order);
    } catch (const std::invalid_argument& e) {
      pos_ = at;
      fail(e.what());
    }
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::string number_text(double v) { return fmt::format("{:.17g}", v); }

void print_into(const FieldExpr& f, std::string& out) {
  using Kind = FieldExpr::Kind;
  switch (f.kind()) {
    case Kind::constant:
      out += number_text(f.value());
      return;
    case Kind::coord:
      out += to_string(f.var());
      return;
    case Kind::trig:
      out += fmt::format("{}(2pi*({}*q + {}*p))", f.phase() == Phase::sin ? "sin" : "cos", f.kq(),
                         f.kp());
      return;
    case Kind::bump: {
      const auto& b = f.bump_params();
      out += b.periodic ? "bump(" : "cbump(";
      out += to_string(b.var);
      if (b.order > 0) out += fmt::format(", {}", b.order);
      out += fmt::format("; {}, {}, {})", number_text(b.center), number_text(b.inner),
                         number_text(b.outer));
      return;
    }
    case Kind::sum: {
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += " + ";
        first = false;
        if (c.kind() == Kind::sum) {
          out += '(';
          print_into(c, out);
          out += ')';
        } else {
          print_into(c, out);
        }
      }
      return;
    }
    case Kind::product:
      out += '(';
      print_into(f.children()[0], out);
      out += ")*(";
      print_into(f.children()[1], out);
      out += ')';
      return;
    case Kind::scale:
      out += number_text(f.value());
      out += "*(";
      print_into(f.children()[0], out);
      out += ')';
      return;
  }
}

}  // namespace

FieldExpr parse_field(std::string_view text, int line) { return Parser(text, line).parse(); }

std::string print_field(const FieldExpr& f) {
  std::string out;
  print_into(f, out);
  return out;
}

std::vector<NamedField> parse_field_file(std::string_view text) {
  std::vector<NamedField> fields;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(line_no, int(first) + 1, "expected 'name = <expr>'");
      }
      std::string_view name = line.substr(0, eq);
      const auto name_end = name.find_last_not_of(" \t");
      name = name.substr(first, name_end + 1 - first);
      for (std::size_t i = 0; i < name.size(); ++i) {
        const char c = name[i];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) {
          throw ParseError(line_no, int(first + i) + 1, "invalid field name");
        }
      }
      if (name.empty()) throw ParseError(line_no, int(first) + 1, "missing field name");
      // Re-anchor columns of the expression to the full line.
      const std::string padded = std::string(eq + 1, ' ') + std::string(line.substr(eq + 1));
      fields.push_back({std::string(name), parse_field(padded, line_no)});
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return fields;
}

std::vector<NamedField> load_field_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_field_file(buffer.str());
}

void save_field_file(const std::filesystem::path& path, const std::vector<NamedField>& fields,
                     std::string_view header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write field file " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  for (const auto& f : fields) out << f.name << " = " << print_field(f.field) << '\n';
  if (!out) throw std::runtime_error("failed writing field file " + path.string());
}

}  // namespace rlab

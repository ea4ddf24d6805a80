#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

/// Syntax or semantic error in field DSL text. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses one field expression.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary ('*' unary)*
///   unary   := '-' unary | primary
///   primary := number | 'q' | 'p' | '(' expr ')'
///            | ('sin' | 'cos') '(' '2pi' '*' '(' linear ')' ')'
///            | ('bump' | 'cbump') '(' ('q' | 'p') [',' order] ';' center ',' inner ',' outer ')'
///   linear  := ['-'] [number '*'] ('q' | 'p') (('+' | '-') [number '*'] ('q' | 'p'))*
///
/// A bare numeric literal next to '*' scales the other factor; any other '*'
/// is a field product. `bump` wraps around the torus, `cbump` lives on a chart.
FieldExpr parse_field(std::string_view text, int line = 1);

/// Prints a tree in DSL form; parse_field(print_field(f)) rebuilds an equal tree
/// for every tree produced by parse_field.
std::string print_field(const FieldExpr& f);

struct NamedField {
  std::string name;
  FieldExpr field;
};

/// Field files hold one `name = <expr>` per line; '#' starts a comment.
std::vector<NamedField> parse_field_file(std::string_view text);
std::vector<NamedField> load_field_file(const std::filesystem::path& path);
void save_field_file(const std::filesystem::path& path, const std::vector<NamedField>& fields,
                     std::string_view header_comment = {});

}  // namespace rlab

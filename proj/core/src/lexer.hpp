#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pterm/ast.hpp"

namespace pterm::frontend {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

/// Splits program text into tokens. `#` and `//` start line comments.
std::vector<Token> tokenize(std::string_view text);

}  // namespace pterm::frontend

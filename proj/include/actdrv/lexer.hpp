/*
 * Copyright (c) 2026, the actdrv authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ACTDRV_LEXER_HPP_
#define ACTDRV_LEXER_HPP_

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "actdrv/diag.hpp"

namespace actdrv {

// Shared tokenizer for the .prot and .drv grammars. `#` starts a comment
// that runs to end of line. Identifiers are [A-Za-z_][A-Za-z0-9_]*.
// Everything else is punctuation, matched longest-first for the two-char
// operators (`->`, `==`, `!=`, `&&`, `||`).

enum class TokKind { Ident, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SourceLoc loc;

  bool is(std::string_view punct) const {
    return kind == TokKind::Punct && text == punct;
  }
  bool is_ident(std::string_view word) const {
    return kind == TokKind::Ident && text == word;
  }
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) { tokenize(text); }

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + static_cast<std::size_t>(ahead);
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  Token next() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(std::string_view punct) {
    if (peek().is(punct)) {
      next();
      return true;
    }
    return false;
  }

  bool accept_ident(std::string_view word) {
    if (peek().is_ident(word)) {
      next();
      return true;
    }
    return false;
  }

  Token expect(std::string_view punct) {
    if (!peek().is(punct)) {
      throw ParseError("expected '" + std::string(punct) + "', got '" +
                           describe(peek()) + "'",
                       peek().loc);
    }
    return next();
  }

  Token expect_ident() {
    if (peek().kind != TokKind::Ident) {
      throw ParseError("expected identifier, got '" + describe(peek()) + "'",
                       peek().loc);
    }
    return next();
  }

  Token expect_keyword(std::string_view word) {
    if (!peek().is_ident(word)) {
      throw ParseError("expected '" + std::string(word) + "', got '" +
                           describe(peek()) + "'",
                       peek().loc);
    }
    return next();
  }

  bool at_end() const { return peek().kind == TokKind::End; }

  static std::string describe(const Token& t) {
    return t.kind == TokKind::End ? "end of input" : t.text;
  }

 private:
  void tokenize(std::string_view text) {
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k, ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == '#') {
        while (i < text.size() && text[i] != '\n') advance(1);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      SourceLoc loc{line, col};
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = i;
        while (i < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[i])) ||
                text[i] == '_')) {
          advance(1);
        }
        tokens_.push_back(
            {TokKind::Ident, std::string(text.substr(start, i - start)), loc});
        continue;
      }
      static constexpr std::string_view two_char[] = {"->", "==", "!=", "&&",
                                                      "||"};
      bool matched = false;
      for (auto op : two_char) {
        if (text.substr(i, 2) == op) {
          tokens_.push_back({TokKind::Punct, std::string(op), loc});
          advance(2);
          matched = true;
          break;
        }
      }
      if (matched) continue;
      tokens_.push_back({TokKind::Punct, std::string(1, c), loc});
      advance(1);
    }
    tokens_.push_back({TokKind::End, "", SourceLoc{line, col}});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace actdrv

#endif  // ACTDRV_LEXER_HPP_

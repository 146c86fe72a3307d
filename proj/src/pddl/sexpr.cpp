// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/pddl/sexpr.hpp"

#include <cctype>

#include "mmrec/pddl/error.hpp"

namespace mmrec::pddl {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw PddlError(ErrorKind::LexError, "unexpected end of input", line_, col_);
    }
    SExpr node;
    node.line = line_;
    node.column = col_;
    const char c = text_[pos_];
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) {
          throw PddlError(ErrorKind::LexError, "unbalanced '('", node.line, node.column);
        }
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    if (c == ')') {
      throw PddlError(ErrorKind::LexError, "unexpected ')'", line_, col_);
    }
    while (pos_ < text_.size()) {
      const unsigned char ch = static_cast<unsigned char>(text_[pos_]);
      if (std::isspace(ch) || ch == '(' || ch == ')' || ch == ';') break;
      if (ch < 0x21 || ch == '"') {
        throw PddlError(ErrorKind::LexError, "invalid character in symbol", line_, col_);
      }
      node.symbol.push_back(static_cast<char>(std::tolower(ch)));
      advance();
    }
    return node;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

}  // namespace mmrec::pddl

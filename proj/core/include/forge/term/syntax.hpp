#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "forge/term/store.hpp"
#include "forge/term/term.hpp"

namespace forge {

struct Token {
  enum class Kind { Ident, Punct, Arrow, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Tokenizer shared by every DSL. Identifiers are [A-Za-z0-9_$]+; '#' starts
// a comment running to end of line.
std::vector<Token> tokenize(std::string_view text, std::size_t first_line = 1);

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens);

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool accept(std::string_view punct_or_word);
  const Token& expect(std::string_view punct_or_word);
  const Token& expect_ident(std::string_view what);
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] static void fail_at(const Token& t, const std::string& message);

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

struct TermSyntax {
  // Unknown compound heads are declared on first use with the observed arity.
  bool declare_on_use = false;
};

// Term grammar: chain := atom+ ; atom := 'eps' | ident | ident '(' chain {',' chain} ')'.
// All atoms of a chain but the last are rank-1 symbols wrapping what follows.
// A bare identifier that is a rank-1 symbol stands for sym(eps); an unknown bare
// identifier is a variable.
Term parse_term(TermStore& store, TokenCursor& in, TermSyntax opts = {});
Term parse_term(TermStore& store, std::string_view text, TermSyntax opts = {});
RewriteRule parse_rule(TermStore& store, std::string_view text, TermSyntax opts = {});

// Terms start with an identifier; used to stop a chain at keywords.
bool starts_term(const TermStore& store, const Token& t);

std::string to_string(const TermStore& store, Term t);
std::string to_string(const TermStore& store, const RewriteRule& r);
std::string to_string(const TermStore& store, const MultiRewriteRule& r);

}  // namespace forge

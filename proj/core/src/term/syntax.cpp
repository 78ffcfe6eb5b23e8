#include "forge/term/syntax.hpp"

#include <array>
#include <cctype>

#include "forge/error.hpp"

namespace forge {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

// Words that end a juxtaposed chain in the line-oriented DSLs.
constexpr std::array<std::string_view, 6> kStopWords = {"goto", "children", "rule", "in", "on", "typeof"};

bool is_stop_word(std::string_view w) {
  for (auto s : kStopWords) {
    if (s == w) return true;
  }
  return false;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, std::size_t first_line) {
  std::vector<Token> out;
  std::size_t line = first_line;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Token::Kind::Arrow;
      t.text = "->";
      advance(2);
    } else if (std::string_view("(),<>.:;|/+-=[]{}*").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

TokenCursor::TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != Token::Kind::End) tokens_.push_back(Token{});
}

const Token& TokenCursor::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

const Token& TokenCursor::next() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenCursor::accept(std::string_view w) {
  if (peek().kind != Token::Kind::End && peek().text == w) {
    next();
    return true;
  }
  return false;
}

const Token& TokenCursor::expect(std::string_view w) {
  if (peek().kind == Token::Kind::End || peek().text != w) {
    fail("expected '" + std::string(w) + "'" +
         (at_end() ? std::string(" at end of input") : ", found '" + peek().text + "'"));
  }
  return next();
}

const Token& TokenCursor::expect_ident(std::string_view what) {
  if (peek().kind != Token::Kind::Ident) {
    fail("expected " + std::string(what) +
         (at_end() ? std::string(" at end of input") : ", found '" + peek().text + "'"));
  }
  return next();
}

void TokenCursor::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenCursor::fail_at(const Token& t, const std::string& message) {
  throw SyntaxError(message, t.line, t.column);
}

bool starts_term(const TermStore&, const Token& t) {
  return t.kind == Token::Kind::Ident && !is_stop_word(t.text);
}

namespace {

Term parse_atom_chain(TermStore& store, TokenCursor& in, TermSyntax opts);

Term parse_compound(TermStore& store, TokenCursor& in, const Token& head, TermSyntax opts) {
  in.expect("(");
  std::vector<Term> kids;
  if (!in.accept(")")) {
    do {
      kids.push_back(parse_atom_chain(store, in, opts));
    } while (in.accept(","));
    in.expect(")");
  }
  auto sym = store.find(head.text);
  if (!sym) {
    if (!opts.declare_on_use) TokenCursor::fail_at(head, "undeclared symbol '" + head.text + "'");
    sym = store.declare(head.text, static_cast<unsigned>(kids.size()));
  }
  if (store.rank(*sym) != kids.size()) {
    TokenCursor::fail_at(head, "symbol '" + head.text + "' has rank " + std::to_string(store.rank(*sym)) +
                                   " but is applied to " + std::to_string(kids.size()) + " arguments");
  }
  return store.apply(*sym, kids);
}

Term parse_atom_chain(TermStore& store, TokenCursor& in, TermSyntax opts) {
  std::vector<SymbolId> wrappers;
  Term base{};
  for (;;) {
    const Token& t = in.peek();
    if (t.kind != Token::Kind::Ident || is_stop_word(t.text)) in.fail("expected a term");
    Token head = in.next();
    if (head.text == "eps") {
      base = store.leaf();
      break;
    }
    if (in.peek().text == "(" && in.peek().kind == Token::Kind::Punct) {
      base = parse_compound(store, in, head, opts);
      break;
    }
    auto sym = store.find(head.text);
    // juxtaposition never crosses a line break
    bool continues = starts_term(store, in.peek()) && in.peek().line == head.line;
    if (!sym && opts.declare_on_use && continues) sym = store.declare(head.text, 1);
    if (!sym) {
      base = store.var(head.text);
      break;
    }
    unsigned r = store.rank(*sym);
    if (r == 0) {
      base = store.constant(*sym);
      break;
    }
    if (r != 1) TokenCursor::fail_at(head, "symbol '" + head.text + "' of rank " + std::to_string(r) + " needs arguments");
    wrappers.push_back(*sym);
    if (!continues) {
      base = store.leaf();
      break;
    }
  }
  for (auto it = wrappers.rbegin(); it != wrappers.rend(); ++it) base = store.apply(*it, {base});
  return base;
}

void print(const TermStore& store, Term t, bool chains, std::string& out) {
  switch (store.kind(t)) {
    case NodeKind::Leaf:
      out += "eps";
      return;
    case NodeKind::Var:
      out += store.var_name(store.var_of(t));
      return;
    case NodeKind::Apply:
      break;
  }
  if (chains) {
    out += store.name(store.head(t));
    Term c = store.child(t, 0);
    if (!store.is_leaf(c)) {
      out += ' ';
      print(store, c, chains, out);
    }
    return;
  }
  out += store.name(store.head(t));
  auto kids = store.children(t);
  if (kids.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i > 0) out += ", ";
    print(store, kids[i], chains, out);
  }
  out += ')';
}

}  // namespace

Term parse_term(TermStore& store, TokenCursor& in, TermSyntax opts) { return parse_atom_chain(store, in, opts); }

Term parse_term(TermStore& store, std::string_view text, TermSyntax opts) {
  TokenCursor in(tokenize(text));
  Term t = parse_term(store, in, opts);
  if (!in.at_end()) in.fail("trailing input after term");
  return t;
}

RewriteRule parse_rule(TermStore& store, std::string_view text, TermSyntax opts) {
  TokenCursor in(tokenize(text));
  RewriteRule r;
  r.lhs = parse_term(store, in, opts);
  if (in.peek().kind != Token::Kind::Arrow) in.fail("expected '->'");
  in.next();
  r.rhs = parse_term(store, in, opts);
  if (!in.at_end()) in.fail("trailing input after rule");
  if (!is_valid(store, r)) throw Error("invalid rule: right-hand side uses variables absent on the left");
  return r;
}

std::string to_string(const TermStore& store, Term t) {
  std::string out;
  print(store, t, store.all_monadic(), out);
  return out;
}

std::string to_string(const TermStore& store, const RewriteRule& r) {
  return (r.from_bottom ? std::string("_") : to_string(store, r.lhs)) + " -> " + to_string(store, r.rhs);
}

std::string to_string(const TermStore& store, const MultiRewriteRule& r) {
  std::string out;
  for (std::size_t i = 0; i < r.lhs.size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(store, r.lhs[i]);
  }
  return out + " -> " + to_string(store, r.rhs);
}

}  // namespace forge

#include "rhocomb/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "rhocomb/congruence.hpp"

namespace rhocomb {

namespace {

enum class Tok { Ident, Level, Zero, LParen, RParen, Comma, Bar, Bang, At, Star, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident:
    case Tok::Level: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s[i]) & 0xc0) != 0x80) {
        ++col;
      }
    }
  };
  auto ident_char = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\''; };
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    const std::size_t l = line, c = col;
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, ch), l, c});
      advance(1);
    };
    switch (ch) {
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case ',': single(Tok::Comma); continue;
      case '|': single(Tok::Bar); continue;
      case '!': single(Tok::Bang); continue;
      case '@': single(Tok::At); continue;
      case '*': single(Tok::Star); continue;
      case '0':
        if (i + 1 < s.size() && ident_char(s[i + 1])) throw ParseError("unexpected character after '0'", l, c);
        single(Tok::Zero);
        continue;
      default: break;
    }
    if (ch == '<' && i + 1 < s.size() && s[i + 1] == '-') {
      out.push_back({Tok::Arrow, "<-", l, c});
      advance(2);
      continue;
    }
    if (s.substr(i, 3) == "\xE2\x86\x90") {  // ←
      out.push_back({Tok::Arrow, "<-", l, c});
      advance(3);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, c});
      advance(j - i);
      continue;
    }
    if (ch == '#') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1) throw ParseError("'#' must be followed by digits", l, c);
      out.push_back({Tok::Level, std::string(s.substr(i, j - i)), l, c});
      advance(j - i);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

std::optional<Kind> combinator_kind(std::string_view id) {
  if (id == "m") return Kind::Msg;
  if (id == "d") return Kind::Dup;
  if (id == "k") return Kind::Kill;
  if (id == "fw") return Kind::Fwd;
  if (id == "bl") return Kind::BindL;
  if (id == "br") return Kind::BindR;
  if (id == "s") return Kind::Sync;
  return std::nullopt;
}

bool has_combinators(Calculus c) { return c == Calculus::Yoshida || c == Calculus::RhoComb; }
bool has_drop(Calculus c) { return c == Calculus::Rho || c == Calculus::RhoComb; }

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Term whole(Calculus c) {
    Term t = par(c, false);
    expect(Tok::End);
    return t;
  }

  Name whole_name(Calculus c) {
    Name n = name(c);
    expect(Tok::End);
    return n;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
  bool at_ident(std::string_view id) const { return at(Tok::Ident) && peek().text == id; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(what + ", found " + describe(t), t.line, t.column);
  }

  const Token& expect(Tok k) {
    if (!at(k)) {
      static constexpr const char* names[] = {"identifier", "bound level name", "'0'", "'('", "')'", "','",
                                              "'|'",        "'!'",              "'@'", "'*'", "'<-'", "end of input"};
      fail(std::string("expected ") + names[static_cast<int>(k)]);
    }
    return toks_[pos_++];
  }

  std::string binder_ident() {
    if (at(Tok::Level)) return toks_[pos_++].text;
    return expect(Tok::Ident).text;
  }

  bool starts_name() const { return at(Tok::Ident) || at(Tok::Level) || at(Tok::At); }

  Name name(Calculus c) {
    if (at(Tok::Level)) {
      const Token& t = toks_[pos_];
      if (std::find(scope_.begin(), scope_.end(), t.text) == scope_.end())
        throw ParseError("level name " + t.text + " is reserved for bound names", t.line, t.column);
      ++pos_;
      return atom(t.text);
    }
    if (at(Tok::Ident)) return atom(toks_[pos_++].text);
    if (!at(Tok::At)) fail("expected a name");
    ++pos_;
    const Calculus q = quoted_calculus(c);
    if (at(Tok::Zero)) {
      ++pos_;
      return quote(zero());
    }
    if (at(Tok::LParen)) {
      ++pos_;
      Term p = par(q, false);
      expect(Tok::RParen);
      return quote(std::move(p));
    }
    return quote(prefix(q, false));
  }

  // payload: a bare name stands for its drop (ρ and RHO combinators).
  Term par(Calculus c, bool payload) {
    std::vector<Term> parts{prefix(c, payload)};
    while (at(Tok::Bar)) {
      ++pos_;
      parts.push_back(prefix(c, payload));
    }
    if (parts.size() == 1) return parts.front();
    return make_node(Kind::Par, {}, std::move(parts));
  }

  Term prefix(Calculus c, bool payload) {
    if (at(Tok::Zero)) {
      ++pos_;
      return zero();
    }
    if (at(Tok::LParen)) {
      if (at(Tok::Ident, 1) && peek(1).text == "new") return restriction(c, payload);
      ++pos_;
      Term t = par(c, payload);
      expect(Tok::RParen);
      return t;
    }
    if (at(Tok::Star)) {
      ++pos_;
      if (has_drop(c)) {
        if (at(Tok::LParen)) {
          ++pos_;
          Name x = name(c);
          expect(Tok::RParen);
          return drop(std::move(x));
        }
        return drop(name(c));
      }
      return repl(prefix(c, payload));
    }
    if (at_ident("for") && at(Tok::LParen, 1)) return input_prefix(c, payload);
    if (at(Tok::Ident) && at(Tok::LParen, 1) && has_combinators(c)) {
      if (auto k = combinator_kind(peek().text)) return combinator_atom(c, *k);
      fail("unknown combinator");
    }
    if (!starts_name()) fail("expected a process");
    const Token start = peek();
    Name ch = name(c);
    if (at(Tok::Bang)) return output_rest(c, std::move(ch), start);
    if (payload && has_drop(c)) return drop(std::move(ch));
    throw ParseError("a name cannot stand for a process here", start.line, start.column);
  }

  Term restriction(Calculus c, bool payload) {
    const Token start = peek();
    expect(Tok::LParen);
    ++pos_;  // new
    if (c != Calculus::Pi && c != Calculus::Yoshida)
      throw ParseError("restriction is not part of " + std::string(to_string(c)), start.line, start.column);
    std::vector<std::string> binders;
    while (!at(Tok::RParen)) binders.push_back(binder_ident());
    if (binders.empty()) fail("expected a restricted name");
    expect(Tok::RParen);
    for (const auto& b : binders) scope_.push_back(b);
    Term body = prefix(c, payload);
    scope_.resize(scope_.size() - binders.size());
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = nu(atom(*it), body);
    return body;
  }

  Term input_prefix(Calculus c, bool payload) {
    ++pos_;  // for
    expect(Tok::LParen);
    const bool pattern = at(Tok::At);
    Name binder = pattern ? name(c) : atom(binder_ident());
    expect(Tok::Arrow);
    Name ch = name(c);
    expect(Tok::RParen);
    if (!pattern) scope_.push_back(binder.id());
    Term body = prefix(c, payload);
    if (!pattern) scope_.pop_back();
    return input(std::move(binder), std::move(ch), std::move(body));
  }

  Term output_rest(Calculus c, Name ch, const Token& start) {
    expect(Tok::Bang);
    expect(Tok::LParen);
    Term out;
    if (c == Calculus::Pi) {
      out = output(std::move(ch), name(c));
    } else if (c == Calculus::Rho) {
      out = lift(std::move(ch), par(c, true));
    } else {
      throw ParseError("'!' output is not part of " + std::string(to_string(c)), start.line, start.column);
    }
    expect(Tok::RParen);
    return out;
  }

  Term combinator_atom(Calculus c, Kind k) {
    const Token start = peek();
    pos_ += 2;  // name and '('
    std::vector<Name> args{name(c)};
    if (k == Kind::Msg) {
      expect(Tok::Comma);
      if (c == Calculus::RhoComb) {
        Term payload = par(c, true);
        expect(Tok::RParen);
        return msg(std::move(args[0]), std::move(payload));
      }
      args.push_back(name(c));
      expect(Tok::RParen);
      return msg(std::move(args[0]), std::move(args[1]));
    }
    while (at(Tok::Comma)) {
      ++pos_;
      args.push_back(name(c));
    }
    expect(Tok::RParen);
    if (args.size() != combinator_arity(k))
      throw ParseError("combinator " + start.text + " takes " + std::to_string(combinator_arity(k)) +
                           " names, got " + std::to_string(args.size()),
                       start.line, start.column);
    return combinator(k, std::move(args));
  }
};

// ---------------------------------------------------------------------------

struct Printer {
  PrintOptions opts;
  int quote_level = 0;
  std::string out;

  void name(const Name& n) {
    if (n.is_atom()) {
      out += n.id();
      return;
    }
    if (n.process()->kind() == Kind::Zero) {
      out += "@0";
      return;
    }
    if (opts.quote_depth >= 0 && quote_level >= opts.quote_depth) {
      out += "@{" + digest_hex(n.digest()).substr(0, 8) + "}";
      return;
    }
    ++quote_level;
    out += "@(";
    proc(n.process());
    out += ")";
    --quote_level;
  }

  void names(std::span<const Name> ns) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (i) out += ',';
      name(ns[i]);
    }
  }

  void grouped(const Term& t) {
    if (t->kind() == Kind::Par) {
      out += '(';
      proc(t);
      out += ')';
    } else {
      proc(t);
    }
  }

  void proc(const Term& t) {
    const Node& n = *t;
    switch (n.kind()) {
      case Kind::Zero: out += '0'; return;
      case Kind::Par:
        for (std::size_t i = 0; i < n.children().size(); ++i) {
          if (i) out += " | ";
          grouped(n.child(i));
        }
        return;
      case Kind::New:
        out += "(new " + n.name(0).id() + ")";
        grouped(n.child(0));
        return;
      case Kind::Repl:
        out += '*';
        grouped(n.child(0));
        return;
      case Kind::Input:
        out += "for(";
        name(n.name(0));
        out += " <- ";
        name(n.name(1));
        out += ")(";
        proc(n.child(0));
        out += ')';
        return;
      case Kind::Output:
        name(n.name(0));
        out += "!(";
        name(n.name(1));
        out += ')';
        return;
      case Kind::Lift:
        name(n.name(0));
        out += "!(";
        if (n.child(0)->kind() == Kind::Drop) {
          name(n.child(0)->name(0));
        } else {
          proc(n.child(0));
        }
        out += ')';
        return;
      case Kind::Drop:
        out += "*(";
        name(n.name(0));
        out += ')';
        return;
      case Kind::Msg:
        out += "m(";
        name(n.name(0));
        out += ',';
        if (msg_has_process_payload(n)) {
          proc(n.child(0));
        } else {
          name(n.name(1));
        }
        out += ')';
        return;
      default:
        out += std::string(to_string(n.kind())) + "(";
        names(n.names());
        out += ')';
        return;
    }
  }
};

}  // namespace

Term parse(Calculus c, std::string_view text) {
  Term t = Parser(text).whole(c);
  check_well_formed(c, t);
  return t;
}

Name parse_name(Calculus c, std::string_view text) {
  Name n = Parser(text).whole_name(c);
  if (n.is_quote()) check_well_formed(quoted_calculus(c), n.process());
  return n;
}

std::string print(const Term& t, const PrintOptions& opts) {
  Printer p{opts, 0, {}};
  p.proc(t);
  return std::move(p.out);
}

std::string print(const Name& n, const PrintOptions& opts) {
  Printer p{opts, 0, {}};
  p.name(n);
  return std::move(p.out);
}

}  // namespace rhocomb

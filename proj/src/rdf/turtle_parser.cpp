#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "capgen/rdf/turtle.hpp"
#include "capgen/rdf/vocab.hpp"

namespace capgen::rdf {

std::string_view to_string(IssueCategory c) {
  switch (c) {
    case IssueCategory::MissingPrefix: return "MISSING_PREFIX";
    case IssueCategory::MalformedStatement: return "MALFORMED_STATEMENT";
    case IssueCategory::BadLiteral: return "BAD_LITERAL";
    case IssueCategory::BadIri: return "BAD_IRI";
    case IssueCategory::Other: return "OTHER";
  }
  return "OTHER";
}

namespace {

enum class Tok {
  IriRef,
  PName,
  BlankLabel,
  String,
  LangTag,
  Integer,
  Decimal,
  Double,
  True,
  False,
  A,
  Dot,
  Semicolon,
  Comma,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Carets,
  AtPrefix,
  AtBase,
  SparqlPrefix,
  SparqlBase,
  Error,
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;    // decoded value (IRI body, string content, number lexical)
  std::string prefix;  // PName only
  std::string local;   // PName only
  std::string raw;
  int line = 1;
  int column = 1;
  IssueCategory error_category = IssueCategory::Other;
  std::string error_message;
};

bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c >= 0x80;
}
bool is_local_char(unsigned char c) { return is_name_char(c) || c == ':' || c == '%'; }

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      bool eof = t.kind == Tok::Eof;
      out.push_back(std::move(t));
      if (eof) break;
    }
    return out;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool at_end() const { return pos_ >= src_.size(); }
  unsigned char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? static_cast<unsigned char>(src_[pos_ + ahead]) : 0;
  }
  unsigned char get() {
    unsigned char c = static_cast<unsigned char>(src_[pos_++]);
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (!at_end()) {
      unsigned char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') get();
      } else if (std::isspace(c)) {
        get();
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, std::size_t start, int line, int col) {
    Token t;
    t.kind = kind;
    t.raw = std::string(src_.substr(start, pos_ - start));
    t.line = line;
    t.column = col;
    return t;
  }

  Token error(std::size_t start, int line, int col, IssueCategory cat, std::string msg) {
    Token t = make(Tok::Error, start, line, col);
    t.error_category = cat;
    t.error_message = std::move(msg);
    return t;
  }

  bool read_hex(int digits, unsigned long& cp) {
    cp = 0;
    for (int i = 0; i < digits; ++i) {
      unsigned char c = peek();
      if (!std::isxdigit(c)) return false;
      get();
      cp = cp * 16 + static_cast<unsigned long>(std::isdigit(c) ? c - '0' : (std::tolower(c) - 'a' + 10));
    }
    return true;
  }

  Token next() {
    skip_space();
    std::size_t start = pos_;
    int line = line_;
    int col = col_;
    if (at_end()) return make(Tok::Eof, start, line, col);
    unsigned char c = peek();

    switch (c) {
      case '<': return iri_ref(start, line, col);
      case '"':
      case '\'': return string_literal(start, line, col);
      case '@': return at_word(start, line, col);
      case ';': get(); return make(Tok::Semicolon, start, line, col);
      case ',': get(); return make(Tok::Comma, start, line, col);
      case '[': get(); return make(Tok::LBracket, start, line, col);
      case ']': get(); return make(Tok::RBracket, start, line, col);
      case '(': get(); return make(Tok::LParen, start, line, col);
      case ')': get(); return make(Tok::RParen, start, line, col);
      case '^':
        get();
        if (peek() == '^') {
          get();
          return make(Tok::Carets, start, line, col);
        }
        return error(start, line, col, IssueCategory::MalformedStatement, "stray '^'");
      default: break;
    }
    if (c == '.') {
      if (std::isdigit(peek(1))) return number(start, line, col);
      get();
      return make(Tok::Dot, start, line, col);
    }
    if (std::isdigit(c) || c == '+' || c == '-') return number(start, line, col);
    if (c == '_' && peek(1) == ':') return blank_label(start, line, col);
    if (c == ':' || is_name_start(c)) return name(start, line, col);
    get();
    // Swallow the rest of a UTF-8 sequence so columns stay sane.
    while (!at_end() && (peek() & 0xC0) == 0x80) get();
    return error(start, line, col, IssueCategory::MalformedStatement,
                 "unexpected character '" + std::string(src_.substr(start, pos_ - start)) + "'");
  }

  Token iri_ref(std::size_t start, int line, int col) {
    get();  // '<'
    std::string body;
    while (!at_end()) {
      unsigned char c = peek();
      if (c == '>') {
        get();
        Token t = make(Tok::IriRef, start, line, col);
        t.text = std::move(body);
        return t;
      }
      if (c == '\\') {
        get();
        unsigned char k = at_end() ? 0 : get();
        unsigned long cp = 0;
        if ((k == 'u' && read_hex(4, cp)) || (k == 'U' && read_hex(8, cp))) {
          append_utf8(body, cp);
          continue;
        }
        return error(start, line, col, IssueCategory::BadIri, "invalid escape in IRI");
      }
      if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`') {
        // Swallow the rest of the reference on this line so the bad IRI is one issue.
        while (!at_end() && peek() != '\n' && peek() != '>') get();
        if (!at_end() && peek() == '>') get();
        return error(start, line, col, IssueCategory::BadIri,
                     "illegal character in IRI reference");
      }
      body += static_cast<char>(get());
    }
    return error(start, line, col, IssueCategory::BadIri, "unterminated IRI reference");
  }

  Token string_literal(std::size_t start, int line, int col) {
    unsigned char quote = get();
    bool long_form = peek() == quote && peek(1) == quote;
    if (long_form) {
      get();
      get();
    }
    std::string body;
    while (!at_end()) {
      unsigned char c = peek();
      if (c == quote) {
        if (!long_form) {
          get();
          Token t = make(Tok::String, start, line, col);
          t.text = std::move(body);
          return t;
        }
        if (peek(1) == quote && peek(2) == quote) {
          // A long string may end with up to two extra quote characters.
          while (peek(3) == quote) body += static_cast<char>(get());
          get();
          get();
          get();
          Token t = make(Tok::String, start, line, col);
          t.text = std::move(body);
          return t;
        }
        body += static_cast<char>(get());
        continue;
      }
      if (!long_form && (c == '\n' || c == '\r')) {
        return error(start, line, col, IssueCategory::BadLiteral, "unterminated string literal");
      }
      if (c == '\\') {
        get();
        unsigned char k = at_end() ? 0 : get();
        unsigned long cp = 0;
        switch (k) {
          case 't': body += '\t'; break;
          case 'b': body += '\b'; break;
          case 'n': body += '\n'; break;
          case 'r': body += '\r'; break;
          case 'f': body += '\f'; break;
          case '"': body += '"'; break;
          case '\'': body += '\''; break;
          case '\\': body += '\\'; break;
          case 'u':
            if (!read_hex(4, cp)) return bad_escape(start, line, col, long_form);
            append_utf8(body, cp);
            break;
          case 'U':
            if (!read_hex(8, cp)) return bad_escape(start, line, col, long_form);
            append_utf8(body, cp);
            break;
          default: return bad_escape(start, line, col, long_form);
        }
        continue;
      }
      body += static_cast<char>(get());
    }
    return error(start, line, col, IssueCategory::BadLiteral, "unterminated string literal");
  }

  Token bad_escape(std::size_t start, int line, int col, bool long_form) {
    // Skip to the end of the literal (or line) so lexing can continue.
    while (!at_end()) {
      unsigned char c = peek();
      if (!long_form && (c == '\n' || c == '"' || c == '\'')) {
        if (c != '\n') get();
        break;
      }
      if (long_form && (c == '"' || c == '\'') && peek(1) == c && peek(2) == c) {
        get();
        get();
        get();
        break;
      }
      get();
    }
    return error(start, line, col, IssueCategory::BadLiteral, "invalid escape sequence in string");
  }

  Token at_word(std::size_t start, int line, int col) {
    get();  // '@'
    std::string word;
    while (!at_end() && (std::isalnum(peek()) || peek() == '-')) word += static_cast<char>(get());
    if (word == "prefix") return make(Tok::AtPrefix, start, line, col);
    if (word == "base") return make(Tok::AtBase, start, line, col);
    if (word.empty() || !std::isalpha(static_cast<unsigned char>(word[0]))) {
      return error(start, line, col, IssueCategory::MalformedStatement, "malformed language tag");
    }
    Token t = make(Tok::LangTag, start, line, col);
    t.text = std::move(word);
    return t;
  }

  Token number(std::size_t start, int line, int col) {
    std::string lex;
    if (peek() == '+' || peek() == '-') lex += static_cast<char>(get());
    bool int_digits = false;
    while (std::isdigit(peek())) {
      lex += static_cast<char>(get());
      int_digits = true;
    }
    bool frac = false;
    if (peek() == '.' && (std::isdigit(peek(1)) ||
                          (int_digits && (peek(1) == 'e' || peek(1) == 'E')))) {
      lex += static_cast<char>(get());
      while (std::isdigit(peek())) lex += static_cast<char>(get());
      frac = true;
    }
    if (!int_digits && !frac) {
      return error(start, line, col, IssueCategory::MalformedStatement,
                   "unexpected character '" + lex + "'");
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      int save_line = line_, save_col = col_;
      std::string exp;
      exp += static_cast<char>(get());
      if (peek() == '+' || peek() == '-') exp += static_cast<char>(get());
      if (std::isdigit(peek())) {
        while (std::isdigit(peek())) exp += static_cast<char>(get());
        Token t = make(Tok::Double, start, line, col);
        t.text = lex + exp;
        return t;
      }
      pos_ = save;
      line_ = save_line;
      col_ = save_col;
    }
    Token t = make(frac ? Tok::Decimal : Tok::Integer, start, line, col);
    t.text = lex;
    return t;
  }

  Token blank_label(std::size_t start, int line, int col) {
    get();
    get();
    std::string label;
    while (!at_end() && is_name_char(peek())) label += static_cast<char>(get());
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      --pos_;
      --col_;
    }
    if (label.empty()) {
      return error(start, line, col, IssueCategory::MalformedStatement, "empty blank node label");
    }
    Token t = make(Tok::BlankLabel, start, line, col);
    t.text = std::move(label);
    return t;
  }

  Token name(std::size_t start, int line, int col) {
    std::string prefix;
    while (!at_end() && is_name_char(peek())) prefix += static_cast<char>(get());
    if (peek() != ':') {
      // Bare word: keyword or garbage. Trailing dots belong to the statement.
      while (!prefix.empty() && prefix.back() == '.') {
        prefix.pop_back();
        --pos_;
        --col_;
      }
      if (prefix == "a") return make(Tok::A, start, line, col);
      if (prefix == "true") return make(Tok::True, start, line, col);
      if (prefix == "false") return make(Tok::False, start, line, col);
      std::string upper;
      for (char ch : prefix) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (upper == "PREFIX") return make(Tok::SparqlPrefix, start, line, col);
      if (upper == "BASE") return make(Tok::SparqlBase, start, line, col);
      return error(start, line, col, IssueCategory::MalformedStatement,
                   "unexpected token '" + prefix + "'");
    }
    get();  // ':'
    std::string local;
    while (!at_end()) {
      unsigned char c = peek();
      if (c == '\\' && pos_ + 1 < src_.size()) {
        get();
        local += static_cast<char>(get());
        continue;
      }
      if (c == '%' && std::isxdigit(peek(1)) && std::isxdigit(peek(2))) {
        local += static_cast<char>(get());
        local += static_cast<char>(get());
        local += static_cast<char>(get());
        continue;
      }
      if (!is_local_char(c) || c == '%') break;
      local += static_cast<char>(get());
    }
    while (!local.empty() && local.back() == '.') {
      local.pop_back();
      --pos_;
      --col_;
    }
    Token t = make(Tok::PName, start, line, col);
    t.prefix = std::move(prefix);
    t.local = std::move(local);
    return t;
  }
};

struct Abort {};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::optional<std::string> base)
      : tokens_(std::move(tokens)), base_(std::move(base)) {}

  ParseResult run() {
    while (cur().kind != Tok::Eof) {
      statement_triples_.clear();
      tainted_ = false;
      statement_start_ = pos_;
      try {
        statement();
        if (!tainted_) {
          for (auto& t : statement_triples_) result_.partial.insert(std::move(t));
        }
      } catch (const Abort&) {
        resync();
      }
    }
    result_.partial.prefixes() = prefixes_;
    result_.partial.set_base(base_);
    if (result_.issues.empty()) result_.graph = result_.partial;
    return std::move(result_);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::optional<std::string> base_;
  std::map<std::string, std::string> prefixes_;
  std::map<std::string, std::string> labels_;
  std::set<std::string> reported_missing_;
  std::vector<Triple> statement_triples_;
  bool tainted_ = false;
  std::size_t statement_start_ = 0;
  std::size_t failed_at_ = 0;
  int blank_counter_ = 0;
  ParseResult result_;

  const Token& cur() const { return tokens_[pos_]; }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (t.kind != Tok::Eof) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, IssueCategory cat, std::string message) {
    bool inside = &at >= tokens_.data() && &at < tokens_.data() + tokens_.size();
    failed_at_ = inside ? static_cast<std::size_t>(&at - tokens_.data()) : pos_;
    if (at.kind == Tok::Error) {
      cat = at.error_category;
      message = at.error_message;
    }
    result_.issues.push_back(SyntaxIssue{cat, at.line, at.column, std::move(message), at.raw});
    throw Abort{};
  }

  [[noreturn]] void unexpected(const Token& at, std::string_view expected) {
    std::string got = at.kind == Tok::Eof ? "end of input" : "'" + at.raw + "'";
    fail(at, IssueCategory::MalformedStatement, "expected " + std::string(expected) + ", found " + got);
  }

  void resync() {
    // Skip to the next '.', or stop before a directive or lexer error that
    // begins the next statement. Always move past the statement start.
    auto boundary = [&] {
      Tok k = cur().kind;
      return k == Tok::AtPrefix || k == Tok::AtBase || k == Tok::SparqlPrefix || k == Tok::SparqlBase ||
             k == Tok::Error;
    };
    if (pos_ == statement_start_ || (pos_ == failed_at_ && cur().kind == Tok::Error) || !boundary()) {
      if (cur().kind == Tok::Dot) {
        advance();
        return;
      }
      if (cur().kind != Tok::Eof) advance();
    }
    while (cur().kind != Tok::Eof) {
      if (cur().kind == Tok::Dot) {
        advance();
        return;
      }
      if (boundary()) return;
      advance();
    }
  }

  void expect(Tok kind, std::string_view what) {
    if (cur().kind != kind) unexpected(cur(), what);
    advance();
  }

  Term fresh_blank() { return Term::blank("b" + std::to_string(blank_counter_++)); }

  void emit(const Term& s, const Term& p, const Term& o) { statement_triples_.push_back(Triple{s, p, o}); }

  std::string resolve(const Token& at, const std::string& ref) {
    if (is_absolute_iri(ref)) return ref;
    if (!base_) fail(at, IssueCategory::BadIri, "relative IRI <" + ref + "> without a base");
    return resolve_iri(*base_, ref);
  }

  void statement() {
    switch (cur().kind) {
      case Tok::AtPrefix: {
        advance();
        prefix_body();
        expect(Tok::Dot, "'.' after @prefix declaration");
        return;
      }
      case Tok::SparqlPrefix:
        advance();
        prefix_body();
        return;
      case Tok::AtBase: {
        advance();
        base_body();
        expect(Tok::Dot, "'.' after @base declaration");
        return;
      }
      case Tok::SparqlBase:
        advance();
        base_body();
        return;
      default: break;
    }
    triples();
    expect(Tok::Dot, "'.' at end of statement");
  }

  void prefix_body() {
    const Token& name = cur();
    if (name.kind != Tok::PName || !name.local.empty()) unexpected(name, "prefix label ending in ':'");
    advance();
    const Token& iri = cur();
    if (iri.kind != Tok::IriRef) unexpected(iri, "namespace IRI");
    advance();
    // Redeclaration is permitted; the last declaration wins.
    prefixes_[name.prefix] = resolve(iri, iri.text);
  }

  void base_body() {
    const Token& iri = cur();
    if (iri.kind != Tok::IriRef) unexpected(iri, "base IRI");
    advance();
    base_ = resolve(iri, iri.text);
  }

  void triples() {
    if (cur().kind == Tok::LBracket) {
      Term subject = blank_node_property_list();
      if (cur().kind != Tok::Dot) predicate_object_list(subject);
      return;
    }
    Term subject = subject_term();
    predicate_object_list(subject);
  }

  Term subject_term() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName: return iri_term();
      case Tok::BlankLabel: advance(); return labelled_blank(t.text);
      case Tok::LParen: return collection();
      default: unexpected(t, "subject");
    }
  }

  Term labelled_blank(const std::string& label) {
    auto it = labels_.find(label);
    if (it != labels_.end()) return Term::blank(it->second);
    Term b = fresh_blank();
    labels_.emplace(label, b.value);
    return b;
  }

  Term iri_term() {
    const Token& t = advance();
    if (t.kind == Tok::IriRef) return Term::iri(resolve(t, t.text));
    if (t.kind == Tok::PName) {
      auto it = prefixes_.find(t.prefix);
      if (it == prefixes_.end()) {
        if (reported_missing_.insert(t.prefix).second) {
          result_.issues.push_back(SyntaxIssue{IssueCategory::MissingPrefix, t.line, t.column,
                                               "undeclared prefix '" + t.prefix + ":'", t.prefix});
        }
        tainted_ = true;
        return Term::iri("urn:capgen:undeclared:" + t.prefix + ":" + t.local);
      }
      return Term::iri(it->second + unescape_local(t.local));
    }
    unexpected(t, "IRI");
  }

  static std::string unescape_local(const std::string& local) {
    // Reserved-character escapes were already stripped by the lexer; percent
    // escapes stay encoded as the grammar requires.
    return local;
  }

  Term verb() {
    if (cur().kind == Tok::A) {
      advance();
      return Term::iri(vocab::kType);
    }
    if (cur().kind == Tok::IriRef || cur().kind == Tok::PName) return iri_term();
    unexpected(cur(), "predicate");
  }

  void predicate_object_list(const Term& subject) {
    Term predicate = verb();
    object_list(subject, predicate);
    while (cur().kind == Tok::Semicolon) {
      while (cur().kind == Tok::Semicolon) advance();
      Tok k = cur().kind;
      if (k == Tok::Dot || k == Tok::RBracket || k == Tok::Eof) return;
      predicate = verb();
      object_list(subject, predicate);
    }
  }

  void object_list(const Term& subject, const Term& predicate) {
    emit(subject, predicate, object());
    while (cur().kind == Tok::Comma) {
      advance();
      emit(subject, predicate, object());
    }
  }

  Term blank_node_property_list() {
    expect(Tok::LBracket, "'['");
    Term node = fresh_blank();
    if (cur().kind != Tok::RBracket) predicate_object_list(node);
    expect(Tok::RBracket, "']'");
    return node;
  }

  Term collection() {
    expect(Tok::LParen, "'('");
    std::vector<Term> items;
    while (cur().kind != Tok::RParen) {
      if (cur().kind == Tok::Eof || cur().kind == Tok::Dot) unexpected(cur(), "')'");
      items.push_back(object());
    }
    advance();
    if (items.empty()) return Term::iri(vocab::kNil);
    Term head = fresh_blank();
    Term node = head;
    for (std::size_t i = 0; i < items.size(); ++i) {
      emit(node, Term::iri(vocab::kFirst), items[i]);
      Term next = i + 1 < items.size() ? fresh_blank() : Term::iri(vocab::kNil);
      emit(node, Term::iri(vocab::kRest), next);
      node = next;
    }
    return head;
  }

  Term object() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName: return iri_term();
      case Tok::BlankLabel: advance(); return labelled_blank(t.text);
      case Tok::LBracket: return blank_node_property_list();
      case Tok::LParen: return collection();
      case Tok::String: return string_literal();
      case Tok::Integer: advance(); return Term::literal(t.text, vocab::xsd("integer"));
      case Tok::Decimal: advance(); return Term::literal(t.text, vocab::xsd("decimal"));
      case Tok::Double: advance(); return Term::literal(t.text, vocab::xsd("double"));
      case Tok::True: advance(); return Term::literal("true", vocab::xsd("boolean"));
      case Tok::False: advance(); return Term::literal("false", vocab::xsd("boolean"));
      default: unexpected(t, "object");
    }
  }

  Term string_literal() {
    const Token& s = advance();
    if (cur().kind == Tok::LangTag) {
      const Token& lang = advance();
      return Term::literal(s.text, {}, lang.text);
    }
    if (cur().kind == Tok::Carets) {
      advance();
      if (cur().kind != Tok::IriRef && cur().kind != Tok::PName) unexpected(cur(), "datatype IRI");
      Term dt = iri_term();
      return Term::literal(s.text, dt.value);
    }
    return Term::literal(s.text);
  }
};

}  // namespace

ParseResult parse_turtle(std::string_view document, std::optional<std::string> base) {
  Lexer lexer(document);
  Parser parser(lexer.run(), std::move(base));
  return parser.run();
}

}  // namespace capgen::rdf

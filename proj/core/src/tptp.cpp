#include "polyenc/tptp.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "polyenc/normalize.hpp"

namespace polyenc {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  lparen, rparen, lbracket, rbracket, comma, colon, dot, star, arrow,
  bang, question, bang_arrow, tilde, amp, vline,
  implies, implied, iff, niff,
  eq, neq,
  lower_word, upper_word, dollar_word, dollar_dollar_word, quoted, integer,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

class Lexer {
public:
  explicit Lexer(std::string text)
      : text_(std::make_shared<const std::string>(std::move(text))) {
    advance();
  }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  int cur() const {
    return pos_ < text_->size() ? static_cast<unsigned char>((*text_)[pos_]) : -1;
  }

  void bump() {
    if (pos_ < text_->size()) {
      if ((*text_)[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    for (;;) {
      while (cur() != -1 && std::isspace(cur())) bump();
      if (cur() == '%') {
        while (cur() != -1 && cur() != '\n') bump();
        continue;
      }
      if (cur() == '/' && peek_char() == '*') {
        bump();
        bump();
        while (cur() != -1 && !(cur() == '*' && peek_char() == '/')) bump();
        if (cur() == -1) fail("unterminated block comment");
        bump();
        bump();
        continue;
      }
      return;
    }
  }

  void advance() {
    skip_space();
    tok_.line = line_;
    tok_.col = col_;
    tok_.text.clear();
    int c = cur();
    if (c == -1) {
      tok_.kind = Tok::end;
      return;
    }
    auto simple = [&](Tok k, const char* s) {
      tok_.kind = k;
      tok_.text = s;
      bump();
    };
    switch (c) {
      case '(': simple(Tok::lparen, "("); return;
      case ')': simple(Tok::rparen, ")"); return;
      case '[': simple(Tok::lbracket, "["); return;
      case ']': simple(Tok::rbracket, "]"); return;
      case ',': simple(Tok::comma, ","); return;
      case '.': simple(Tok::dot, "."); return;
      case '*': simple(Tok::star, "*"); return;
      case '&': simple(Tok::amp, "&"); return;
      case '|': simple(Tok::vline, "|"); return;
      case '~': simple(Tok::tilde, "~"); return;
      case ':': simple(Tok::colon, ":"); return;
      case '>': simple(Tok::arrow, ">"); return;
      case '?': simple(Tok::question, "?"); return;
      case '!':
        bump();
        if (cur() == '=') {
          bump();
          tok_.kind = Tok::neq;
          tok_.text = "!=";
        } else if (cur() == '>') {
          bump();
          tok_.kind = Tok::bang_arrow;
          tok_.text = "!>";
        } else {
          tok_.kind = Tok::bang;
          tok_.text = "!";
        }
        return;
      case '=':
        bump();
        if (cur() == '>') {
          bump();
          tok_.kind = Tok::implies;
          tok_.text = "=>";
        } else {
          tok_.kind = Tok::eq;
          tok_.text = "=";
        }
        return;
      case '<':
        bump();
        if (cur() == '=') {
          bump();
          if (cur() == '>') {
            bump();
            tok_.kind = Tok::iff;
            tok_.text = "<=>";
          } else {
            tok_.kind = Tok::implied;
            tok_.text = "<=";
          }
        } else if (cur() == '~') {
          bump();
          if (cur() != '>') fail("expected '>' after '<~'");
          bump();
          tok_.kind = Tok::niff;
          tok_.text = "<~>";
        } else {
          fail("unexpected '<'");
        }
        return;
      case '\'': {
        bump();
        std::string out;
        while (cur() != -1 && cur() != '\'') {
          if (cur() == '\\') {
            bump();
            if (cur() != '\\' && cur() != '\'') fail("bad escape in quoted atom");
          }
          out.push_back(static_cast<char>(cur()));
          bump();
        }
        if (cur() == -1) fail("unterminated quoted atom");
        bump();
        tok_.kind = Tok::quoted;
        tok_.text = out;
        return;
      }
      case '$': {
        bump();
        bool dollar2 = cur() == '$';
        if (dollar2) bump();
        std::string out;
        while (cur() != -1 && (std::isalnum(cur()) || cur() == '_')) {
          out.push_back(static_cast<char>(cur()));
          bump();
        }
        if (out.empty()) fail("bare '$'");
        tok_.kind = dollar2 ? Tok::dollar_dollar_word : Tok::dollar_word;
        tok_.text = (dollar2 ? "$$" : "$") + out;
        return;
      }
      default:
        break;
    }
    if (std::isdigit(c)) {
      std::string out;
      while (cur() != -1 && std::isdigit(cur())) {
        out.push_back(static_cast<char>(cur()));
        bump();
      }
      tok_.kind = Tok::integer;
      tok_.text = out;
      return;
    }
    if (std::isalpha(c) || c == '_') {
      std::string out;
      while (cur() != -1 && (std::isalnum(cur()) || cur() == '_')) {
        out.push_back(static_cast<char>(cur()));
        bump();
      }
      tok_.kind = std::isupper(static_cast<unsigned char>(out[0])) ? Tok::upper_word
                                                                   : Tok::lower_word;
      tok_.text = out;
      return;
    }
    fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
  }

  int peek_char() const {
    return pos_ + 1 < text_->size() ? static_cast<unsigned char>((*text_)[pos_ + 1]) : -1;
  }

  std::shared_ptr<const std::string> text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Parser

// Untyped expression tree; arguments are resolved into types or terms once
// the head symbol's declaration is known.
struct RawExpr {
  std::string head;
  bool is_upper = false;
  bool quoted = false;
  std::vector<RawExpr> args;
  std::size_t line = 1;
  std::size_t col = 1;
};

struct Binder {
  bool is_type_var = false;
  TypePtr ty; // term binders only
};

class Parser {
public:
  Parser(const std::string& text, const ParseOptions& opts) : lex_(text), opts_(opts) {
    result_.problem.sig.level = opts.level;
    if (opts.level == Level::untyped)
      result_.problem.sig.type_ctors.emplace(kUntypedSort, 0);
  }

  ParseResult run() {
    while (lex_.peek().kind != Tok::end) statement();
    finish_conjectures();
    result_.problem.sig.ensure_nullary_ctor();
    return std::move(result_);
  }

private:
  [[noreturn]] void fail(const Token& at, const std::string& msg) {
    throw ParseError(at.line, at.col, msg);
  }

  Token expect(Tok kind, const char* what) {
    Token t = lex_.next();
    if (t.kind != kind) fail(t, std::string("expected ") + what + ", got '" + t.text + "'");
    return t;
  }

  void check_symbol_name(const Token& at, const std::string& name) {
    if (!opts_.allow_reserved && name.rfind(kReservedSymbolPrefix, 0) == 0)
      fail(at, "symbol '" + name + "' uses the reserved '$$' namespace");
  }

  void check_var_name(const Token& at, const std::string& name) {
    if (!opts_.allow_reserved && name.rfind(kReservedVarPrefix, 0) == 0)
      fail(at, "variable '" + name + "' uses the reserved 'A__' namespace");
  }

  void statement() {
    Token kw = lex_.next();
    if (kw.kind == Tok::lower_word && kw.text == "include") {
      parse_include(kw);
      return;
    }
    bool is_tff = kw.kind == Tok::lower_word && kw.text == "tff";
    bool is_fof = kw.kind == Tok::lower_word && kw.text == "fof";
    if (!is_tff && !is_fof) fail(kw, "expected 'tff', 'fof', or 'include'");
    if (opts_.level == Level::untyped && !is_fof)
      fail(kw, "expected 'fof' statements for untyped input");
    if (opts_.level != Level::untyped && !is_tff)
      fail(kw, "expected 'tff' statements for typed input");
    expect(Tok::lparen, "'('");
    Token name_tok = lex_.next();
    if (name_tok.kind != Tok::lower_word && name_tok.kind != Tok::quoted &&
        name_tok.kind != Tok::integer && name_tok.kind != Tok::upper_word)
      fail(name_tok, "expected a statement name");
    std::string name = name_tok.text;
    expect(Tok::comma, "','");
    Token role_tok = expect(Tok::lower_word, "a role");
    expect(Tok::comma, "','");
    if (role_tok.text == "type") {
      parse_type_decl();
      result_.statements.push_back({name, Role::axiom, StatementKind::type_decl});
    } else {
      Role role;
      if (role_tok.text == "axiom" || role_tok.text == "lemma" || role_tok.text == "theorem" ||
          role_tok.text == "definition")
        role = Role::axiom;
      else if (role_tok.text == "hypothesis")
        role = Role::hypothesis;
      else if (role_tok.text == "conjecture")
        role = Role::conjecture;
      else if (role_tok.text == "negated_conjecture")
        role = Role::negated_conjecture;
      else
        fail(role_tok, "unsupported role '" + role_tok.text + "'");
      SugarPtr f = parse_formula();
      result_.statements.push_back({name, role, StatementKind::formula});
      if (role == Role::conjecture) {
        conjectures_.push_back({name, f});
        conjecture_slot_ = conjecture_slot_ < 0
                               ? static_cast<long>(result_.problem.sentences.size())
                               : conjecture_slot_;
      } else {
        FormulaPtr g;
        try {
          g = normalize(f);
        } catch (const UnsupportedInput& e) {
          fail(name_tok, e.what());
        }
        result_.problem.sentences.push_back({name, role, g});
      }
    }
    expect(Tok::rparen, "')'");
    expect(Tok::dot, "'.'");
  }

  void parse_include(const Token& kw) {
    if (opts_.include_dir.empty()) fail(kw, "include() is not enabled for this input");
    expect(Tok::lparen, "'('");
    Token path = lex_.next();
    if (path.kind != Tok::quoted && path.kind != Tok::lower_word)
      fail(path, "expected a file name in include()");
    if (lex_.peek().kind == Tok::comma)
      fail(lex_.peek(), "include() with a selection list is not supported");
    expect(Tok::rparen, "')'");
    expect(Tok::dot, "'.'");
    if (++include_depth_ > 16) fail(kw, "include() nesting too deep");
    std::ifstream in(opts_.include_dir + "/" + path.text);
    if (!in) fail(path, "cannot open include file '" + path.text + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    Lexer saved = std::move(lex_);
    lex_ = Lexer(text);
    while (lex_.peek().kind != Tok::end) statement();
    lex_ = std::move(saved);
    --include_depth_;
  }

  // --- type declarations -----------------------------------------------

  void parse_type_decl() {
    Token sym_tok = lex_.next();
    if (sym_tok.kind != Tok::lower_word && sym_tok.kind != Tok::quoted)
      fail(sym_tok, "expected a symbol in a type declaration");
    std::string sym = sym_tok.text;
    check_symbol_name(sym_tok, sym);
    expect(Tok::colon, "':'");

    Signature& sig = result_.problem.sig;
    if (sig.type_ctors.count(sym) || sig.has_symbol(sym))
      fail(sym_tok, "symbol '" + sym + "' declared twice");

    // Type constructor declarations: $tType, $tType > $tType, or
    // ($tType * ... * $tType) > $tType.
    if (lex_.peek().kind == Tok::dollar_word && lex_.peek().text == "$tType") {
      lex_.next();
      if (lex_.peek().kind == Tok::arrow) {
        lex_.next();
        Token res = expect(Tok::dollar_word, "$tType");
        if (res.text != "$tType") fail(res, "expected $tType result in constructor kind");
        if (lex_.peek().kind == Tok::arrow)
          fail(lex_.peek(), "curried type constructor kinds are not supported");
        if (opts_.level != Level::polymorphic)
          fail(sym_tok, "non-nullary type constructor outside TFF1");
        sig.type_ctors.emplace(sym, 1);
        return;
      }
      sig.type_ctors.emplace(sym, 0);
      return;
    }
    if (lex_.peek().kind == Tok::lparen) {
      // Possibly ($tType * ... * $tType) > $tType.
      // Look ahead: a '(' followed by $tType means a ctor kind.
      // Otherwise it is a symbol arity like (w * w) > w.
    }
    std::size_t ctor_arity = 0;
    if (try_parse_ctor_kind(ctor_arity)) {
      if (opts_.level != Level::polymorphic && ctor_arity != 0)
        fail(sym_tok, "non-nullary type constructor outside TFF1");
      sig.type_ctors.emplace(sym, ctor_arity);
      return;
    }

    std::vector<std::string> ty_vars;
    if (lex_.peek().kind == Tok::bang_arrow) {
      if (opts_.level != Level::polymorphic)
        fail(lex_.peek(), "polymorphic declaration outside TFF1");
      lex_.next();
      expect(Tok::lbracket, "'['");
      for (;;) {
        Token v = expect(Tok::upper_word, "a type variable");
        check_var_name(v, v.text);
        expect(Tok::colon, "':'");
        Token tt = expect(Tok::dollar_word, "$tType");
        if (tt.text != "$tType") fail(tt, "expected $tType in !> binder");
        ty_vars.push_back(v.text);
        if (lex_.peek().kind == Tok::comma) {
          lex_.next();
          continue;
        }
        break;
      }
      expect(Tok::rbracket, "']'");
      expect(Tok::colon, "':'");
    }

    std::map<std::string, Binder> env;
    for (const auto& v : ty_vars) env[v] = {true, nullptr};

    auto [arg_types, result] = parse_decl_body(env);
    for (const auto& ty : arg_types)
      if (ty == nullptr) fail(sym_tok, "$o is not allowed as an argument type");
    record_symbol(sym, ty_vars, std::move(arg_types), result);
  }

  // The part after the optional !> prefix: a plain type (a constant or a
  // nullary predicate), t > r, (t1 * ... * tn) > r, or any of those wrapped
  // in one pair of parentheses. $o results mark predicates (returned null).
  std::pair<std::vector<TypePtr>, TypePtr> parse_decl_body(
      const std::map<std::string, Binder>& env) {
    if (lex_.peek().kind == Tok::lparen) {
      lex_.next();
      std::vector<TypePtr> args;
      if (lex_.peek().kind == Tok::lparen) {
        // ((t1 * ... * tn) > r)
        lex_.next();
        args.push_back(parse_nonbool_type(env));
        while (lex_.peek().kind == Tok::star) {
          lex_.next();
          args.push_back(parse_nonbool_type(env));
        }
        expect(Tok::rparen, "')'");
        expect(Tok::arrow, "'>'");
        TypePtr result = parse_type(env);
        expect(Tok::rparen, "')'");
        return {std::move(args), result};
      }
      TypePtr first = parse_type(env);
      if (lex_.peek().kind == Tok::star) {
        // (t1 * ... * tn) > r
        args.push_back(first);
        while (lex_.peek().kind == Tok::star) {
          lex_.next();
          args.push_back(parse_nonbool_type(env));
        }
        expect(Tok::rparen, "')'");
        expect(Tok::arrow, "'>'");
        return {std::move(args), parse_type(env)};
      }
      if (lex_.peek().kind == Tok::arrow) {
        // (t > r)
        lex_.next();
        TypePtr result = parse_type(env);
        expect(Tok::rparen, "')'");
        return {{first}, result};
      }
      expect(Tok::rparen, "')'");
      if (lex_.peek().kind == Tok::arrow) {
        // (t) > r
        lex_.next();
        return {{first}, parse_type(env)};
      }
      return {{}, first};
    }
    TypePtr first = parse_type(env);
    if (lex_.peek().kind == Tok::arrow) {
      lex_.next();
      return {{first}, parse_type(env)};
    }
    return {{}, first};
  }

  bool try_parse_ctor_kind(std::size_t& arity) {
    // Handles ($tType * $tType) > $tType and $tType > $tType forms; assumes
    // the leading $tType case was already consumed by the caller when the
    // kind is nullary.
    if (lex_.peek().kind != Tok::lparen) return false;
    // Peek past '(' without consuming: the lexer has no pushback, so check
    // the first token after '(' by cloning is unavailable; instead parse
    // speculatively when the next token is $tType.
    // A '(' here is a kind iff it opens a $tType list.
    Lexer backup = lex_;
    lex_.next(); // '('
    if (lex_.peek().kind != Tok::dollar_word || lex_.peek().text != "$tType") {
      lex_ = std::move(backup);
      return false;
    }
    arity = 0;
    for (;;) {
      Token tt = expect(Tok::dollar_word, "$tType");
      if (tt.text != "$tType") fail(tt, "expected $tType in constructor kind");
      ++arity;
      if (lex_.peek().kind == Tok::star) {
        lex_.next();
        continue;
      }
      break;
    }
    expect(Tok::rparen, "')'");
    expect(Tok::arrow, "'>'");
    Token res = expect(Tok::dollar_word, "$tType");
    if (res.text != "$tType") fail(res, "expected $tType result in constructor kind");
    return true;
  }

  // `result` of $o marks a predicate and is passed as nullptr through here.
  void record_symbol(const std::string& sym, std::vector<std::string> ty_vars,
                     std::vector<TypePtr> arg_types, const TypePtr& result) {
    Signature& sig = result_.problem.sig;
    if (result == nullptr)
      sig.preds.emplace(sym, PredSig{std::move(ty_vars), std::move(arg_types)});
    else
      sig.funs.emplace(sym, FunSig{std::move(ty_vars), std::move(arg_types), result});
  }

  // Returns nullptr for $o.
  TypePtr parse_type(const std::map<std::string, Binder>& env) {
    Token t = lex_.next();
    if (t.kind == Tok::dollar_word) {
      if (t.text == "$o") return nullptr;
      if (t.text == "$i") {
        result_.problem.sig.type_ctors.emplace(kUntypedSort, 0);
        return Type::app(kUntypedSort, {});
      }
      fail(t, "unsupported defined type '" + t.text + "'");
    }
    if (t.kind == Tok::upper_word) {
      auto it = env.find(t.text);
      if (it == env.end() || !it->second.is_type_var)
        fail(t, "unbound type variable '" + t.text + "'");
      return Type::var(t.text);
    }
    if (t.kind != Tok::lower_word && t.kind != Tok::quoted)
      fail(t, "expected a type");
    std::vector<TypePtr> args;
    if (lex_.peek().kind == Tok::lparen) {
      lex_.next();
      for (;;) {
        args.push_back(parse_nonbool_type(env));
        if (lex_.peek().kind == Tok::comma) {
          lex_.next();
          continue;
        }
        break;
      }
      expect(Tok::rparen, "')'");
    }
    auto it = result_.problem.sig.type_ctors.find(t.text);
    if (it == result_.problem.sig.type_ctors.end())
      fail(t, "unknown type constructor '" + t.text + "'");
    if (it->second != args.size())
      fail(t, "type constructor '" + t.text + "' expects " + std::to_string(it->second) +
                  " arguments");
    return Type::app(t.text, std::move(args));
  }

  TypePtr parse_nonbool_type(const std::map<std::string, Binder>& env) {
    Token at = lex_.peek();
    TypePtr ty = parse_type(env);
    if (ty == nullptr) fail(at, "$o is not allowed here");
    return ty;
  }

  // --- formulas ----------------------------------------------------------

  SugarPtr parse_formula() {
    std::map<std::string, Binder> env;
    return parse_binary(env);
  }

  SugarPtr parse_binary(std::map<std::string, Binder>& env) {
    SugarPtr lhs = parse_unitary(env);
    Tok k = lex_.peek().kind;
    if (k == Tok::amp || k == Tok::vline) {
      Tok chain = k;
      SugarKind op = chain == Tok::amp ? SugarKind::and_op : SugarKind::or_op;
      while (lex_.peek().kind == chain) {
        lex_.next();
        lhs = Sugar::binary(op, lhs, parse_unitary(env));
      }
      if (lex_.peek().kind == Tok::amp || lex_.peek().kind == Tok::vline)
        fail(lex_.peek(), "mixing '&' and '|' requires parentheses");
      return lhs;
    }
    if (k == Tok::implies || k == Tok::implied || k == Tok::iff || k == Tok::niff) {
      Token op = lex_.next();
      SugarPtr rhs = parse_unitary(env);
      switch (op.kind) {
        case Tok::implies: return Sugar::binary(SugarKind::implies, lhs, rhs);
        case Tok::implied: return Sugar::binary(SugarKind::implies, rhs, lhs);
        case Tok::iff: return Sugar::binary(SugarKind::iff, lhs, rhs);
        default: return Sugar::binary(SugarKind::xor_op, lhs, rhs);
      }
    }
    return lhs;
  }

  SugarPtr parse_unitary(std::map<std::string, Binder>& env) {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::bang:
      case Tok::question: {
        lex_.next();
        bool universal = t.kind == Tok::bang;
        expect(Tok::lbracket, "'['");
        std::vector<std::pair<std::string, Binder>> binders;
        std::vector<std::pair<std::string, std::optional<Binder>>> shadowed;
        for (;;) {
          Token v = expect(Tok::upper_word, "a variable");
          check_var_name(v, v.text);
          Binder b;
          if (opts_.level == Level::untyped) {
            b = {false, untyped_sort()};
          } else {
            expect(Tok::colon, "':'");
            if (lex_.peek().kind == Tok::dollar_word && lex_.peek().text == "$tType") {
              lex_.next();
              if (opts_.level != Level::polymorphic)
                fail(v, "type quantification outside TFF1");
              if (!universal)
                fail(v, "existential type quantification is not supported");
              b = {true, nullptr};
            } else {
              b = {false, parse_nonbool_type(env)};
            }
          }
          binders.emplace_back(v.text, b);
          auto prev = env.find(v.text);
          shadowed.emplace_back(v.text, prev == env.end()
                                            ? std::nullopt
                                            : std::optional(prev->second));
          env[v.text] = b; // binder types may mention earlier type variables
          if (lex_.peek().kind == Tok::comma) {
            lex_.next();
            continue;
          }
          break;
        }
        expect(Tok::rbracket, "']'");
        expect(Tok::colon, "':'");
        SugarPtr body = parse_unitary(env);
        for (auto it = shadowed.rbegin(); it != shadowed.rend(); ++it) {
          if (it->second)
            env[it->first] = *it->second;
          else
            env.erase(it->first);
        }
        for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
          if (it->second.is_type_var)
            body = Sugar::ty_quant(universal ? SugarKind::forall_ty : SugarKind::exists_ty,
                                   it->first, body);
          else
            body = Sugar::quant(universal ? SugarKind::forall : SugarKind::exists, it->first,
                                it->second.ty, body);
        }
        return body;
      }
      case Tok::tilde:
        lex_.next();
        return Sugar::negate(parse_unitary(env));
      case Tok::lparen: {
        lex_.next();
        SugarPtr f = parse_binary(env);
        expect(Tok::rparen, "')'");
        return maybe_equality_tail(f, env);
      }
      default:
        return parse_atom(env);
    }
  }

  // A parenthesized term can be the left side of an equality; formulas
  // cannot, so reject '=' after a genuine formula.
  SugarPtr maybe_equality_tail(const SugarPtr& f, std::map<std::string, Binder>& env) {
    if (lex_.peek().kind == Tok::eq || lex_.peek().kind == Tok::neq)
      fail(lex_.peek(), "equality applied to a formula");
    (void)env;
    return f;
  }

  SugarPtr parse_atom(std::map<std::string, Binder>& env) {
    Token at = lex_.peek();
    RawExpr e = parse_raw_expr();
    if (lex_.peek().kind == Tok::eq || lex_.peek().kind == Tok::neq) {
      bool positive = lex_.next().kind == Tok::eq;
      RawExpr rhs = parse_raw_expr();
      return Sugar::eq(positive, raw_to_term(e, env), raw_to_term(rhs, env));
    }
    // Predicate atom.
    if (e.is_upper) fail(at, "a variable is not a formula");
    if (e.head == "$true" || e.head == "$false")
      fail(at, "unsupported construct: " + e.head);
    return raw_to_pred(e, env);
  }

  RawExpr parse_raw_expr() {
    Token t = lex_.next();
    RawExpr e;
    e.line = t.line;
    e.col = t.col;
    switch (t.kind) {
      case Tok::upper_word:
        check_var_name(t, t.text);
        e.head = t.text;
        e.is_upper = true;
        return e;
      case Tok::lower_word:
      case Tok::dollar_word:
      case Tok::dollar_dollar_word:
      case Tok::quoted:
        if (t.kind == Tok::dollar_word) {
          if (t.text == "$true" || t.text == "$false") {
            e.head = t.text;
            return e;
          }
          fail(t, "unsupported construct: " + t.text);
        }
        if (t.kind == Tok::dollar_dollar_word && !opts_.allow_reserved)
          fail(t, "symbol '" + t.text + "' uses the reserved '$$' namespace");
        e.head = t.text;
        e.quoted = t.kind == Tok::quoted;
        break;
      default:
        fail(t, "expected a term");
    }
    if (lex_.peek().kind == Tok::lparen) {
      lex_.next();
      for (;;) {
        e.args.push_back(parse_raw_expr());
        if (lex_.peek().kind == Tok::comma) {
          lex_.next();
          continue;
        }
        break;
      }
      expect(Tok::rparen, "')'");
    }
    return e;
  }

  TypePtr raw_to_type(const RawExpr& e, const std::map<std::string, Binder>& env) {
    if (e.is_upper) {
      auto it = env.find(e.head);
      if (it == env.end() || !it->second.is_type_var)
        throw ParseError(e.line, e.col, "'" + e.head + "' is not a bound type variable");
      return Type::var(e.head);
    }
    auto it = result_.problem.sig.type_ctors.find(e.head);
    if (it == result_.problem.sig.type_ctors.end())
      throw ParseError(e.line, e.col,
                       "expected a type, but '" + e.head + "' is not a type constructor");
    if (it->second != e.args.size())
      throw ParseError(e.line, e.col, "type constructor '" + e.head + "' expects " +
                                          std::to_string(it->second) + " arguments");
    std::vector<TypePtr> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(raw_to_type(a, env));
    return Type::app(e.head, std::move(args));
  }

  TermPtr raw_to_term(const RawExpr& e, const std::map<std::string, Binder>& env) {
    if (e.is_upper) {
      auto it = env.find(e.head);
      if (it == env.end())
        throw ParseError(e.line, e.col, "unbound variable '" + e.head + "'");
      if (it->second.is_type_var)
        throw ParseError(e.line, e.col, "type variable '" + e.head + "' used as a term");
      // Kinds are provisional here; normalize() reassigns them from binders.
      return Term::var(e.head, it->second.ty, VarKind::universal);
    }
    const Signature& sig = result_.problem.sig;
    auto fit = sig.funs.find(e.head);
    if (fit == sig.funs.end()) {
      if (sig.preds.count(e.head))
        throw ParseError(e.line, e.col, "predicate '" + e.head + "' used as a function");
      if (opts_.level == Level::untyped) {
        // FOF symbols are declared implicitly on first use.
        FunSig fs;
        fs.arg_types.assign(e.args.size(), untyped_sort());
        fs.result = untyped_sort();
        result_.problem.sig.funs.emplace(e.head, fs);
        fit = result_.problem.sig.funs.find(e.head);
      } else {
        throw ParseError(e.line, e.col, "unknown symbol '" + e.head + "'");
      }
    }
    const FunSig& fs = fit->second;
    return build_application<TermPtr>(e, fs.ty_vars.size(), fs.arg_types.size(), env,
                                      [&](std::vector<TypePtr> tys, std::vector<TermPtr> args) {
                                        return Term::app(e.head, std::move(tys), std::move(args));
                                      });
  }

  SugarPtr raw_to_pred(const RawExpr& e, const std::map<std::string, Binder>& env) {
    const Signature& sig = result_.problem.sig;
    auto pit = sig.preds.find(e.head);
    if (pit == sig.preds.end()) {
      if (sig.funs.count(e.head))
        throw ParseError(e.line, e.col, "function '" + e.head + "' used as a predicate");
      if (opts_.level == Level::untyped) {
        PredSig ps;
        ps.arg_types.assign(e.args.size(), untyped_sort());
        result_.problem.sig.preds.emplace(e.head, ps);
        pit = result_.problem.sig.preds.find(e.head);
      } else {
        throw ParseError(e.line, e.col, "unknown symbol '" + e.head + "'");
      }
    }
    const PredSig& ps = pit->second;
    return build_application<SugarPtr>(e, ps.ty_vars.size(), ps.arg_types.size(), env,
                                       [&](std::vector<TypePtr> tys, std::vector<TermPtr> args) {
                                         return Sugar::pred(e.head, std::move(tys),
                                                            std::move(args));
                                       });
  }

  template <typename R, typename Make>
  R build_application(const RawExpr& e, std::size_t n_ty, std::size_t n_term,
                      const std::map<std::string, Binder>& env, Make make) {
    if (e.args.size() != n_ty + n_term)
      throw ParseError(e.line, e.col, "'" + e.head + "' expects " +
                                          std::to_string(n_ty + n_term) + " arguments, got " +
                                          std::to_string(e.args.size()));
    std::vector<TypePtr> tys;
    tys.reserve(n_ty);
    for (std::size_t i = 0; i < n_ty; ++i) tys.push_back(raw_to_type(e.args[i], env));
    std::vector<TermPtr> args;
    args.reserve(n_term);
    for (std::size_t i = n_ty; i < e.args.size(); ++i)
      args.push_back(raw_to_term(e.args[i], env));
    return make(std::move(tys), std::move(args));
  }

  // Conjectures are negated and merged so the problem is a satisfiability
  // object.
  void finish_conjectures() {
    if (conjectures_.empty()) return;
    SugarPtr merged = conjectures_[0].second;
    for (std::size_t i = 1; i < conjectures_.size(); ++i)
      merged = Sugar::binary(SugarKind::and_op, merged, conjectures_[i].second);
    FormulaPtr g;
    try {
      g = normalize_negated(merged);
    } catch (const UnsupportedInput& e) {
      throw ParseError(0, 0, e.what());
    }
    NamedFormula nf{conjectures_[0].first, Role::negated_conjecture, g};
    auto slot = result_.problem.sentences.begin() + conjecture_slot_;
    result_.problem.sentences.insert(slot, std::move(nf));
  }

  Lexer lex_;
  ParseOptions opts_;
  ParseResult result_;
  std::vector<std::pair<std::string, SugarPtr>> conjectures_;
  long conjecture_slot_ = -1;
  int include_depth_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

bool plain_lower_word(const std::string& s) {
  if (s.empty()) return false;
  if (s.rfind("$", 0) == 0) return true; // $-words print raw
  if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string atom_name(const std::string& s) {
  if (plain_lower_word(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out += "'";
  return out;
}

struct Printer {
  Level level;
  std::ostringstream out = {};

  std::string type_str(const TypePtr& ty) {
    if (ty->is_var()) return ty->name();
    if (ty->args().empty()) return atom_name(ty->name());
    std::string s = atom_name(ty->name()) + "(";
    for (std::size_t i = 0; i < ty->args().size(); ++i) {
      if (i) s += ",";
      s += type_str(ty->args()[i]);
    }
    return s + ")";
  }

  std::string term_str(const TermPtr& t) {
    if (t->is_var()) return t->name();
    std::string s = atom_name(t->name());
    if (t->ty_args().empty() && t->args().empty()) return s;
    s += "(";
    bool first = true;
    if (level == Level::polymorphic) {
      for (const auto& ty : t->ty_args()) {
        if (!first) s += ",";
        first = false;
        s += type_str(ty);
      }
    }
    for (const auto& a : t->args()) {
      if (!first) s += ",";
      first = false;
      s += term_str(a);
    }
    if (first) return atom_name(t->name()); // mono instance with no term args
    return s + ")";
  }

  std::string formula_str(const FormulaPtr& f) {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::string s = atom_name(f->sym());
        bool any = (level == Level::polymorphic && !f->ty_args().empty()) || !f->args().empty();
        if (any) {
          s += "(";
          bool first = true;
          if (level == Level::polymorphic) {
            for (const auto& ty : f->ty_args()) {
              if (!first) s += ",";
              first = false;
              s += type_str(ty);
            }
          }
          for (const auto& a : f->args()) {
            if (!first) s += ",";
            first = false;
            s += term_str(a);
          }
          s += ")";
        }
        return f->positive() ? s : "~" + s;
      }
      case FormulaKind::eq_lit:
        return term_str(f->lhs_term()) + (f->positive() ? " = " : " != ") +
               term_str(f->rhs_term());
      case FormulaKind::conj:
      case FormulaKind::disj: {
        // Flatten the left spine only: the parser rebuilds chains
        // left-associated, so right-nested subchains keep their own
        // parentheses and parse(print(.)) is the identity.
        const char* op = f->kind() == FormulaKind::conj ? " & " : " | ";
        std::vector<FormulaPtr> parts;
        FormulaPtr cur = f;
        while (cur->kind() == f->kind()) {
          parts.push_back(cur->rhs());
          cur = cur->lhs();
        }
        parts.push_back(cur);
        std::string s = "(";
        for (std::size_t i = parts.size(); i-- > 0;) {
          s += formula_str(parts[i]);
          if (i) s += op;
        }
        return s + ")";
      }
      case FormulaKind::forall_term:
      case FormulaKind::exists_term:
      case FormulaKind::forall_type: {
        bool universal = f->kind() != FormulaKind::exists_term;
        std::string s = universal ? "![" : "?[";
        FormulaPtr cur = f;
        bool first = true;
        while ((universal && (cur->kind() == FormulaKind::forall_term ||
                              cur->kind() == FormulaKind::forall_type)) ||
               (!universal && cur->kind() == FormulaKind::exists_term)) {
          if (!first) s += ", ";
          first = false;
          if (cur->kind() == FormulaKind::forall_type) {
            s += cur->var() + ": $tType";
          } else {
            s += cur->var();
            if (level != Level::untyped) s += ": " + type_str(cur->var_type());
          }
          cur = cur->body();
        }
        s += "]: ";
        s += formula_str(cur);
        return s;
      }
    }
    return "";
  }

  std::string decl_scheme(const std::vector<std::string>& ty_vars,
                          const std::vector<TypePtr>& arg_types, const TypePtr& result) {
    std::string s;
    if (!ty_vars.empty()) {
      s += "!>[";
      for (std::size_t i = 0; i < ty_vars.size(); ++i) {
        if (i) s += ", ";
        s += ty_vars[i] + ": $tType";
      }
      s += "]: ";
    }
    std::string res = result ? type_str(result) : "$o";
    if (arg_types.empty()) {
      s += res;
      return s;
    }
    std::string args;
    if (arg_types.size() == 1) {
      args = type_str(arg_types[0]);
    } else {
      args = "(";
      for (std::size_t i = 0; i < arg_types.size(); ++i) {
        if (i) args += " * ";
        args += type_str(arg_types[i]);
      }
      args += ")";
    }
    if (!ty_vars.empty())
      s += "(" + args + " > " + res + ")";
    else
      s += args + " > " + res;
    return s;
  }

  void run(const Problem& p) {
    const char* kw = level == Level::untyped ? "fof" : "tff";
    std::size_t decl = 0;
    if (level != Level::untyped) {
      for (const auto& [name, arity] : p.sig.type_ctors) {
        if (name == kUntypedSort) continue;
        out << kw << "(decl_" << decl++ << ", type, " << atom_name(name) << ": ";
        if (arity == 0) {
          out << "$tType";
        } else if (arity == 1) {
          out << "$tType > $tType";
        } else {
          out << "(";
          for (std::size_t i = 0; i < arity; ++i) out << (i ? " * " : "") << "$tType";
          out << ") > $tType";
        }
        out << ").\n";
      }
      for (const auto& [name, fs] : p.sig.funs)
        out << kw << "(decl_" << decl++ << ", type, " << atom_name(name) << ": "
            << decl_scheme(fs.ty_vars, fs.arg_types, fs.result) << ").\n";
      for (const auto& [name, ps] : p.sig.preds)
        out << kw << "(decl_" << decl++ << ", type, " << atom_name(name) << ": "
            << decl_scheme(ps.ty_vars, ps.arg_types, nullptr) << ").\n";
    }
    for (const auto& nf : p.sentences)
      out << kw << "(" << (plain_lower_word(nf.name) ? nf.name : atom_name(nf.name)) << ", "
          << role_name(nf.role) << ", " << formula_str(nf.formula) << ").\n";
  }
};

} // namespace

ParseResult parse(const std::string& text, const ParseOptions& opts) {
  Parser parser(text, opts);
  return parser.run();
}

std::string print(const Problem& p, Level level) {
  if (p.sig.level != level)
    throw InternalError("print: problem level does not match the requested level");
  Printer printer{level};
  printer.run(p);
  return printer.out.str();
}

} // namespace polyenc

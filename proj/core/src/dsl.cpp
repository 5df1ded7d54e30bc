#include "plcmon/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "plcmon/synthesis.hpp"
#include "plcmon/validate.hpp"

namespace plcmon {

std::string ParseError::text() const {
  std::ostringstream os;
  os << "line " << line << ", col " << col << ": " << message;
  return os.str();
}

bool is_reserved_word(const std::string& w) {
  static const char* kWords[] = {
      "alphabet", "sensors", "actuators", "channels", "controller", "malware",
      "automaton", "network",  "system",    "fix",      "tick",       "else",
      "snd",      "rcv",      "cmd",       "drop",     "end",        "nil",
      "go",       "tau",      "other",     "synth"};
  return std::any_of(std::begin(kWords), std::end(kWords),
                     [&](const char* k) { return w == k; });
}

namespace {

enum class Tok {
  Ident,    // lower-case name or keyword
  Var,      // upper-case-initial variable
  LBracket, RBracket, LParen, RParen, LBrace, RBrace,
  Dot, Plus, Slash, Comma, Backslash, Equals,
  Turnstile,  // |-
  ParPar,     // ||
  Pipe,       // |
  InjSnd, InjRcv, InjCmd,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

struct LexOut {
  std::vector<Token> tokens;
  std::vector<ParseError> errors;
};

LexOut lex(std::string_view src) {
  LexOut out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t, int l, int c) {
    out.tokens.push_back({k, std::move(t), l, c});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (c == ' ' || c == '\t' || c == '\r') { ++col; ++i; continue; }
    if (c == '#') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int tl = line, tc = col;
    auto single = [&](Tok k) { push(k, std::string(1, c), tl, tc); ++i; ++col; };
    switch (c) {
      case '[': single(Tok::LBracket); continue;
      case ']': single(Tok::RBracket); continue;
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '{': single(Tok::LBrace); continue;
      case '}': single(Tok::RBrace); continue;
      case '.': single(Tok::Dot); continue;
      case '+': single(Tok::Plus); continue;
      case '/': single(Tok::Slash); continue;
      case ',': single(Tok::Comma); continue;
      case '\\': single(Tok::Backslash); continue;
      case '=': single(Tok::Equals); continue;
      case '|':
        if (i + 1 < src.size() && src[i + 1] == '-') {
          push(Tok::Turnstile, "|-", tl, tc); i += 2; col += 2;
        } else if (i + 1 < src.size() && src[i + 1] == '|') {
          push(Tok::ParPar, "||", tl, tc); i += 2; col += 2;
        } else {
          single(Tok::Pipe);
        }
        continue;
      default: break;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::islower(static_cast<unsigned char>(src[j])) ||
              std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      // malware prefixes are hyphenated keywords
      if (word == "inj" && j < src.size() && src[j] == '-') {
        std::size_t k = j + 1;
        std::size_t v = k;
        while (v < src.size() && std::islower(static_cast<unsigned char>(src[v]))) ++v;
        std::string verb(src.substr(k, v - k));
        Tok kind = Tok::Ident;
        if (verb == "snd") kind = Tok::InjSnd;
        else if (verb == "rcv") kind = Tok::InjRcv;
        else if (verb == "cmd") kind = Tok::InjCmd;
        if (kind != Tok::Ident) {
          push(kind, "inj-" + verb, tl, tc);
          col += static_cast<int>(v - i);
          i = v;
          continue;
        }
      }
      push(Tok::Ident, word, tl, tc);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      push(Tok::Var, std::string(src.substr(i, j - i)), tl, tc);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    out.errors.push_back({tl, tc, std::string("unexpected character '") + c + "'"});
    ++i; ++col;
  }
  out.tokens.push_back({Tok::Eof, "", line, col});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  std::vector<ParseError>* errors;

  struct Bail {};  // unwinds to the nearest recovery point

  const Token& cur() const { return toks[pos]; }
  const Token& peek(std::size_t n = 1) const {
    return toks[std::min(pos + n, toks.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(const char* w) const {
    return cur().kind == Tok::Ident && cur().text == w;
  }
  Token advance() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }

  [[noreturn]] void fail(const std::string& msg) {
    errors->push_back({cur().line, cur().col, msg});
    throw Bail{};
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + ", got '" + cur().text + "'");
    return advance();
  }
  void expect_word(const char* w) {
    if (!at_word(w)) fail(std::string("expected '") + w + "', got '" + cur().text + "'");
    advance();
  }
  std::string expect_name(const char* what) {
    if (cur().kind != Tok::Ident || is_reserved_word(cur().text))
      fail(std::string("expected ") + what + ", got '" + cur().text + "'");
    return advance().text;
  }

  // ---- controllers ----

  CtrlPtr controller_term(std::vector<std::string>& fixvars) {
    if (at_word("fix")) {
      advance();
      std::string var = expect(Tok::Var, "a variable").text;
      expect(Tok::Dot, "'.'");
      fixvars.push_back(var);
      auto body = controller_term(fixvars);
      fixvars.pop_back();
      return ctrl_fix(var, body);
    }
    if (at_word("tick")) {
      advance();
      expect(Tok::Dot, "'.'");
      return ctrl_sleep(controller_term(fixvars));
    }
    if (at_word("cmd")) {
      advance();
      std::string a = expect_name("an actuator name");
      expect(Tok::Dot, "'.'");
      return ctrl_cmd(a, controller_term(fixvars));
    }
    if (at_word("end")) {
      advance();
      if (at(Tok::Dot)) {
        advance();
        std::string var = expect(Tok::Var, "a variable after 'end .'").text;
        return ctrl_end_var(var);
      }
      if (fixvars.empty()) fail("bare 'end' outside a fix binder");
      return ctrl_end_var(fixvars.back());
    }
    if (at(Tok::LBracket)) {
      advance();
      std::vector<Ctrl::Branch> branches;
      branches.push_back(controller_branch(fixvars));
      while (at(Tok::Plus)) {
        advance();
        branches.push_back(controller_branch(fixvars));
      }
      expect(Tok::RBracket, "']'");
      expect_word("else");
      expect(Tok::LParen, "'('");
      auto els = controller_term(fixvars);
      expect(Tok::RParen, "')'");
      return ctrl_timeout(std::move(branches), els);
    }
    if (at(Tok::LParen)) {
      advance();
      auto t = controller_term(fixvars);
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at(Tok::Var)) return ctrl_var(advance().text);
    fail("expected a controller term, got '" + cur().text + "'");
  }

  Ctrl::Branch controller_branch(std::vector<std::string>& fixvars) {
    Action guard;
    if (at_word("rcv")) {
      advance();
      guard = Action::recv(expect_name("a channel name"));
    } else if (at_word("snd")) {
      advance();
      guard = Action::send(expect_name("a channel name"));
    } else {
      guard = Action::read(expect_name("a sensor name"));
    }
    expect(Tok::Dot, "'.'");
    return {guard, controller_term(fixvars)};
  }

  // ---- malware ----

  MalwPtr malware_term() {
    if (at_word("fix")) {
      advance();
      std::string var = expect(Tok::Var, "a variable").text;
      expect(Tok::Dot, "'.'");
      return malw_fix(var, malware_term());
    }
    if (at_word("tick")) {
      advance();
      expect(Tok::Dot, "'.'");
      return malw_tick(malware_term());
    }
    if (at_word("nil")) {
      advance();
      return malw_nil();
    }
    if (at(Tok::Var)) return malw_var(advance().text);
    if (at(Tok::LBracket)) {
      advance();
      std::vector<Malw::Branch> branches;
      branches.push_back(malware_branch());
      while (at(Tok::Plus)) {
        advance();
        branches.push_back(malware_branch());
      }
      expect(Tok::RBracket, "']'");
      expect_word("else");
      expect(Tok::LParen, "'('");
      auto els = malware_term();
      expect(Tok::RParen, "')'");
      return malw_timeout(std::move(branches), els);
    }
    if (at(Tok::LParen)) {
      advance();
      auto t = malware_term();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("expected a malware term, got '" + cur().text + "'");
  }

  Malw::Branch malware_branch() {
    Action guard;
    if (at(Tok::InjSnd)) { advance(); guard = Action::send(expect_name("a channel name")); }
    else if (at(Tok::InjRcv)) { advance(); guard = Action::recv(expect_name("a channel name")); }
    else if (at(Tok::InjCmd)) { advance(); guard = Action::cmd(expect_name("an actuator name")); }
    else if (at_word("drop")) { advance(); guard = Action::drop(expect_name("an actuator name")); }
    else fail("expected a malicious prefix, got '" + cur().text + "'");
    expect(Tok::Dot, "'.'");
    return {guard, malware_term()};
  }

  // ---- edit automata ----

  Action edit_action() {
    if (at_word("tick")) { advance(); return Action::tick(); }
    if (at_word("end")) { advance(); return Action::end(); }
    if (at_word("tau")) { advance(); return Action::tau(); }
    if (at_word("cmd")) { advance(); return Action::cmd(expect_name("an actuator name")); }
    if (at_word("drop")) { advance(); return Action::drop(expect_name("an actuator name")); }
    if (at_word("snd")) { advance(); return Action::send(expect_name("a channel name")); }
    if (at_word("rcv")) { advance(); return Action::recv(expect_name("a channel name")); }
    return Action::read(expect_name("an action"));
  }

  EditPtr edit_primary() {
    if (at_word("go")) { advance(); return edit_go(); }
    if (at_word("fix")) {
      // a sum body needs parentheses: fix Y . ( b1 + b2 )
      advance();
      std::string var = expect(Tok::Var, "a variable").text;
      expect(Tok::Dot, "'.'");
      return edit_fix(var, edit_primary());
    }
    if (at(Tok::Var)) return edit_var(advance().text);
    if (at(Tok::LParen)) {
      advance();
      auto t = edit_sum_term();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("expected an automaton term, got '" + cur().text + "'");
  }

  // A sum of branches; a lone go/fix/variable/group stands for itself.
  // Branches start with an action or `other`, which are plain identifiers,
  // so the two cases never overlap.
  EditPtr edit_sum_term() {
    if (at(Tok::Var) || at(Tok::LParen) || at_word("go") || at_word("fix")) {
      auto t = edit_primary();
      if (at(Tok::Plus)) fail("'+' after a complete automaton term");
      return t;
    }
    std::vector<Edit::Branch> branches;
    std::vector<Edit::Complement> complements;
    parse_edit_branch(branches, complements);
    while (at(Tok::Plus)) {
      advance();
      parse_edit_branch(branches, complements);
    }
    return edit_sum(std::move(branches), std::move(complements));
  }

  void parse_edit_branch(std::vector<Edit::Branch>& branches,
                         std::vector<Edit::Complement>& complements) {
    if (at_word("other")) {
      advance();
      std::vector<Action> except;
      if (at(Tok::Backslash)) {
        advance();
        expect(Tok::LBrace, "'{'");
        if (!at(Tok::RBrace)) {
          except.push_back(edit_action());
          while (at(Tok::Comma)) {
            advance();
            except.push_back(edit_action());
          }
        }
        expect(Tok::RBrace, "'}'");
        std::sort(except.begin(), except.end());
        except.erase(std::unique(except.begin(), except.end()), except.end());
      }
      expect(Tok::Slash, "'/'");
      expect_word("tau");
      expect(Tok::Dot, "'.'");
      complements.push_back({std::move(except), edit_primary()});
      return;
    }
    Action in = edit_action();
    expect(Tok::Slash, "'/'");
    Action out = edit_action();
    expect(Tok::Dot, "'.'");
    branches.push_back({in, out, edit_primary()});
  }

  // ---- file structure ----

  Alphabet alphabet_block() {
    Alphabet a;
    expect_word("alphabet");
    expect_word("sensors");
    a.sensors = name_set();
    expect_word("actuators");
    a.actuators = name_set();
    expect_word("channels");
    a.channels = name_set();
    return a;
  }

  std::vector<std::string> name_set() {
    expect(Tok::LBrace, "'{'");
    std::vector<std::string> names;
    if (!at(Tok::RBrace)) {
      names.push_back(expect_name("a name"));
      while (at(Tok::Comma)) {
        advance();
        names.push_back(expect_name("a name"));
      }
    }
    expect(Tok::RBrace, "'}'");
    return names;
  }

  NetworkDef network_def() {
    NetworkDef def;
    def.nodes.push_back(network_node());
    while (at(Tok::ParPar)) {
      advance();
      def.nodes.push_back(network_node());
    }
    return def;
  }

  NodeRef network_node() {
    NodeRef node;
    if (at_word("go")) {
      advance();
      node.monKind = NodeRef::Mon::Go;
    } else if (at_word("synth")) {
      advance();
      expect(Tok::LParen, "'('");
      node.monKind = NodeRef::Mon::Synth;
      node.mon = expect_name("a controller name");
      expect(Tok::RParen, "')'");
    } else {
      node.monKind = NodeRef::Mon::Name;
      node.mon = expect_name("a monitor reference");
    }
    expect(Tok::Turnstile, "'|-'");
    if (at(Tok::LParen)) {
      advance();
      node.ctrl = expect_name("a controller name");
      expect(Tok::Pipe, "'|'");
      node.mal = expect_name("a malware name");
      expect(Tok::RParen, "')'");
    } else {
      node.ctrl = expect_name("a controller name");
    }
    return node;
  }
};

void skip_to_next_definition(Parser& p) {
  while (!p.at(Tok::Eof)) {
    if (p.cur().kind == Tok::Ident &&
        (p.cur().text == "controller" || p.cur().text == "malware" ||
         p.cur().text == "automaton" || p.cur().text == "network" ||
         p.cur().text == "system"))
      return;
    p.advance();
  }
}

}  // namespace

ParseResult parse_source(std::string_view text) {
  ParseResult result;
  auto lx = lex(text);
  result.errors = lx.errors;
  Parser p{std::move(lx.tokens), 0, &result.errors};

  SourceFile file;
  auto defined = [&](const std::string& name) {
    return file.find_controller(name) || file.find_malware(name) ||
           file.find_automaton(name) || file.find_network(name);
  };

  try {
    file.alphabet = p.alphabet_block();
  } catch (Parser::Bail&) {
    return result;
  }

  while (!p.at(Tok::Eof)) {
    try {
      if (p.at_word("controller")) {
        p.advance();
        std::string name = p.expect_name("a definition name");
        p.expect(Tok::Equals, "'='");
        std::vector<std::string> fixvars;
        auto term = p.controller_term(fixvars);
        if (defined(name))
          result.errors.push_back({p.cur().line, p.cur().col,
                                   "duplicate definition '" + name + "'"});
        else
          file.controllers.emplace_back(name, term);
      } else if (p.at_word("malware")) {
        p.advance();
        std::string name = p.expect_name("a definition name");
        p.expect(Tok::Equals, "'='");
        auto term = p.malware_term();
        if (defined(name))
          result.errors.push_back({p.cur().line, p.cur().col,
                                   "duplicate definition '" + name + "'"});
        else
          file.malware.emplace_back(name, term);
      } else if (p.at_word("automaton")) {
        p.advance();
        std::string name = p.expect_name("a definition name");
        p.expect(Tok::Equals, "'='");
        auto term = p.edit_sum_term();
        if (defined(name))
          result.errors.push_back({p.cur().line, p.cur().col,
                                   "duplicate definition '" + name + "'"});
        else
          file.automata.emplace_back(name, term);
      } else if (p.at_word("network")) {
        p.advance();
        std::string name = p.expect_name("a definition name");
        p.expect(Tok::Equals, "'='");
        auto def = p.network_def();
        for (const auto& node : def.nodes) {
          if (!file.find_controller(node.ctrl))
            result.errors.push_back({p.cur().line, p.cur().col,
                                     "unknown controller '" + node.ctrl + "'"});
          if (!node.mal.empty() && !file.find_malware(node.mal))
            result.errors.push_back({p.cur().line, p.cur().col,
                                     "unknown malware '" + node.mal + "'"});
          if (node.monKind == NodeRef::Mon::Name && !file.find_automaton(node.mon))
            result.errors.push_back({p.cur().line, p.cur().col,
                                     "unknown automaton '" + node.mon + "'"});
          if (node.monKind == NodeRef::Mon::Synth && !file.find_controller(node.mon))
            result.errors.push_back({p.cur().line, p.cur().col,
                                     "unknown controller '" + node.mon + "'"});
        }
        if (defined(name))
          result.errors.push_back({p.cur().line, p.cur().col,
                                   "duplicate definition '" + name + "'"});
        else
          file.networks.emplace_back(name, def);
      } else if (p.at_word("system")) {
        p.advance();
        file.entry = p.expect_name("a network name");
        if (!file.find_network(file.entry))
          result.errors.push_back({p.cur().line, p.cur().col,
                                   "unknown network '" + file.entry + "'"});
      } else {
        p.fail("expected a definition, got '" + p.cur().text + "'");
      }
    } catch (Parser::Bail&) {
      skip_to_next_definition(p);
    }
  }

  if (result.errors.empty()) result.file = std::move(file);
  return result;
}

namespace {

template <typename T>
const T* find_in(const std::vector<std::pair<std::string, T>>& v,
                 const std::string& name) {
  for (const auto& [n, t] : v)
    if (n == name) return &t;
  return nullptr;
}

template <typename Fn>
auto parse_one(const std::string& text, Fn&& fn) {
  auto lx = lex(text);
  std::vector<ParseError> errors = lx.errors;
  Parser p{std::move(lx.tokens), 0, &errors};
  try {
    auto term = fn(p);
    if (!p.at(Tok::Eof)) p.fail("trailing input after term");
    if (!errors.empty()) throw Parser::Bail{};
    return term;
  } catch (Parser::Bail&) {
    std::string msg = "parse error";
    if (!errors.empty()) msg = errors.front().text();
    throw std::runtime_error(msg);
  }
}

}  // namespace

const CtrlPtr* SourceFile::find_controller(const std::string& n) const {
  return find_in(controllers, n);
}
const MalwPtr* SourceFile::find_malware(const std::string& n) const {
  return find_in(malware, n);
}
const EditPtr* SourceFile::find_automaton(const std::string& n) const {
  return find_in(automata, n);
}
const NetworkDef* SourceFile::find_network(const std::string& n) const {
  return find_in(networks, n);
}

System SourceFile::instantiate(const std::string& network_name) const {
  const NetworkDef* def = find_network(network_name);
  if (!def) throw std::runtime_error("unknown network '" + network_name + "'");
  System sys;
  sys.alphabet = alphabet;
  for (const auto& node : def->nodes) {
    const CtrlPtr* ctrl = find_controller(node.ctrl);
    if (!ctrl) throw std::runtime_error("unknown controller '" + node.ctrl + "'");
    MonNode mn;
    mn.ctrl = *ctrl;
    switch (node.monKind) {
      case NodeRef::Mon::Go:
        mn.monitor = edit_go();
        break;
      case NodeRef::Mon::Name: {
        const EditPtr* e = find_automaton(node.mon);
        if (!e) throw std::runtime_error("unknown automaton '" + node.mon + "'");
        mn.monitor = *e;
        break;
      }
      case NodeRef::Mon::Synth: {
        const CtrlPtr* q = find_controller(node.mon);
        if (!q) throw std::runtime_error("unknown controller '" + node.mon + "'");
        mn.monitor = synthesize(*q, alphabet).automaton;
        break;
      }
    }
    if (!node.mal.empty()) {
      const MalwPtr* m = find_malware(node.mal);
      if (!m) throw std::runtime_error("unknown malware '" + node.mal + "'");
      mn.malware = *m;
    }
    sys.nodes.push_back(std::move(mn));
  }
  return sys;
}

System SourceFile::instantiate_entry() const {
  if (!entry.empty()) return instantiate(entry);
  if (networks.size() == 1) return instantiate(networks.front().first);
  throw std::runtime_error("no entry network declared");
}

CtrlPtr parse_controller(const std::string& text) {
  return parse_one(text, [](Parser& p) {
    std::vector<std::string> fixvars;
    return p.controller_term(fixvars);
  });
}
MalwPtr parse_malware(const std::string& text) {
  return parse_one(text, [](Parser& p) { return p.malware_term(); });
}
EditPtr parse_automaton(const std::string& text) {
  return parse_one(text, [](Parser& p) { return p.edit_sum_term(); });
}

// ---- printing --------------------------------------------------------------

namespace {

void indent(std::string& out, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

void print_ctrl(std::string& out, const CtrlPtr& t, int depth,
                const std::vector<std::string>& fixvars);

void print_ctrl_branches(std::string& out, const CtrlPtr& t, int depth,
                         const std::vector<std::string>& fixvars) {
  out += "[\n";
  for (std::size_t i = 0; i < t->branches.size(); ++i) {
    indent(out, depth + 1);
    if (i) out += "+ ";
    const auto& b = t->branches[i];
    switch (b.guard.kind) {
      case ActKind::Read: out += b.guard.name; break;
      case ActKind::Recv: out += "rcv " + b.guard.name; break;
      case ActKind::Send: out += "snd " + b.guard.name; break;
      default: out += b.guard.text(); break;
    }
    out += " . ";
    print_ctrl(out, b.body, depth + 1, fixvars);
    out += "\n";
  }
  indent(out, depth);
  out += "] else ( ";
  print_ctrl(out, t->child, depth, fixvars);
  out += " )";
}

void print_ctrl(std::string& out, const CtrlPtr& t, int depth,
                const std::vector<std::string>& fixvars) {
  if (!t) { out += "?"; return; }
  switch (t->tag) {
    case Ctrl::Tag::Fix: {
      out += "fix " + t->name + " . ";
      auto inner = fixvars;
      inner.push_back(t->name);
      print_ctrl(out, t->child, depth, inner);
      return;
    }
    case Ctrl::Tag::Sleep:
      out += "tick . ";
      print_ctrl(out, t->child, depth, fixvars);
      return;
    case Ctrl::Tag::Cmd:
      out += "cmd " + t->name + " . ";
      print_ctrl(out, t->child, depth, fixvars);
      return;
    case Ctrl::Tag::End:
      if (t->child) {
        // runtime-only form; not accepted back by the parser
        out += "end . ( ";
        print_ctrl(out, t->child, depth, fixvars);
        out += " )";
      } else if (!fixvars.empty() && fixvars.back() == t->name) {
        out += "end";
      } else {
        out += "end . " + t->name;
      }
      return;
    case Ctrl::Tag::Var:
      out += t->name;
      return;
    case Ctrl::Tag::Timeout:
      print_ctrl_branches(out, t, depth, fixvars);
      return;
  }
}

void print_malw(std::string& out, const MalwPtr& t, int depth) {
  if (!t) { out += "?"; return; }
  switch (t->tag) {
    case Malw::Tag::Fix:
      out += "fix " + t->name + " . ";
      print_malw(out, t->child, depth);
      return;
    case Malw::Tag::Tick:
      out += "tick . ";
      print_malw(out, t->child, depth);
      return;
    case Malw::Tag::Nil:
      out += "nil";
      return;
    case Malw::Tag::Var:
      out += t->name;
      return;
    case Malw::Tag::Timeout: {
      out += "[ ";
      for (std::size_t i = 0; i < t->branches.size(); ++i) {
        if (i) out += " + ";
        const auto& b = t->branches[i];
        switch (b.guard.kind) {
          case ActKind::Send: out += "inj-snd " + b.guard.name; break;
          case ActKind::Recv: out += "inj-rcv " + b.guard.name; break;
          case ActKind::Cmd: out += "inj-cmd " + b.guard.name; break;
          case ActKind::Drop: out += "drop " + b.guard.name; break;
          default: out += b.guard.text(); break;
        }
        out += " . ";
        print_malw(out, b.body, depth);
      }
      out += " ] else ( ";
      print_malw(out, t->child, depth);
      out += " )";
      return;
    }
  }
}

void print_edit(std::string& out, const EditPtr& t, int depth) {
  if (!t) { out += "?"; return; }
  switch (t->tag) {
    case Edit::Tag::Go:
      out += "go";
      return;
    case Edit::Tag::Var:
      out += t->name;
      return;
    case Edit::Tag::Fix:
      out += "fix " + t->name + " . ";
      print_edit(out, t->child, depth);
      return;
    case Edit::Tag::Sum: {
      out += "(\n";
      bool first = true;
      for (const auto& b : t->branches) {
        indent(out, depth + 1);
        if (!first) out += "+ ";
        first = false;
        out += b.in.text() + "/" + b.out.text() + " . ";
        print_edit(out, b.next, depth + 1);
        out += "\n";
      }
      for (const auto& k : t->complements) {
        indent(out, depth + 1);
        if (!first) out += "+ ";
        first = false;
        out += "other";
        if (!k.except.empty()) {
          out += " \\ { ";
          for (std::size_t i = 0; i < k.except.size(); ++i) {
            if (i) out += ", ";
            out += k.except[i].text();
          }
          out += " }";
        }
        out += " / tau . ";
        print_edit(out, k.next, depth + 1);
        out += "\n";
      }
      indent(out, depth);
      out += ")";
      return;
    }
  }
}

std::string name_set_text(const std::vector<std::string>& names) {
  std::string out = "{ ";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  out += names.empty() ? "}" : " }";
  return out;
}

}  // namespace

std::string print_controller(const CtrlPtr& term) {
  std::string out;
  print_ctrl(out, term, 0, {});
  return out;
}

std::string print_malware(const MalwPtr& term) {
  std::string out;
  print_malw(out, term, 0);
  return out;
}

std::string print_automaton(const EditPtr& term) {
  std::string out;
  print_edit(out, term, 0);
  return out;
}

std::string print_source(const SourceFile& file) {
  std::string out = "alphabet sensors" + name_set_text(file.alphabet.sensors) +
                    " actuators" + name_set_text(file.alphabet.actuators) +
                    " channels" + name_set_text(file.alphabet.channels) + "\n\n";
  for (const auto& [name, term] : file.controllers)
    out += "controller " + name + " = " + print_controller(term) + "\n\n";
  for (const auto& [name, term] : file.malware)
    out += "malware " + name + " = " + print_malware(term) + "\n\n";
  for (const auto& [name, term] : file.automata)
    out += "automaton " + name + " = " + print_automaton(term) + "\n\n";
  for (const auto& [name, def] : file.networks) {
    out += "network " + name + " =";
    for (std::size_t i = 0; i < def.nodes.size(); ++i) {
      const auto& n = def.nodes[i];
      out += i ? "\n  || " : " ";
      switch (n.monKind) {
        case NodeRef::Mon::Go: out += "go"; break;
        case NodeRef::Mon::Name: out += n.mon; break;
        case NodeRef::Mon::Synth: out += "synth(" + n.mon + ")"; break;
      }
      out += " |- ";
      if (n.mal.empty()) out += n.ctrl;
      else out += "( " + n.ctrl + " | " + n.mal + " )";
    }
    out += "\n\n";
  }
  if (!file.entry.empty()) out += "system " + file.entry + "\n";
  return out;
}

std::optional<Action> parse_action(const std::string& text) {
  auto lx = lex(text);
  if (!lx.errors.empty()) return std::nullopt;
  std::vector<ParseError> errors;
  Parser p{std::move(lx.tokens), 0, &errors};
  try {
    Action a = p.edit_action();
    if (!p.at(Tok::Eof)) return std::nullopt;
    return a;
  } catch (Parser::Bail&) {
    return std::nullopt;
  }
}

std::optional<Trace> parse_trace(const std::string& text) {
  Trace t;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string piece = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    // trim
    while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front())))
      piece.erase(piece.begin());
    while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back())))
      piece.pop_back();
    if (!piece.empty()) {
      auto a = parse_action(piece);
      if (!a) return std::nullopt;
      t.push_back(*a);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return t;
}

}  // namespace plcmon

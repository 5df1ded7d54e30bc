#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plcmon/terms.hpp"

namespace plcmon {

struct ParseError {
  int line = 0;
  int col = 0;
  std::string message;
  std::string text() const;
};

// A network definition keeps the references it was written with, so files
// round-trip; instantiation resolves them against the file's definitions.
struct NodeRef {
  enum class Mon { Go, Name, Synth };
  Mon monKind = Mon::Go;
  std::string mon;   // automaton name (Name) or controller name (Synth)
  std::string ctrl;
  std::string mal;   // empty when the node carries no malware
};
struct NetworkDef {
  std::vector<NodeRef> nodes;
};

struct SourceFile {
  Alphabet alphabet;
  std::vector<std::pair<std::string, CtrlPtr>> controllers;
  std::vector<std::pair<std::string, MalwPtr>> malware;
  std::vector<std::pair<std::string, EditPtr>> automata;
  std::vector<std::pair<std::string, NetworkDef>> networks;
  std::string entry;  // optional: network named by a `system` line

  const CtrlPtr* find_controller(const std::string& name) const;
  const MalwPtr* find_malware(const std::string& name) const;
  const EditPtr* find_automaton(const std::string& name) const;
  const NetworkDef* find_network(const std::string& name) const;

  // Builds the runnable system for a network definition; `synth(p)`
  // monitors are synthesized here. Throws std::runtime_error on unresolved
  // names or failed synthesis.
  System instantiate(const std::string& network_name) const;
  // Entry network when declared, otherwise the unique network of the file.
  System instantiate_entry() const;
};

struct ParseResult {
  std::optional<SourceFile> file;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty() && file.has_value(); }
};

ParseResult parse_source(std::string_view text);

// Single-term entry points; throw std::runtime_error on syntax errors.
CtrlPtr parse_controller(const std::string& text);
MalwPtr parse_malware(const std::string& text);
EditPtr parse_automaton(const std::string& text);

std::string print_controller(const CtrlPtr& term);
std::string print_malware(const MalwPtr& term);
std::string print_automaton(const EditPtr& term);
std::string print_source(const SourceFile& file);

std::optional<Action> parse_action(const std::string& text);
std::optional<Trace> parse_trace(const std::string& text);  // comma separated

bool is_reserved_word(const std::string& word);

}  // namespace plcmon

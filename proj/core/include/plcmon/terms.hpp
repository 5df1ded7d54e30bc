#pragma once

#include <memory>
#include <string>
#include <vector>

#include "plcmon/action.hpp"

namespace plcmon {

// All term nodes are immutable and hash-consed: the factory functions below
// intern structurally equal nodes, so pointer equality coincides with
// structural equality and terms are safe to share across threads.

struct Ctrl;
struct Malw;
struct Edit;
using CtrlPtr = std::shared_ptr<const Ctrl>;
using MalwPtr = std::shared_ptr<const Malw>;
using EditPtr = std::shared_ptr<const Edit>;

// Controller term. One node type covers the four phase grammars (initial,
// sensing, communication, actuation); phase discipline is a validation
// concern, not a construction invariant.
struct Ctrl {
  enum class Tag : std::uint8_t {
    Fix,      // fix X . body
    Sleep,    // tick . body
    Timeout,  // [ sum of guarded branches ] else body
    Cmd,      // cmd a . body
    End,      // end . X   (var set)  |  end . P  (child set, runtime only)
    Var,      // stray variable occurrence; flagged by validation
  };
  struct Branch {
    Action guard;  // Read / Recv / Send
    CtrlPtr body;
  };

  Tag tag;
  std::string name;  // Fix/Var: variable; Cmd: actuator; End: variable or ""
  std::vector<Branch> branches;
  CtrlPtr child;  // Fix/Sleep/Cmd body, Timeout else, End continuation

  Ctrl(Tag t, std::string n, std::vector<Branch> b, CtrlPtr c)
      : tag(t), name(std::move(n)), branches(std::move(b)), child(std::move(c)) {}
};

CtrlPtr ctrl_fix(const std::string& var, CtrlPtr body);
CtrlPtr ctrl_sleep(CtrlPtr body);
CtrlPtr ctrl_timeout(std::vector<Ctrl::Branch> branches, CtrlPtr els);
CtrlPtr ctrl_cmd(const std::string& actuator, CtrlPtr body);
CtrlPtr ctrl_end_var(const std::string& var);
CtrlPtr ctrl_end_cont(CtrlPtr controller);
CtrlPtr ctrl_var(const std::string& var);

// Malware term.
struct Malw {
  enum class Tag : std::uint8_t {
    Timeout,  // [ sum of malicious prefixes ] else body
    Fix,
    Var,
    Tick,
    Nil,
  };
  struct Branch {
    Action guard;  // Send / Recv / Cmd / Drop
    MalwPtr body;
  };

  Tag tag;
  std::string name;  // Fix/Var
  std::vector<Branch> branches;
  MalwPtr child;  // Timeout else, Fix/Tick body

  Malw(Tag t, std::string n, std::vector<Branch> b, MalwPtr c)
      : tag(t), name(std::move(n)), branches(std::move(b)), child(std::move(c)) {}
};

MalwPtr malw_timeout(std::vector<Malw::Branch> branches, MalwPtr els);
MalwPtr malw_fix(const std::string& var, MalwPtr body);
MalwPtr malw_var(const std::string& var);
MalwPtr malw_tick(MalwPtr body);
MalwPtr malw_nil();

// Edit automaton term. A replacement sum carries explicit input/output
// branches plus optional complement branches: a complement stands for one
// suppression branch per action in (Act* ∪ Chn*) minus the listed
// exceptions, all outputting tau. Complements keep synthesized automata
// readable; expand_automaton materializes them.
struct Edit {
  enum class Tag : std::uint8_t { Go, Sum, Fix, Var };
  struct Branch {
    Action in;
    Action out;
    EditPtr next;
  };
  struct Complement {
    std::vector<Action> except;  // sorted, members of Act* ∪ Chn*
    EditPtr next;
  };

  Tag tag;
  std::string name;  // Fix/Var
  std::vector<Branch> branches;
  std::vector<Complement> complements;
  EditPtr child;  // Fix body

  Edit(Tag t, std::string n, std::vector<Branch> b, std::vector<Complement> k,
       EditPtr c)
      : tag(t),
        name(std::move(n)),
        branches(std::move(b)),
        complements(std::move(k)),
        child(std::move(c)) {}
};

EditPtr edit_go();
EditPtr edit_sum(std::vector<Edit::Branch> branches,
                 std::vector<Edit::Complement> complements = {});
EditPtr edit_fix(const std::string& var, EditPtr body);
EditPtr edit_var(const std::string& var);

// Deterministic structural orderings (pointer-equality shortcutted).
int cmp(const Ctrl* a, const Ctrl* b);
int cmp(const Malw* a, const Malw* b);
int cmp(const Edit* a, const Edit* b);

// Capture-free substitution of a closed replacement for a variable;
// inner binders of the same name shadow as usual. Results are memoized.
CtrlPtr subst(const CtrlPtr& term, const std::string& var, const CtrlPtr& repl);
MalwPtr subst(const MalwPtr& term, const std::string& var, const MalwPtr& repl);
EditPtr subst(const EditPtr& term, const std::string& var, const EditPtr& repl);

// Rebuilds a closed term with binders renamed x1, x2, ... in traversal
// order, so alpha-equivalent states intern to the same node.
CtrlPtr canonical(const CtrlPtr& term);
MalwPtr canonical(const MalwPtr& term);
EditPtr canonical(const EditPtr& term);

// A monitored controller: an edit automaton enforcing a possibly
// compromised controller, with the insertion rule toggled per node.
struct MonNode {
  EditPtr monitor;
  CtrlPtr ctrl;
  MalwPtr malware;  // null when the controller is genuine
  bool mitigation = false;
};

// A field network is a flattened parallel composition of monitored nodes.
struct System {
  Alphabet alphabet;
  std::vector<MonNode> nodes;
};

// go-monitored genuine controllers of the same network: malware stripped,
// every monitor replaced by go, mitigation off.
System golden_of(const System& s);

}  // namespace plcmon

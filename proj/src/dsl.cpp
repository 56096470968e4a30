#include "proofcomp/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace proofcomp {

namespace {

// ------------------------------------------------------------ utilities ---

std::string ltrim(std::string s) {
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), [](unsigned char c) {
            return !std::isspace(c);
          }));
  return s;
}

std::string rtrim(std::string s) {
  s.erase(std::find_if(s.rbegin(), s.rend(), [](unsigned char c) { return !std::isspace(c); })
              .base(),
          s.end());
  return s;
}

std::string trim(std::string s) { return ltrim(rtrim(std::move(s))); }

ParseError err(int line, const std::string& msg, std::vector<std::string> expected = {}) {
  return ParseError("line " + std::to_string(line) + ": " + msg, static_cast<size_t>(line),
                    std::move(expected));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cur = trim(cur);
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

struct Line {
  int no = 0;       // 1-based line number in the document
  std::string raw;  // original text (indentation preserved)
};

// Logical lines: blank lines and comment lines (first non-space char '#')
// are dropped here and never seen by the section parsers.
std::vector<Line> logical_lines(const std::string& document) {
  std::vector<Line> out;
  std::string cur;
  int no = 1;
  auto flush = [&]() {
    std::string t = trim(cur);
    if (!t.empty() && t[0] != '#') out.push_back({no, rtrim(cur)});
    cur.clear();
    ++no;
  };
  for (char c : document) {
    if (c == '\n')
      flush();
    else if (c != '\r')
      cur += c;
  }
  if (!cur.empty()) flush();
  return out;
}

// --------------------------------------------------- annotation blocks ---

// If `text` ends with a {...} block whose first entry names a known key,
// strip the block from text and return its content.  Braces that are part of
// the statement itself (set-builder notation and the like) are left alone.
std::optional<std::string> take_annotation_block(std::string& text,
                                                 const std::set<std::string>& keys) {
  if (text.empty() || text.back() != '}') return std::nullopt;
  int depth = 0;
  size_t open = std::string::npos;
  for (size_t i = text.size(); i-- > 0;) {
    if (text[i] == '}') ++depth;
    if (text[i] == '{') {
      --depth;
      if (depth == 0) {
        open = i;
        break;
      }
    }
  }
  if (open == std::string::npos) return std::nullopt;
  std::string content = text.substr(open + 1, text.size() - open - 2);
  size_t colon = content.find(':');
  if (colon == std::string::npos) return std::nullopt;
  if (!keys.count(trim(content.substr(0, colon)))) return std::nullopt;
  text = rtrim(text.substr(0, open));
  return content;
}

// "key: value; key: value" with keys restricted and unique.  Values must not
// contain ';' (use commas inside warrant text).
std::vector<std::pair<std::string, std::string>> parse_annotation(
    const std::string& content, int line, const std::set<std::string>& keys) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string part;
  std::istringstream in(content);
  while (std::getline(in, part, ';')) {
    size_t colon = part.find(':');
    if (colon == std::string::npos)
      throw err(line, "annotation entry '" + trim(part) + "' is missing ':'");
    std::string key = trim(part.substr(0, colon));
    std::string value = trim(part.substr(colon + 1));
    if (!keys.count(key)) {
      std::vector<std::string> expected(keys.begin(), keys.end());
      throw err(line, "unknown annotation key '" + key + "'", expected);
    }
    if (!seen.insert(key).second) throw err(line, "duplicate annotation key '" + key + "'");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

Warrant decode_warrant(const std::string& value) {
  if (starts_with(value, "rule:")) return {WarrantKind::RuleRef, trim(value.substr(5))};
  return {WarrantKind::Text, value};
}

std::string encode_warrant(const Warrant& w) {
  return w.kind == WarrantKind::RuleRef ? "rule:" + w.value : w.value;
}

// ----------------------------------------------------------- sections ---

constexpr const char* kSectionNames[] = {"THEOREM", "DEFINITIONS", "EXTERNAL", "RULES",
                                         "GADGETS", "STRUCTURE",   "PROOF"};

int section_index(const std::string& trimmed) {
  if (starts_with(trimmed, "THEOREM ") || trimmed == "THEOREM") return 0;
  for (int i = 1; i < 7; ++i)
    if (trimmed == kSectionNames[i]) return i;
  return -1;
}

struct Section {
  int index = -1;
  int header_line = 0;
  std::string header; // trimmed header text
  std::vector<Line> lines;
};

std::vector<Section> split_sections(const std::vector<Line>& lines) {
  std::vector<Section> out;
  for (const auto& l : lines) {
    std::string t = trim(l.raw);
    int idx = section_index(t);
    bool indented = l.raw[0] == ' ';
    if (idx >= 0 && !indented) {
      if (out.empty() && idx != 0)
        throw err(l.no, "document must start with a THEOREM section");
      if (!out.empty() && idx <= out.back().index)
        throw err(l.no, "section " + t + " is out of order (sections run THEOREM, "
                            "DEFINITIONS, EXTERNAL, RULES, GADGETS, STRUCTURE, PROOF)");
      out.push_back({idx, l.no, t, {}});
      continue;
    }
    if (out.empty()) throw err(l.no, "content before the THEOREM header");
    out.back().lines.push_back(l);
  }
  if (out.empty()) throw err(1, "empty document");
  if (out.back().index != 6) throw err(out.back().header_line, "missing PROOF section");
  return out;
}

// --------------------------------------------------------- THEOREM ---

void parse_theorem(const Section& sec, Proof& proof) {
  std::string id = trim(sec.header.size() > 7 ? sec.header.substr(7) : "");
  if (id.empty()) throw err(sec.header_line, "THEOREM header needs an id: THEOREM <id>");
  proof.id = id;
  proof.theorem.id = id;

  for (const auto& l : sec.lines) {
    std::string t = trim(l.raw);
    size_t colon = t.find(':');
    if (colon == std::string::npos) throw err(l.no, "expected 'key: value' in THEOREM section");
    std::string key = trim(t.substr(0, colon));
    std::string value = trim(t.substr(colon + 1));
    if (key == "name") {
      proof.theorem.name = value;
    } else if (key == "kind") {
      if (value == "general")
        proof.theorem.kind = TheoremKind::General;
      else if (value == "specific")
        proof.theorem.kind = TheoremKind::Specific;
      else
        throw err(l.no, "kind must be 'general' or 'specific'", {"general", "specific"});
    } else if (key == "statement") {
      try {
        proof.theorem.statement = parse_logic(value);
      } catch (const ParseError& e) {
        throw err(l.no, std::string("in statement: ") + e.what());
      }
    } else if (key == "statement-text") {
      proof.theorem.statement_text = value;
    } else if (starts_with(key, "hypothesis ") || starts_with(key, "conclusion ")) {
      bool is_hyp = key[0] == 'h';
      std::string atom = trim(key.substr(key.find(' ') + 1));
      if (atom.empty() || atom.find(' ') != std::string::npos)
        throw err(l.no, "expected a single atom label after '" +
                            std::string(is_hyp ? "hypothesis" : "conclusion") + "'");
      std::string text = value;
      std::string definition;
      if (auto block = take_annotation_block(text, {"definition"})) {
        auto entries = parse_annotation(*block, l.no, {"definition"});
        definition = entries.empty() ? "" : entries[0].second;
      }
      if (is_hyp) {
        proof.theorem.hypotheses.push_back({atom, text, definition});
      } else {
        proof.theorem.conclusion_atom = atom;
        proof.theorem.conclusion_text = text;
        proof.theorem.conclusion_definition = definition;
      }
    } else {
      throw err(l.no, "unknown THEOREM key '" + key + "'",
                {"name", "kind", "statement", "statement-text", "hypothesis <atom>",
                 "conclusion <atom>"});
    }
  }
}

// ------------------------------------------------------ DEFINITIONS ---

// define <id> "<term>": <text>   (+ indented: notation: / statement:)
std::pair<std::string, std::string> take_id_and_quoted(const std::string& rest, int line) {
  size_t sp = rest.find(' ');
  if (sp == std::string::npos) throw err(line, "expected: <id> \"<term>\"");
  std::string id = rest.substr(0, sp);
  std::string tail = ltrim(rest.substr(sp));
  if (tail.empty() || tail[0] != '"') throw err(line, "expected a quoted term after the id");
  size_t close = tail.find('"', 1);
  if (close == std::string::npos) throw err(line, "unterminated quote");
  return {id, tail.substr(1, close - 1)};
}

void parse_definitions(const Section& sec, Proof& proof) {
  for (const auto& l : sec.lines) {
    bool indented = l.raw[0] == ' ';
    std::string t = trim(l.raw);
    if (indented) {
      if (proof.definitions.empty())
        throw err(l.no, "continuation line without a preceding define");
      Definition& d = proof.definitions.back();
      if (starts_with(t, "notation:")) {
        d.notation = trim(t.substr(9));
      } else if (starts_with(t, "statement:")) {
        try {
          d.statement = parse_logic(trim(t.substr(10)));
        } catch (const ParseError& e) {
          throw err(l.no, std::string("in definition statement: ") + e.what());
        }
      } else {
        throw err(l.no, "unknown definition continuation", {"notation:", "statement:"});
      }
      continue;
    }
    if (!starts_with(t, "define "))
      throw err(l.no, "expected 'define <id> \"<term>\": <text>'");
    std::string rest = t.substr(7);
    size_t colon = rest.find(':', rest.find('"') == std::string::npos
                                       ? 0
                                       : rest.find('"', rest.find('"') + 1));
    if (colon == std::string::npos) throw err(l.no, "expected ':' after the quoted term");
    auto [id, term] = take_id_and_quoted(trim(rest.substr(0, colon)), l.no);
    Definition d;
    d.id = id;
    d.term = term;
    d.text = trim(rest.substr(colon + 1));
    proof.definitions.push_back(std::move(d));
  }
}

// ---------------------------------------------------------- EXTERNAL ---

void parse_external(const Section& sec, Proof& proof) {
  for (const auto& l : sec.lines) {
    std::string t = trim(l.raw);
    if (!starts_with(t, "external "))
      throw err(l.no, "expected 'external <id> \"<name>\": <text>'");
    std::string rest = t.substr(9);
    size_t firstq = rest.find('"');
    if (firstq == std::string::npos) throw err(l.no, "expected a quoted name");
    size_t secondq = rest.find('"', firstq + 1);
    if (secondq == std::string::npos) throw err(l.no, "unterminated quote");
    size_t colon = rest.find(':', secondq);
    if (colon == std::string::npos) throw err(l.no, "expected ':' after the quoted name");
    auto [id, name] = take_id_and_quoted(trim(rest.substr(0, colon)), l.no);
    proof.externals.push_back({id, name, trim(rest.substr(colon + 1))});
  }
}

// ------------------------------------------------------------- RULES ---

void parse_rules(const Section& sec, Proof& proof) {
  for (const auto& l : sec.lines) {
    bool indented = l.raw[0] == ' ';
    std::string t = trim(l.raw);
    if (indented) {
      if (proof.rules.empty()) throw err(l.no, "continuation line without a preceding rule");
      if (!starts_with(t, "description:"))
        throw err(l.no, "unknown rule continuation", {"description:"});
      proof.rules.back().description = trim(t.substr(12));
      continue;
    }
    bool is_rewrite = starts_with(t, "rewrite ");
    if (!is_rewrite && !starts_with(t, "rule "))
      throw err(l.no, "expected 'rule <id>: <description>' or 'rewrite <id>: <pattern> ~> "
                      "<replacement>'");
    std::string rest = t.substr(is_rewrite ? 8 : 5);
    size_t colon = rest.find(':');
    if (colon == std::string::npos) throw err(l.no, "expected ':' after the rule id");
    RewriteRuleDecl r;
    r.id = trim(rest.substr(0, colon));
    if (r.id.empty() || r.id.find(' ') != std::string::npos)
      throw err(l.no, "rule id must be a single token");
    std::string value = trim(rest.substr(colon + 1));
    if (is_rewrite) {
      r.kind = RuleKind::Rewrite;
      size_t arrow = value.find("~>");
      if (arrow == std::string::npos)
        throw err(l.no, "a rewrite needs '<pattern> ~> <replacement>'");
      r.pattern_text = trim(value.substr(0, arrow));
      r.replacement_text = trim(value.substr(arrow + 2));
      try {
        parse_expr(r.pattern_text);
        parse_expr(r.replacement_text);
      } catch (const ParseError& e) {
        throw err(l.no, std::string("in rewrite rule: ") + e.what());
      }
    } else {
      r.kind = RuleKind::Justification;
      r.description = value;
    }
    proof.rules.push_back(std::move(r));
  }
}

// ----------------------------------------------------------- GADGETS ---

void parse_gadgets(const Section& sec, Proof& proof) {
  for (const auto& l : sec.lines) {
    std::string t = trim(l.raw);
    if (!starts_with(t, "gadget "))
      throw err(l.no, "expected 'gadget <id> <kind> statement=<n>: <description>'");
    std::istringstream in(t.substr(7));
    Gadget g;
    std::string kind_word, stmt_word;
    if (!(in >> g.id >> kind_word >> stmt_word)) throw err(l.no, "malformed gadget line");
    if (kind_word == "constructed-object")
      g.kind = GadgetKind::ConstructedObject;
    else if (kind_word == "facilitator-object")
      g.kind = GadgetKind::FacilitatorObject;
    else
      throw err(l.no, "gadget kind must be constructed-object or facilitator-object",
                {"constructed-object", "facilitator-object"});
    if (!starts_with(stmt_word, "statement="))
      throw err(l.no, "expected statement=<n>", {"statement=<n>"});
    std::string num = stmt_word.substr(10);
    if (!num.empty() && num.back() == ':') num.pop_back();
    try {
      g.construction_statement = std::stoi(num);
    } catch (const std::exception&) {
      throw err(l.no, "statement= needs a number");
    }
    size_t colon = t.find(':', t.find("statement="));
    g.description = colon == std::string::npos ? "" : trim(t.substr(colon + 1));
    proof.gadgets.push_back(std::move(g));
  }
}

// --------------------------------------------------------- STRUCTURE ---

Span parse_span(const std::string& s, int line) {
  size_t dash = s.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= s.size())
    throw err(line, "expected a span like 3-8, got '" + s + "'");
  try {
    return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
  } catch (const std::exception&) {
    throw err(line, "expected a span like 3-8, got '" + s + "'");
  }
}

// Space-separated tokens, but quoted stretches stay inside one token.
std::vector<std::string> structure_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : s) {
    if (c == '"') {
      quoted = !quoted;
      cur += c;
    } else if (c == ' ' && !quoted) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string unquote(const std::string& s, int line) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    throw err(line, "expected a quoted value, got '" + s + "'");
  return s.substr(1, s.size() - 2);
}

StructureNode parse_structure_line(const std::string& trimmed, int line) {
  auto tokens = structure_tokens(trimmed);
  size_t i = 0;
  StructureNode node;
  if (i < tokens.size() && tokens[i] == "case") {
    ++i;
    if (i >= tokens.size()) throw err(line, "case needs a quoted label");
    node.case_label = unquote(tokens[i++], line);
  }
  if (i >= tokens.size()) throw err(line, "expected a structure kind");
  auto kind = kind_from_name(tokens[i]);
  if (!kind)
    throw err(line, "unknown structure kind '" + tokens[i] + "'",
              {"direct", "definition-chasing", "iff", "cases", "induction", "contrapositive",
               "contradiction", "equivalence-chain"});
  node.kind = *kind;
  ++i;
  if (i >= tokens.size()) throw err(line, "expected a statement span after the kind");
  node.span = parse_span(tokens[i++], line);
  for (; i < tokens.size(); ++i) {
    size_t eq = tokens[i].find('=');
    if (eq == std::string::npos) throw err(line, "expected key=value, got '" + tokens[i] + "'");
    std::string key = tokens[i].substr(0, eq);
    std::string value = tokens[i].substr(eq + 1);
    if (key == "direction") {
      node.direction = value;
    } else if (key == "contradicts") {
      try {
        node.contradicts = std::stoi(value);
      } catch (const std::exception&) {
        throw err(line, "contradicts= needs a statement number");
      }
    } else if (key == "exhaustive") {
      node.exhaustiveness = unquote(value, line);
    } else if (key == "hypothesis") {
      node.induction_hypothesis = parse_span(value, line);
    } else if (key == "base") {
      node.base_case = parse_span(value, line);
    } else if (key == "step") {
      node.induction_step = parse_span(value, line);
    } else if (key == "conclusion") {
      node.induction_conclusion = parse_span(value, line);
    } else {
      throw err(line, "unknown structure key '" + key + "'",
                {"direction", "contradicts", "exhaustive", "hypothesis", "base", "step",
                 "conclusion"});
    }
  }
  return node;
}

StructureNode assemble(const std::vector<std::pair<int, StructureNode>>& flat, size_t& i,
                       int depth) {
  StructureNode node = flat[i].second;
  ++i;
  while (i < flat.size() && flat[i].first == depth + 1) node.children.push_back(assemble(flat, i, depth + 1));
  return node;
}

void parse_structure(const Section& sec, Proof& proof) {
  std::vector<std::pair<int, StructureNode>> flat;
  for (const auto& l : sec.lines) {
    size_t spaces = 0;
    while (spaces < l.raw.size() && l.raw[spaces] == ' ') ++spaces;
    if (spaces % 2 != 0) throw err(l.no, "structure indentation must be 2 spaces per level");
    int depth = static_cast<int>(spaces / 2);
    if (flat.empty() && depth != 0) throw err(l.no, "the root structure node must not be indented");
    if (!flat.empty() && depth > flat.back().first + 1)
      throw err(l.no, "structure line is indented too deep");
    if (!flat.empty() && depth == 0)
      throw err(l.no, "only one root structure node is allowed");
    flat.emplace_back(depth, parse_structure_line(trim(l.raw), l.no));
  }
  if (flat.empty()) return;
  size_t i = 0;
  proof.structure = assemble(flat, i, 0);
}

// -------------------------------------------------------------- PROOF ---

const std::set<std::string>& statement_keys() {
  static const std::set<std::string> keys = {"uses",  "warrant", "backing",
                                             "roles", "error",   "omitted-warrant",
                                             "omitted-backing"};
  return keys;
}

void parse_statements(const Section& sec, Proof& proof) {
  for (const auto& l : sec.lines) {
    std::string t = trim(l.raw);
    size_t dot = t.find('.');
    if (dot == std::string::npos || dot == 0)
      throw err(l.no, "expected '<n>. <statement text>'");
    ProofStatement s;
    try {
      size_t used = 0;
      s.number = std::stoi(t, &used);
      if (used != dot) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw err(l.no, "expected a statement number before '.'");
    }
    std::string text = ltrim(t.substr(dot + 1));
    if (auto block = take_annotation_block(text, statement_keys())) {
      for (auto& [key, value] : parse_annotation(*block, l.no, statement_keys())) {
        if (key == "uses")
          s.uses_hypotheses = split_list(value);
        else if (key == "warrant")
          s.warrant = decode_warrant(value);
        else if (key == "backing")
          s.backing = value;
        else if (key == "roles")
          s.roles = split_list(value);
        else if (key == "error") {
          s.is_error_line = true;
          s.error_explanation = value;
        } else if (key == "omitted-warrant")
          s.omitted_warrant = decode_warrant(value);
        else if (key == "omitted-backing")
          s.omitted_backing = value;
      }
    }
    s.text = text;

    // inline `...` spans must parse as expressions or equations
    size_t pos = 0;
    while ((pos = text.find('`', pos)) != std::string::npos) {
      size_t close = text.find('`', pos + 1);
      if (close == std::string::npos) throw err(l.no, "unbalanced backtick");
      std::string span = text.substr(pos + 1, close - pos - 1);
      try {
        s.inline_math.push_back(parse_answer(span));
      } catch (const ParseError& e) {
        throw err(l.no, "in inline expression `" + span + "`: " + e.what());
      }
      pos = close + 1;
    }

    int expected = static_cast<int>(proof.statements.size()) + 1;
    if (s.number != expected)
      throw err(l.no, "statements must be numbered consecutively from 1; expected " +
                          std::to_string(expected) + ", got " + std::to_string(s.number));
    proof.statements.push_back(std::move(s));
  }
  if (proof.statements.empty())
    throw err(sec.header_line, "PROOF section has no statements");
}

} // namespace

Proof parse_proof(const std::string& document) {
  Proof proof;
  auto sections = split_sections(logical_lines(document));
  for (const auto& sec : sections) {
    switch (sec.index) {
      case 0: parse_theorem(sec, proof); break;
      case 1: parse_definitions(sec, proof); break;
      case 2: parse_external(sec, proof); break;
      case 3: parse_rules(sec, proof); break;
      case 4: parse_gadgets(sec, proof); break;
      case 5: parse_structure(sec, proof); break;
      case 6: parse_statements(sec, proof); break;
    }
  }
  auto refs = unresolved_references(proof);
  if (!refs.empty()) throw ReferenceError(refs.front().message);
  return proof;
}

// ------------------------------------------------------------ render ---

namespace {

void collect_banners(const StructureNode& n, std::map<int, std::vector<std::string>>& out) {
  std::string banner = "# ";
  if (!n.case_label.empty()) banner += "case \"" + n.case_label + "\" ";
  banner += kind_name(n.kind) + " " + std::to_string(n.span.first) + "-" +
            std::to_string(n.span.last);
  out[n.span.first].push_back(banner);
  for (const auto& c : n.children) collect_banners(c, out);
}

std::string statement_annotation(const ProofStatement& s) {
  std::vector<std::string> parts;
  auto join = [](const std::vector<std::string>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) out += ",";
      out += xs[i];
    }
    return out;
  };
  if (!s.uses_hypotheses.empty()) parts.push_back("uses: " + join(s.uses_hypotheses));
  if (s.warrant.kind != WarrantKind::None)
    parts.push_back("warrant: " + encode_warrant(s.warrant));
  if (!s.backing.empty()) parts.push_back("backing: " + s.backing);
  if (!s.roles.empty()) parts.push_back("roles: " + join(s.roles));
  if (s.is_error_line) parts.push_back("error: " + s.error_explanation);
  if (s.omitted_warrant.kind != WarrantKind::None)
    parts.push_back("omitted-warrant: " + encode_warrant(s.omitted_warrant));
  if (!s.omitted_backing.empty()) parts.push_back("omitted-backing: " + s.omitted_backing);
  if (parts.empty()) return "";
  std::string out = " {";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "; ";
    out += parts[i];
  }
  out += "}";
  return out;
}

} // namespace

std::string render_numbered(const Proof& proof, RenderStyle style) {
  std::string out;
  out += "THEOREM " + proof.theorem.id + "\n";
  if (!proof.theorem.name.empty()) out += "name: " + proof.theorem.name + "\n";
  out += std::string("kind: ") +
         (proof.theorem.kind == TheoremKind::General ? "general" : "specific") + "\n";
  if (proof.theorem.statement) out += "statement: " + to_text(proof.theorem.statement) + "\n";
  if (!proof.theorem.statement_text.empty())
    out += "statement-text: " + proof.theorem.statement_text + "\n";
  for (const auto& h : proof.theorem.hypotheses) {
    out += "hypothesis " + h.atom + ": " + h.text;
    if (!h.definition.empty()) out += " {definition: " + h.definition + "}";
    out += "\n";
  }
  if (!proof.theorem.conclusion_atom.empty()) {
    out += "conclusion " + proof.theorem.conclusion_atom + ": " + proof.theorem.conclusion_text;
    if (!proof.theorem.conclusion_definition.empty())
      out += " {definition: " + proof.theorem.conclusion_definition + "}";
    out += "\n";
  }

  if (!proof.definitions.empty()) {
    out += "\nDEFINITIONS\n";
    for (const auto& d : proof.definitions) {
      out += "define " + d.id + " \"" + d.term + "\": " + d.text + "\n";
      if (!d.notation.empty()) out += "  notation: " + d.notation + "\n";
      if (d.statement) out += "  statement: " + to_text(d.statement) + "\n";
    }
  }
  if (!proof.externals.empty()) {
    out += "\nEXTERNAL\n";
    for (const auto& e : proof.externals)
      out += "external " + e.id + " \"" + e.name + "\": " + e.text + "\n";
  }
  if (!proof.rules.empty()) {
    out += "\nRULES\n";
    for (const auto& r : proof.rules) {
      if (r.kind == RuleKind::Rewrite) {
        out += "rewrite " + r.id + ": " + r.pattern_text + " ~> " + r.replacement_text + "\n";
        if (!r.description.empty()) out += "  description: " + r.description + "\n";
      } else {
        out += "rule " + r.id + ": " + r.description + "\n";
      }
    }
  }
  if (!proof.gadgets.empty()) {
    out += "\nGADGETS\n";
    for (const auto& g : proof.gadgets) {
      out += "gadget " + g.id + " " +
             (g.kind == GadgetKind::ConstructedObject ? "constructed-object"
                                                      : "facilitator-object") +
             " statement=" + std::to_string(g.construction_statement) + ": " + g.description +
             "\n";
    }
  }
  if (proof.structure) {
    out += "\nSTRUCTURE\n";
    out += structure_outline(proof);
  }

  out += "\nPROOF\n";
  std::map<int, std::vector<std::string>> banners;
  if (style == RenderStyle::Structured && proof.structure)
    collect_banners(*proof.structure, banners);
  for (const auto& s : proof.statements) {
    auto b = banners.find(s.number);
    if (b != banners.end())
      for (const auto& banner : b->second) out += banner + "\n";
    out += std::to_string(s.number) + ". " + s.text + statement_annotation(s) + "\n";
  }
  return out;
}

std::string render_display(const Proof& proof) {
  std::string out = "Theorem";
  if (!proof.theorem.name.empty()) out += " (" + proof.theorem.name + ")";
  out += ".";
  std::string stmt = proof.theorem.statement_text;
  if (stmt.empty() && proof.theorem.statement) stmt = pretty(proof.theorem.statement);
  if (!stmt.empty()) out += " " + stmt;
  out += "\n\nProof.\n";
  for (const auto& s : proof.statements) {
    std::string text = s.text;
    text.erase(std::remove(text.begin(), text.end(), '`'), text.end());
    out += std::to_string(s.number) + ". " + text + "\n";
  }
  return out;
}

Proof omit_warrant(const Proof& proof, int statement_number) {
  Proof out = proof;
  for (auto& s : out.statements) {
    if (s.number != statement_number) continue;
    bool visible = s.warrant.kind != WarrantKind::None || !s.backing.empty();
    if (!visible)
      throw NoWarrantPresent("statement " + std::to_string(statement_number) +
                             " has no visible warrant or backing to omit");
    s.omitted_warrant = s.warrant;
    s.omitted_backing = s.backing;
    s.warrant = {};
    s.backing.clear();
    return out;
  }
  throw ReferenceError("no statement numbered " + std::to_string(statement_number));
}

} // namespace proofcomp

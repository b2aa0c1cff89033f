#include "surface/idl_catalog.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <json.hpp>

#include "surface/csv.hpp"
#include "surface/error.hpp"
#include "surface/text.hpp"

namespace surface::idl {

std::string_view to_string(MemberKind kind) {
  switch (kind) {
    case MemberKind::method: return "method";
    case MemberKind::attribute_get: return "attribute_get";
    case MemberKind::attribute_set: return "attribute_set";
    case MemberKind::constructor: return "constructor";
  }
  return "method";
}

MemberKind member_kind_from_string(std::string_view s) {
  if (s == "method") return MemberKind::method;
  if (s == "attribute_get") return MemberKind::attribute_get;
  if (s == "attribute_set") return MemberKind::attribute_set;
  if (s == "constructor") return MemberKind::constructor;
  throw ValidationError(fmt::format("unknown member kind '{}'", s));
}

std::string to_string(const FeatureId& feature) {
  return fmt::format("{}.{}[{}]", feature.interface_name, feature.member_name, to_string(feature.kind));
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class TokenType { identifier, number, string, punct, end };

struct Token {
  TokenType type = TokenType::end;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space_and_comments();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= text_.size()) {
        tokens.push_back(tok);
        return tokens;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tok.type = TokenType::identifier;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          tok.text.push_back(advance());
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        tok.type = TokenType::number;
        tok.text.push_back(advance());
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
          tok.text.push_back(advance());
        }
      } else if (c == '"') {
        tok.type = TokenType::string;
        tok.text.push_back(advance());
        while (pos_ < text_.size() && text_[pos_] != '"') {
          if (text_[pos_] == '\n') throw ParseError("unterminated string literal", tok.line, tok.column);
          tok.text.push_back(advance());
        }
        if (pos_ >= text_.size()) throw ParseError("unterminated string literal", tok.line, tok.column);
        tok.text.push_back(advance());
      } else if (text_.substr(pos_, 3) == "...") {
        tok.type = TokenType::punct;
        tok.text = "...";
        advance();
        advance();
        advance();
      } else if (std::string_view("{}()[]<>;:,?=-.*").find(c) != std::string_view::npos) {
        tok.type = TokenType::punct;
        tok.text.push_back(advance());
      } else {
        throw ParseError(fmt::format("unexpected character '{}'", c), line_, column_);
      }
      tokens.push_back(std::move(tok));
    }
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (text_.substr(pos_, 2) == "//") {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (text_.substr(pos_, 2) == "/*") {
        const auto line = line_;
        const auto column = column_;
        advance();
        advance();
        while (pos_ < text_.size() && text_.substr(pos_, 2) != "*/") advance();
        if (pos_ >= text_.size()) throw ParseError("unterminated comment", line, column);
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

constexpr std::array kUnsupportedMemberKeywords = {
    "static",   "getter",  "setter",  "deleter",  "stringifier", "const",     "inherit",
    "iterable", "maplike", "setlike", "legacycaller", "async",   "serializer", "jsonifier"};

bool word_like(const Token& t) {
  return t.type == TokenType::identifier || t.type == TokenType::number || t.type == TokenType::string;
}

// Joins tokens with single spaces only where the grammar needs separation.
std::string join_tokens(std::span<const Token> tokens) {
  std::string out;
  const Token* prev = nullptr;
  for (const auto& t : tokens) {
    if (prev) {
      const bool space = prev->text == "," || prev->text == "=" || t.text == "=" ||
                         (word_like(t) && (word_like(*prev) || prev->text == "..." || prev->text == "]" ||
                                           prev->text == "?" || prev->text == ">" || prev->text == ")"));
      if (space) out.push_back(' ');
    }
    out += t.text;
    prev = &t;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::vector<InterfaceDefinition> run() {
    std::vector<InterfaceDefinition> out;
    while (peek().type != TokenType::end) {
      skip_extended_attributes();
      if (peek().type == TokenType::end) {
        throw error(peek(), "extended attributes must precede a definition");
      }
      out.push_back(definition());
    }
    return out;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  static ParseError error(const Token& t, const std::string& msg) {
    return ParseError(msg, t.line, t.column);
  }
  static std::string describe(const Token& t) {
    return t.type == TokenType::end ? std::string("end of input") : fmt::format("'{}'", t.text);
  }
  void expect_punct(std::string_view p) {
    const Token& t = next();
    if (t.type != TokenType::punct || t.text != p) {
      throw error(t, fmt::format("expected '{}', found {}", p, describe(t)));
    }
  }
  std::string expect_identifier(std::string_view what) {
    const Token& t = next();
    if (t.type != TokenType::identifier) {
      throw error(t, fmt::format("expected {}, found {}", what, describe(t)));
    }
    return t.text;
  }

  void skip_extended_attributes() {
    while (peek().type == TokenType::punct && peek().text == "[") {
      const Token& open = next();
      int depth = 1;
      while (depth > 0) {
        const Token& t = next();
        if (t.type == TokenType::end) throw error(open, "unterminated extended attribute list");
        if (t.type == TokenType::punct && t.text == "[") ++depth;
        if (t.type == TokenType::punct && t.text == "]") --depth;
      }
    }
  }

  InterfaceDefinition definition() {
    InterfaceDefinition def;
    const Token& head = next();
    if (head.type != TokenType::identifier) {
      throw error(head, fmt::format("expected 'interface', found {}", describe(head)));
    }
    if (head.text == "partial") {
      def.is_partial = true;
      const Token& kw = next();
      if (kw.type != TokenType::identifier || kw.text != "interface") {
        throw error(kw, kw.type == TokenType::identifier ? fmt::format("unknown keyword '{}'", kw.text)
                                                         : fmt::format("expected 'interface', found {}", describe(kw)));
      }
    } else if (head.text != "interface") {
      throw error(head, fmt::format("unknown keyword '{}'", head.text));
    }
    def.name = expect_identifier("interface name");
    if (peek().type == TokenType::punct && peek().text == ":") {
      const Token& colon = next();
      if (def.is_partial) throw error(colon, "partial interface cannot declare inheritance");
      def.parent = expect_identifier("parent interface name");
    }
    expect_punct("{");
    std::vector<std::pair<std::string, const Token*>> seen;
    while (!(peek().type == TokenType::punct && peek().text == "}")) {
      if (peek().type == TokenType::end) throw error(peek(), "unterminated interface body");
      skip_extended_attributes();
      const Token& start = peek();
      const std::size_t before = def.members.size();
      member(def);
      const auto& name = def.members[before].name;
      for (const auto& [other, _] : seen) {
        if (other == name) {
          throw error(start, fmt::format("duplicate member '{}' in interface '{}'", name, def.name));
        }
      }
      seen.emplace_back(name, &start);
    }
    expect_punct("}");
    expect_punct(";");
    return def;
  }

  void member(InterfaceDefinition& def) {
    const Token& first = peek();
    if (first.type == TokenType::identifier) {
      for (auto kw : kUnsupportedMemberKeywords) {
        if (first.text == kw) throw error(first, fmt::format("unknown keyword '{}'", first.text));
      }
      if (first.text == "interface" || first.text == "partial") {
        throw error(first, fmt::format("unexpected keyword '{}' inside interface body", first.text));
      }
    }
    if (first.type == TokenType::identifier && (first.text == "readonly" || first.text == "attribute")) {
      attribute(def);
    } else if (first.type == TokenType::identifier && first.text == "constructor" &&
               peek(1).type == TokenType::punct && peek(1).text == "(") {
      next();
      Member m;
      m.kind = MemberKind::constructor;
      m.name = "constructor";
      m.arguments = argument_list();
      expect_punct(";");
      def.members.push_back(std::move(m));
    } else {
      operation(def);
    }
  }

  void attribute(InterfaceDefinition& def) {
    bool readonly = false;
    if (peek().text == "readonly") {
      next();
      readonly = true;
    }
    const Token& kw = next();
    if (kw.type != TokenType::identifier || kw.text != "attribute") {
      throw error(kw, fmt::format("expected 'attribute', found {}", describe(kw)));
    }
    std::vector<Token> span;
    while (!(peek().type == TokenType::punct && peek().text == ";")) {
      if (peek().type == TokenType::end || (peek().type == TokenType::punct && peek().text == "}")) {
        throw error(peek(), fmt::format("expected ';', found {}", describe(peek())));
      }
      span.push_back(next());
    }
    const Token& semi = next();
    if (span.size() < 2 || span.back().type != TokenType::identifier) {
      throw error(semi, "attribute requires a type and a name");
    }
    Member get;
    get.kind = MemberKind::attribute_get;
    get.name = span.back().text;
    get.is_readonly = readonly;
    get.type = join_tokens(std::span(span).first(span.size() - 1));
    def.members.push_back(get);
    if (!readonly) {
      Member set = get;
      set.kind = MemberKind::attribute_set;
      def.members.push_back(std::move(set));
    }
  }

  void operation(InterfaceDefinition& def) {
    std::vector<Token> span;
    while (!(peek().type == TokenType::punct && peek().text == "(")) {
      const Token& t = peek();
      if (t.type == TokenType::end || (t.type == TokenType::punct && (t.text == ";" || t.text == "}"))) {
        throw error(t, fmt::format("expected '(' after operation name, found {}", describe(t)));
      }
      span.push_back(next());
    }
    if (span.size() < 2 || span.back().type != TokenType::identifier) {
      throw error(peek(), "operation requires a return type and a name");
    }
    Member m;
    m.kind = MemberKind::method;
    m.name = span.back().text;
    m.type = join_tokens(std::span(span).first(span.size() - 1));
    m.arguments = argument_list();
    expect_punct(";");
    def.members.push_back(std::move(m));
  }

  std::string argument_list() {
    const Token& open = peek();
    expect_punct("(");
    std::vector<Token> span;
    int depth = 1;
    while (true) {
      const Token& t = next();
      if (t.type == TokenType::end) throw error(open, "unterminated argument list");
      if (t.type == TokenType::punct && t.text == "(") ++depth;
      if (t.type == TokenType::punct && t.text == ")" && --depth == 0) break;
      span.push_back(t);
    }
    return join_tokens(span);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Shape of a declaration, used to detect conflicting partial merges.
struct DeclShape {
  MemberKind kind;
  bool readonly;
  bool operator==(const DeclShape&) const = default;
};

}  // namespace

std::vector<InterfaceDefinition> parse_webidl(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

std::string serialize_webidl(std::span<const InterfaceDefinition> definitions) {
  std::string out;
  for (std::size_t i = 0; i < definitions.size(); ++i) {
    const auto& def = definitions[i];
    if (i) out += "\n";
    out += def.is_partial ? "partial interface " : "interface ";
    out += def.name;
    if (def.parent) out += " : " + *def.parent;
    out += " {\n";
    for (const auto& m : def.members) {
      switch (m.kind) {
        case MemberKind::attribute_get:
          out += fmt::format("  {}attribute {} {};\n", m.is_readonly ? "readonly " : "", m.type, m.name);
          break;
        case MemberKind::attribute_set:
          break;
        case MemberKind::constructor:
          out += fmt::format("  constructor({});\n", m.arguments);
          break;
        case MemberKind::method:
          out += fmt::format("  {} {}({});\n", m.type, m.name, m.arguments);
          break;
      }
    }
    out += "};\n";
  }
  return out;
}

StandardMapping parse_standard_mapping(std::string_view csv_text) {
  const auto table = CsvTable::parse(csv_text, "standard mapping");
  const auto c_iface = table.column("interface");
  const auto c_name = table.column("standard_name");
  const auto c_abbrev = table.column("abbreviation");
  StandardMapping mapping;
  std::map<std::string, std::string, std::less<>> name_of_abbrev;
  std::map<std::string, std::string, std::less<>> abbrev_of_name;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    const auto iface = std::string(text::trim(row[c_iface]));
    StandardId id{std::string(text::trim(row[c_name])), std::string(text::trim(row[c_abbrev]))};
    const auto line = table.line_of(r);
    if (!text::is_identifier(iface)) {
      throw ParseError(fmt::format("standard mapping: invalid interface name '{}'", iface), line, 1);
    }
    if (id.name.empty() || id.abbreviation.empty()) {
      throw ParseError("standard mapping: empty standard name or abbreviation", line, 1);
    }
    if (auto it = name_of_abbrev.find(id.abbreviation); it != name_of_abbrev.end() && it->second != id.name) {
      throw ParseError(fmt::format("standard mapping: abbreviation '{}' used for '{}' and '{}'", id.abbreviation,
                                   it->second, id.name),
                       line, 1);
    }
    if (auto it = abbrev_of_name.find(id.name); it != abbrev_of_name.end() && it->second != id.abbreviation) {
      throw ParseError(fmt::format("standard mapping: standard '{}' has abbreviations '{}' and '{}'", id.name,
                                   it->second, id.abbreviation),
                       line, 1);
    }
    name_of_abbrev[id.abbreviation] = id.name;
    abbrev_of_name[id.name] = id.abbreviation;
    if (!mapping.emplace(iface, std::move(id)).second) {
      throw ParseError(fmt::format("standard mapping: interface '{}' listed twice", iface), line, 1);
    }
  }
  return mapping;
}

FeatureCatalog FeatureCatalog::from_parts(std::vector<StandardId> standards,
                                          std::map<FeatureId, std::string> assignments) {
  std::sort(standards.begin(), standards.end(),
            [](const StandardId& a, const StandardId& b) { return a.abbreviation < b.abbreviation; });
  for (std::size_t i = 0; i < standards.size(); ++i) {
    if (standards[i].abbreviation.empty() || standards[i].name.empty()) {
      throw ValidationError("catalog: standard with empty name or abbreviation");
    }
    if (i && standards[i].abbreviation == standards[i - 1].abbreviation) {
      throw ValidationError(fmt::format("catalog: duplicate abbreviation '{}'", standards[i].abbreviation));
    }
  }
  FeatureCatalog catalog;
  catalog.standards_ = std::move(standards);
  for (const auto& [feature, abbrev] : assignments) {
    if (!text::is_identifier(feature.interface_name) || !text::is_identifier(feature.member_name)) {
      throw ValidationError(fmt::format("catalog: invalid feature identifier {}", to_string(feature)));
    }
    if (!catalog.has_standard(abbrev)) {
      throw ValidationError(
          fmt::format("catalog: feature {} assigned to unknown standard '{}'", to_string(feature), abbrev));
    }
  }
  catalog.assignments_ = std::move(assignments);
  return catalog;
}

std::vector<std::string> FeatureCatalog::abbreviations() const {
  std::vector<std::string> out;
  out.reserve(standards_.size());
  for (const auto& s : standards_) out.push_back(s.abbreviation);
  return out;
}

bool FeatureCatalog::has_standard(std::string_view abbreviation) const {
  auto it = std::lower_bound(standards_.begin(), standards_.end(), abbreviation,
                             [](const StandardId& s, std::string_view a) { return s.abbreviation < a; });
  return it != standards_.end() && it->abbreviation == abbreviation;
}

const StandardId& FeatureCatalog::standard(std::string_view abbreviation) const {
  auto it = std::lower_bound(standards_.begin(), standards_.end(), abbreviation,
                             [](const StandardId& s, std::string_view a) { return s.abbreviation < a; });
  if (it == standards_.end() || it->abbreviation != abbreviation) {
    throw ValidationError(fmt::format("unknown standard '{}'", abbreviation));
  }
  return *it;
}

const std::string& FeatureCatalog::standard_of(const FeatureId& feature) const {
  auto it = assignments_.find(feature);
  if (it == assignments_.end()) {
    throw ValidationError(fmt::format("feature {} is not in the catalog", to_string(feature)));
  }
  return it->second;
}

std::string FeatureCatalog::to_json() const {
  nlohmann::ordered_json doc;
  auto& standards = doc["standards"] = nlohmann::ordered_json::array();
  for (const auto& s : standards_) {
    standards.push_back({{"name", s.name}, {"abbrev", s.abbreviation}});
  }
  auto& features = doc["features"] = nlohmann::ordered_json::array();
  for (const auto& [f, abbrev] : assignments_) {
    features.push_back({{"interface", f.interface_name},
                        {"member", f.member_name},
                        {"kind", std::string(to_string(f.kind))},
                        {"standard_abbrev", abbrev}});
  }
  return doc.dump(2) + "\n";
}

FeatureCatalog FeatureCatalog::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(fmt::format("catalog: invalid JSON: {}", e.what()));
  }
  try {
    std::vector<StandardId> standards;
    for (const auto& s : doc.at("standards")) {
      standards.push_back({s.at("name").get<std::string>(), s.at("abbrev").get<std::string>()});
    }
    std::map<FeatureId, std::string> assignments;
    for (const auto& f : doc.at("features")) {
      FeatureId id{f.at("interface").get<std::string>(), f.at("member").get<std::string>(),
                   member_kind_from_string(f.at("kind").get<std::string>())};
      if (!assignments.emplace(id, f.at("standard_abbrev").get<std::string>()).second) {
        throw ValidationError(fmt::format("catalog: feature {} listed twice", to_string(id)));
      }
    }
    return from_parts(std::move(standards), std::move(assignments));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("catalog: schema violation: {}", e.what()));
  }
}

FeatureCatalog build_catalog(std::span<const InterfaceDefinition> definitions, const StandardMapping& mapping) {
  struct Merged {
    bool has_base = false;
    std::map<std::string, DeclShape> shapes;
    std::set<std::pair<std::string, MemberKind>> members;
  };
  std::map<std::string, Merged> merged;
  for (const auto& def : definitions) {
    auto& m = merged[def.name];
    if (!def.is_partial) {
      if (m.has_base) throw ValidationError(fmt::format("interface '{}' defined more than once", def.name));
      m.has_base = true;
    }
    // Shape of each declared name in this block: attributes report their
    // getter, since the setter follows from readonly.
    std::map<std::string, DeclShape> block;
    for (const auto& member : def.members) {
      if (member.kind == MemberKind::attribute_set) continue;
      block.emplace(member.name, DeclShape{member.kind, member.is_readonly});
    }
    for (const auto& [name, shape] : block) {
      auto [it, inserted] = m.shapes.emplace(name, shape);
      if (!inserted && !(it->second == shape)) {
        throw ValidationError(fmt::format("conflicting declarations of '{}.{}' across partial interfaces",
                                          def.name, name));
      }
    }
    for (const auto& member : def.members) m.members.emplace(member.name, member.kind);
  }

  std::map<std::string, StandardId> standards;
  for (const auto& [_, id] : mapping) {
    auto [it, inserted] = standards.emplace(id.abbreviation, id);
    if (!inserted && it->second.name != id.name) {
      throw ValidationError(fmt::format("abbreviation '{}' names two standards", id.abbreviation));
    }
  }

  std::map<FeatureId, std::string> assignments;
  for (const auto& [iface, m] : merged) {
    auto it = mapping.find(iface);
    if (it == mapping.end()) {
      throw ValidationError(fmt::format("interface '{}' has no standard assignment", iface));
    }
    for (const auto& [name, kind] : m.members) {
      assignments.emplace(FeatureId{iface, name, kind}, it->second.abbreviation);
    }
  }

  std::vector<StandardId> list;
  for (auto& [_, id] : standards) list.push_back(id);
  return FeatureCatalog::from_parts(std::move(list), std::move(assignments));
}

std::set<FeatureId> features_of(const FeatureCatalog& catalog, std::string_view abbreviation) {
  if (!catalog.has_standard(abbreviation)) {
    throw ValidationError(fmt::format("unknown standard '{}'", abbreviation));
  }
  std::set<FeatureId> out;
  for (const auto& [feature, abbrev] : catalog.assignments()) {
    if (abbrev == abbreviation) out.insert(feature);
  }
  return out;
}

}  // namespace surface::idl

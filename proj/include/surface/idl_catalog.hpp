#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace surface::idl {

enum class MemberKind { method, attribute_get, attribute_set, constructor };

std::string_view to_string(MemberKind kind);
MemberKind member_kind_from_string(std::string_view s);

// One script-visible feature: a method, an attribute getter or setter, or a
// constructor. Constructors use the member name "constructor".
struct FeatureId {
  std::string interface_name;
  std::string member_name;
  MemberKind kind = MemberKind::method;

  auto operator<=>(const FeatureId&) const = default;
};

std::string to_string(const FeatureId& feature);

struct StandardId {
  std::string name;
  std::string abbreviation;

  auto operator<=>(const StandardId&) const = default;
};

// A declared member. Attributes expand to a getter entry followed, unless
// readonly, by a setter entry; `type` and `arguments` are kept as opaque
// normalized text.
struct Member {
  MemberKind kind = MemberKind::method;
  std::string name;
  bool is_readonly = false;
  std::string type;
  std::string arguments;

  bool operator==(const Member&) const = default;
};

struct InterfaceDefinition {
  std::string name;
  std::optional<std::string> parent;
  std::vector<Member> members;
  bool is_partial = false;

  bool operator==(const InterfaceDefinition&) const = default;
};

// Parses the supported WebIDL subset: `interface` and `partial interface`
// blocks with an optional inheritance clause, attributes, operations and
// constructors. Extended attributes in brackets are skipped. Definitions are
// returned in document order with partials left unmerged.
std::vector<InterfaceDefinition> parse_webidl(std::string_view text);

// Canonical text form; parse_webidl(serialize_webidl(d)) == d.
std::string serialize_webidl(std::span<const InterfaceDefinition> definitions);

// interface name -> owning standard
using StandardMapping = std::map<std::string, StandardId, std::less<>>;

// CSV with header `interface,standard_name,abbreviation`.
StandardMapping parse_standard_mapping(std::string_view csv_text);

// Immutable feature -> standard partition.
class FeatureCatalog {
 public:
  FeatureCatalog() = default;

  // Validates that abbreviations are unique and non-empty and that every
  // assignment targets a listed standard.
  static FeatureCatalog from_parts(std::vector<StandardId> standards,
                                   std::map<FeatureId, std::string> assignments);

  static FeatureCatalog from_json(std::string_view json_text);
  std::string to_json() const;

  // Sorted by abbreviation.
  const std::vector<StandardId>& standards() const { return standards_; }
  std::vector<std::string> abbreviations() const;
  const std::map<FeatureId, std::string>& assignments() const { return assignments_; }

  bool has_standard(std::string_view abbreviation) const;
  const StandardId& standard(std::string_view abbreviation) const;
  const std::string& standard_of(const FeatureId& feature) const;

 private:
  std::vector<StandardId> standards_;
  std::map<FeatureId, std::string> assignments_;
};

// Merges partial definitions into their base interface and assigns every
// member to the interface's standard. Every standard in `mapping` appears in
// the catalog even when none of its interfaces were defined.
FeatureCatalog build_catalog(std::span<const InterfaceDefinition> definitions,
                             const StandardMapping& mapping);

// Preimage of `abbreviation` under the catalog's assignment.
std::set<FeatureId> features_of(const FeatureCatalog& catalog, std::string_view abbreviation);

}  // namespace surface::idl

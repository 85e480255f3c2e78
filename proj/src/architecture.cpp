#include "lisa/architecture.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace lisa {

ArchConfig ArchConfig::of(ArchKind kind) {
  switch (kind) {
    case ArchKind::DBO:
      return {kind, 0.0, false};
    case ArchKind::RO:
      return {kind, 0.0, true};
    case ArchKind::MO:
      return {kind, kDefaultMappingRate, false};
    case ArchKind::RM:
      return {kind, kDefaultMappingRate, true};
  }
  return {};
}

bool is_consistent(const ArchConfig& arch) {
  if (arch.mu < 0.0) return false;
  switch (arch.kind) {
    case ArchKind::DBO:
      return arch.mu == 0.0 && !arch.relations_allowed;
    case ArchKind::RO:
      return arch.mu == 0.0 && arch.relations_allowed;
    case ArchKind::MO:
      return arch.mu > 0.0 && !arch.relations_allowed;
    case ArchKind::RM:
      return arch.mu > 0.0 && arch.relations_allowed;
  }
  return false;
}

std::string_view to_string(ArchKind kind) {
  switch (kind) {
    case ArchKind::DBO:
      return "DBO";
    case ArchKind::RO:
      return "RO";
    case ArchKind::MO:
      return "MO";
    case ArchKind::RM:
      return "R&M";
  }
  return "?";
}

std::optional<ArchKind> parse_arch_kind(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "dbo") return ArchKind::DBO;
  if (s == "ro") return ArchKind::RO;
  if (s == "mo") return ArchKind::MO;
  if (s == "rm" || s == "r&m") return ArchKind::RM;
  return std::nullopt;
}

}  // namespace lisa

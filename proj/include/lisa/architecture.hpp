#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lisa {

enum class ArchKind { DBO, RO, MO, RM };

/// Default mapping-connection learning rate of the mapping-capable
/// architectures.
inline constexpr double kDefaultMappingRate = 0.9;

/// An ablated architecture: the learning rate of mapping connections and
/// whether multi-place relations can be represented.
struct ArchConfig {
  ArchKind kind = ArchKind::RM;
  double mu = kDefaultMappingRate;
  bool relations_allowed = true;

  static ArchConfig of(ArchKind kind);

  bool operator==(const ArchConfig&) const = default;
};

/// Checks the kind/mu/relations invariant.
bool is_consistent(const ArchConfig& arch);

std::string_view to_string(ArchKind kind);
/// Accepts dbo, ro, mo, rm (any case) and "r&m".
std::optional<ArchKind> parse_arch_kind(std::string_view text);

}  // namespace lisa

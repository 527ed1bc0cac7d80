#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vcomp/bidlang.hpp"

namespace vcomp {

/// Two agents, items a b c | d e f. Agent i values its own triple at 12 and any
/// nonempty part of it at 6; the other triple at 5+eps / 4+2eps / 3+3eps by size;
/// mixed bundles by the better side. Menu entry 0 of each agent is the OXS bid
/// that wins the other agent's triple; the remaining entries are conservative
/// deviations towards the agent's own triple.
InstanceFile theorem4_instance(const Rational& eps);

/// The additive, unit-demand and pair-clause deviations added to the lower-bound menus.
std::vector<ValueFn> theorem4_deviations(std::size_t agent, const Rational& eps);

using Triple = std::array<std::size_t, 3>;

/// First partition of the weights into triples of equal sum (exhaustive search).
std::optional<std::vector<Triple>> find_three_partition(const std::vector<std::int64_t>& weights);

struct ThreePartitionInstance {
  InstanceFile file;
  Money B;
  std::optional<std::vector<Triple>> partition;
};

/// Agents B1..Bm then C1..Cm; items I1..I3m then J1..J3m. When a partition
/// exists every agent's menu starts with the candidate equilibrium bid,
/// followed by the structured deviations (B: take one own J item at 5B, or
/// additionally claim another I item at its weight; C: per-item overbids).
ThreePartitionInstance three_partition_instance(const std::vector<std::int64_t>& weights);

/// Agents B and C on items J1 J2 J3 with additive grid menus of step B/2.
InstanceFile pne_gap_gadget(const Rational& B);

/// Items a b: agent 1 unit-demand (1 on either item), agent 2 wants only a at 1;
/// additive menus on the grid {0, 1/2, 1}.
InstanceFile ratio_two_instance();

enum class ValuationClass { OS, OXS, XOS, CF };
std::optional<ValuationClass> parse_class(const std::string& name);
std::string class_name(ValuationClass c);

/// Seeded random valuations of the given class with integer values; no menus.
InstanceFile random_instance(ValuationClass cls, std::size_t n, unsigned m, std::uint64_t seed);

std::vector<ValueFn> valuations_of(const InstanceFile& inst);
std::vector<std::vector<ValueFn>> menus_of(const InstanceFile& inst);

}  // namespace vcomp

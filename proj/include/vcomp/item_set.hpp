#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace vcomp {

using ItemIndex = unsigned;

/// A bundle of items as a bitmask over the item universe {0, ..., m-1}.
class ItemSet {
public:
  static constexpr unsigned kMaxItems = 63;

  constexpr ItemSet() = default;
  constexpr explicit ItemSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr ItemSet full(unsigned m) { return ItemSet{m == 0 ? 0 : (~std::uint64_t{0} >> (64 - m))}; }
  static constexpr ItemSet single(ItemIndex j) { return ItemSet{std::uint64_t{1} << j}; }
  static ItemSet of(std::initializer_list<ItemIndex> items) {
    ItemSet s;
    for (auto j : items) s = s.with(j);
    return s;
  }

  [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }
  [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
  [[nodiscard]] constexpr unsigned size() const { return static_cast<unsigned>(std::popcount(bits_)); }
  [[nodiscard]] constexpr bool contains(ItemIndex j) const { return ((bits_ >> j) & 1u) != 0; }
  [[nodiscard]] constexpr bool subset_of(ItemSet other) const { return (bits_ & ~other.bits_) == 0; }
  [[nodiscard]] constexpr ItemSet with(ItemIndex j) const { return ItemSet{bits_ | (std::uint64_t{1} << j)}; }
  [[nodiscard]] constexpr ItemSet without(ItemIndex j) const { return ItemSet{bits_ & ~(std::uint64_t{1} << j)}; }

  constexpr ItemSet operator|(ItemSet o) const { return ItemSet{bits_ | o.bits_}; }
  constexpr ItemSet operator&(ItemSet o) const { return ItemSet{bits_ & o.bits_}; }
  /// Set difference.
  constexpr ItemSet operator-(ItemSet o) const { return ItemSet{bits_ & ~o.bits_}; }

  friend constexpr bool operator==(ItemSet, ItemSet) = default;
  friend constexpr auto operator<=>(ItemSet a, ItemSet b) { return a.bits_ <=> b.bits_; }

  /// Item indices in increasing order.
  [[nodiscard]] std::vector<ItemIndex> items() const {
    std::vector<ItemIndex> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<ItemIndex>(std::countr_zero(b)));
    return out;
  }

  /// Calls fn(sub) for every subset of *this, including the empty set and *this.
  template <typename Fn>
  void for_each_subset(Fn&& fn) const {
    std::uint64_t sub = 0;
    while (true) {
      fn(ItemSet{sub});
      if (sub == bits_) break;
      sub = (sub - bits_) & bits_;
    }
  }

private:
  std::uint64_t bits_ = 0;
};

}  // namespace vcomp

template <>
struct std::hash<vcomp::ItemSet> {
  std::size_t operator()(vcomp::ItemSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};

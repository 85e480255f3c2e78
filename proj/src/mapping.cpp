#include "lisa/mapping.hpp"

#include <algorithm>
#include <tuple>

namespace lisa {

MappingBlock::MappingBlock(std::vector<UnitIndex> drivers, std::vector<UnitIndex> recipients)
    : drivers_(std::move(drivers)),
      recipients_(std::move(recipients)),
      hyp_(drivers_.size() * recipients_.size(), 0.0),
      weight_(drivers_.size() * recipients_.size(), 0.0) {}

std::size_t MappingBlock::row_of(UnitIndex unit) const {
  auto it = std::find(drivers_.begin(), drivers_.end(), unit);
  return it == drivers_.end() ? kNoUnit : static_cast<std::size_t>(it - drivers_.begin());
}

std::size_t MappingBlock::col_of(UnitIndex unit) const {
  auto it = std::find(recipients_.begin(), recipients_.end(), unit);
  return it == recipients_.end() ? kNoUnit : static_cast<std::size_t>(it - recipients_.begin());
}

std::size_t MappingTable::index(UnitKind kind) {
  switch (kind) {
    case UnitKind::Proposition:
      return 0;
    case UnitKind::SP:
      return 1;
    case UnitKind::Predicate:
      return 2;
    case UnitKind::Object:
      return 3;
  }
  return 0;
}

MappingTable::MappingTable(const Network& net, double learning_rate) : mu_(learning_rate) {
  recipient_slot_.assign(net.tokens.size(), {kNoUnit, kNoUnit});
  for (auto kind : kMappedKinds) {
    auto& b = blocks_[index(kind)];
    b = MappingBlock(net.units_of(kind, Analog::Driver), net.units_of(kind, Analog::Recipient));
    for (std::size_t c = 0; c < b.cols(); ++c) recipient_slot_[b.recipients()[c]] = {index(kind), c};
  }
}

void MappingTable::accumulate_hypotheses(std::span<const double> act) {
  for (auto& b : blocks_) {
    for (std::size_t d = 0; d < b.rows(); ++d) {
      const double ad = act[b.drivers()[d]];
      if (ad == 0.0) continue;
      for (std::size_t r = 0; r < b.cols(); ++r) b.hypothesis(d, r) += ad * act[b.recipients()[r]];
    }
  }
}

void commit_block(MappingBlock& b, double mu) {
  const std::size_t rows = b.rows();
  const std::size_t cols = b.cols();
  double max_h = 0.0;
  for (std::size_t d = 0; d < rows; ++d)
    for (std::size_t r = 0; r < cols; ++r) max_h = std::max(max_h, b.hypothesis(d, r));

  if (max_h > 0.0 && mu != 0.0) {
    std::vector<double> norm(rows * cols);
    for (std::size_t d = 0; d < rows; ++d)
      for (std::size_t r = 0; r < cols; ++r) norm[d * cols + r] = b.hypothesis(d, r) / max_h;

    // Best and second-best per row/column so each rival lookup is O(1).
    auto top2 = [](auto&& get, std::size_t n) {
      double best = 0.0, second = 0.0;
      std::size_t arg = kNoUnit;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = get(i);
        if (arg == kNoUnit || v > best) {
          second = arg == kNoUnit ? 0.0 : best;
          best = v;
          arg = i;
        } else if (v > second) {
          second = v;
        }
      }
      return std::tuple{best, second, arg};
    };
    std::vector<std::tuple<double, double, std::size_t>> row_top(rows), col_top(cols);
    for (std::size_t d = 0; d < rows; ++d)
      row_top[d] = top2([&](std::size_t r) { return norm[d * cols + r]; }, cols);
    for (std::size_t r = 0; r < cols; ++r)
      col_top[r] = top2([&](std::size_t d) { return norm[d * cols + r]; }, rows);

    for (std::size_t d = 0; d < rows; ++d) {
      // Drivers that were silent during this phase set carry no evidence.
      if (std::get<0>(row_top[d]) <= 0.0) continue;
      for (std::size_t r = 0; r < cols; ++r) {
        const auto& [rb, rs, ra] = row_top[d];
        const auto& [cb, cs, ca] = col_top[r];
        const double row_rival = cols > 1 ? (ra == r ? rs : rb) : 0.0;
        const double col_rival = rows > 1 ? (ca == d ? cs : cb) : 0.0;
        const double delta = mu * (norm[d * cols + r] - std::max(row_rival, col_rival));
        b.weight(d, r) = std::clamp(b.weight(d, r) + delta, -1.0, 1.0);
      }
    }
  }
  for (std::size_t d = 0; d < rows; ++d)
    for (std::size_t r = 0; r < cols; ++r) b.hypothesis(d, r) = 0.0;
}

void MappingTable::commit() {
  for (auto& b : blocks_) commit_block(b, mu_);
}

double MappingTable::mapping_input(UnitIndex unit, std::span<const double> act) const {
  if (unit >= recipient_slot_.size()) return 0.0;
  const auto [bi, c] = recipient_slot_[unit];
  if (bi == kNoUnit) return 0.0;
  const auto& b = blocks_[bi];
  double sum = 0.0;
  for (std::size_t d = 0; d < b.rows(); ++d) sum += b.weight(d, c) * act[b.drivers()[d]];
  return sum;
}

double MappingTable::claimed_inhibition(UnitIndex unit, std::span<const double> act) const {
  if (unit >= recipient_slot_.size()) return 0.0;
  const auto [bi, c] = recipient_slot_[unit];
  if (bi == kNoUnit) return 0.0;
  const auto& b = blocks_[bi];
  double best = 0.0, second = 0.0;
  std::size_t arg = kNoUnit;
  for (std::size_t d = 0; d < b.rows(); ++d) {
    const double w = std::max(b.weight(d, c), 0.0);
    if (w > best) {
      second = best;
      best = w;
      arg = d;
    } else if (w > second) {
      second = w;
    }
  }
  if (best == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t d = 0; d < b.rows(); ++d) sum += act[b.drivers()[d]] * (d == arg ? second : best);
  return sum;
}

bool MappingTable::all_zero() const {
  for (const auto& b : blocks_)
    for (std::size_t d = 0; d < b.rows(); ++d)
      for (std::size_t r = 0; r < b.cols(); ++r)
        if (b.weight(d, r) != 0.0) return false;
  return true;
}

}  // namespace lisa

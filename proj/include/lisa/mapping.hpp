#pragma once

// Cross-analog mapping connections: Hebbian hypotheses accumulated while a
// driver proposition fires, committed into signed weights under a one-to-one
// pressure at every phase-set boundary.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lisa/core_model.hpp"

namespace lisa {

/// Hypotheses and weights between the driver and recipient units of one kind.
class MappingBlock {
 public:
  MappingBlock() = default;
  MappingBlock(std::vector<UnitIndex> drivers, std::vector<UnitIndex> recipients);

  std::size_t rows() const { return drivers_.size(); }
  std::size_t cols() const { return recipients_.size(); }
  const std::vector<UnitIndex>& drivers() const { return drivers_; }
  const std::vector<UnitIndex>& recipients() const { return recipients_; }

  double hypothesis(std::size_t d, std::size_t r) const { return hyp_[d * cols() + r]; }
  double weight(std::size_t d, std::size_t r) const { return weight_[d * cols() + r]; }
  double& hypothesis(std::size_t d, std::size_t r) { return hyp_[d * cols() + r]; }
  double& weight(std::size_t d, std::size_t r) { return weight_[d * cols() + r]; }

  /// Row/column position of a unit in this block, or kNoUnit.
  std::size_t row_of(UnitIndex unit) const;
  std::size_t col_of(UnitIndex unit) const;

 private:
  std::vector<UnitIndex> drivers_;
  std::vector<UnitIndex> recipients_;
  std::vector<double> hyp_;
  std::vector<double> weight_;
};

inline constexpr std::array kMappedKinds = {UnitKind::Proposition, UnitKind::SP,
                                            UnitKind::Predicate, UnitKind::Object};

class MappingTable {
 public:
  MappingTable() = default;
  /// Allocates one block per unit kind over the network's same-kind
  /// driver/recipient pairs; all hypotheses and weights start at 0.
  MappingTable(const Network& net, double learning_rate);

  double learning_rate() const { return mu_; }

  MappingBlock& block(UnitKind kind) { return blocks_[index(kind)]; }
  const MappingBlock& block(UnitKind kind) const { return blocks_[index(kind)]; }

  /// h(d,r) += a_d * a_r for every same-kind pair.
  void accumulate_hypotheses(std::span<const double> activations);

  /// Folds the accumulated hypotheses into the weights and clears them.
  void commit();

  /// Signed mapping input to recipient unit `unit`: sum_d w(d,r) a_d.
  double mapping_input(UnitIndex unit, std::span<const double> activations) const;

  /// Inhibition of a recipient unit already claimed by a different driver
  /// unit: sum_d a_d * max_{d' != d} max(w(d',r), 0).
  double claimed_inhibition(UnitIndex unit, std::span<const double> activations) const;

  /// True when every weight is exactly zero.
  bool all_zero() const;

 private:
  static std::size_t index(UnitKind kind);

  std::array<MappingBlock, 4> blocks_;
  double mu_ = 0.0;
  /// Recipient unit -> (block, column) lookup.
  std::vector<std::pair<std::size_t, std::size_t>> recipient_slot_;
};

/// Applies the commit rule to a single block (exposed for testing).
void commit_block(MappingBlock& block, double learning_rate);

}  // namespace lisa

#pragma once

#include <map>
#include <string>

#include "cegabor/types.hpp"

namespace cegabor {

enum class MultiplicityStrategy { quadrant_symmetric, chr_kim_halforder };

const char* to_string(MultiplicityStrategy strategy);
MultiplicityStrategy parse_strategy(const std::string& name);

// Nonnegative integer weights on the nonzero points of Z^n cap [-omega, omega]^n.
class MultiplicityMap {
 public:
  MultiplicityMap(int dim, int omega, MultiplicityStrategy strategy, std::map<IndexVector, int> entries);

  static MultiplicityMap zero(int dim, int omega, MultiplicityStrategy strategy = MultiplicityStrategy::chr_kim_halforder);

  int dim() const { return dim_; }
  int omega() const { return omega_; }
  MultiplicityStrategy strategy() const { return strategy_; }
  const std::map<IndexVector, int>& entries() const { return entries_; }
  int at(const IndexVector& k) const;
  long long total() const;
  bool is_symmetric() const;

  // Raw fiber counts of the quadrant construction (including the origin), when available.
  const std::map<IndexVector, int>& raw_counts() const { return raw_; }
  void set_raw_counts(std::map<IndexVector, int> raw) { raw_ = std::move(raw); }

  bool operator==(const MultiplicityMap& other) const {
    return dim_ == other.dim_ && omega_ == other.omega_ && strategy_ == other.strategy_ && entries_ == other.entries_;
  }

 private:
  int dim_;
  int omega_;
  MultiplicityStrategy strategy_;
  std::map<IndexVector, int> entries_;
  std::map<IndexVector, int> raw_;
};

// Points of Z^n cap [-omega, omega]^n in lexicographic order.
std::vector<IndexVector> index_box(int dim, int omega);

// Fiber counts of the quadrant/ordering construction; not symmetric in general.
std::map<IndexVector, int> quadrant_fiber_counts(int dim, int omega);

MultiplicityMap build_multiplicity(int dim, int omega, MultiplicityStrategy strategy);

}  // namespace cegabor

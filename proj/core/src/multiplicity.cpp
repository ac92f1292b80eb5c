#include "cegabor/multiplicity.hpp"

#include <algorithm>
#include <cmath>

#include "cegabor/error.hpp"

namespace cegabor {

namespace {

constexpr double kMaxBoxPoints = 1e6;

void check_box(int dim, int omega) {
  if (dim < 1) throw Error(ErrorCode::dimension, "dimension must be positive");
  if (omega < 1) throw Error(ErrorCode::invalid_argument, "omega must be at least 1");
  if (std::pow(2.0 * omega + 1, dim) > kMaxBoxPoints) {
    throw Error(ErrorCode::budget, "index box (2*omega+1)^n exceeds 1e6 points");
  }
}

IndexVector negated(const IndexVector& k) {
  IndexVector out(k.size());
  std::transform(k.begin(), k.end(), out.begin(), [](int v) { return -v; });
  return out;
}

bool is_zero(const IndexVector& k) {
  return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
}

// Position of the sign pattern of k among all patterns ordered lexicographically with - < +.
int sign_rank(const IndexVector& k) {
  int rank = 0;
  for (int v : k) rank = 2 * rank + (v >= 0 ? 1 : 0);
  return rank;
}

}  // namespace

const char* to_string(MultiplicityStrategy strategy) {
  switch (strategy) {
    case MultiplicityStrategy::quadrant_symmetric: return "quadrant_symmetric";
    case MultiplicityStrategy::chr_kim_halforder: return "chr_kim_halforder";
  }
  return "unknown";
}

MultiplicityStrategy parse_strategy(const std::string& name) {
  if (name == "quadrant_symmetric") return MultiplicityStrategy::quadrant_symmetric;
  if (name == "chr_kim_halforder" || name == "chr_kim") return MultiplicityStrategy::chr_kim_halforder;
  throw Error(ErrorCode::invalid_argument, "unknown multiplicity strategy '" + name + "'");
}

MultiplicityMap::MultiplicityMap(int dim, int omega, MultiplicityStrategy strategy, std::map<IndexVector, int> entries)
    : dim_(dim), omega_(omega), strategy_(strategy), entries_(std::move(entries)) {
  check_box(dim, omega);
  for (const auto& [k, mu] : entries_) {
    if (static_cast<int>(k.size()) != dim) throw Error(ErrorCode::dimension, "multiplicity index has wrong dimension");
    if (is_zero(k)) throw Error(ErrorCode::invalid_argument, "multiplicity map must not store the origin");
    for (int v : k) {
      if (std::abs(v) > omega) throw Error(ErrorCode::invalid_argument, "multiplicity index outside [-omega, omega]^n");
    }
    if (mu < 0) throw Error(ErrorCode::invalid_argument, "multiplicities must be nonnegative");
  }
}

MultiplicityMap MultiplicityMap::zero(int dim, int omega, MultiplicityStrategy strategy) {
  return MultiplicityMap(dim, omega, strategy, {});
}

int MultiplicityMap::at(const IndexVector& k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? 0 : it->second;
}

long long MultiplicityMap::total() const {
  long long sum = 0;
  for (const auto& [k, mu] : entries_) sum += mu;
  return sum;
}

bool MultiplicityMap::is_symmetric() const {
  for (const auto& [k, mu] : entries_) {
    if (at(negated(k)) != mu) return false;
  }
  return true;
}

std::vector<IndexVector> index_box(int dim, int omega) {
  check_box(dim, omega);
  std::vector<IndexVector> out;
  IndexVector k(dim, -omega);
  while (true) {
    out.push_back(k);
    int i = dim - 1;
    while (i >= 0 && k[i] == omega) {
      k[i] = -omega;
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  return out;
}

std::map<IndexVector, int> quadrant_fiber_counts(int dim, int omega) {
  const auto box = index_box(dim, omega);
  std::map<IndexVector, int> counts;
  // Every (pattern, i) pair adds the quadrants strictly above the pattern.
  for (const auto& k : box) {
    const int c = dim * sign_rank(k);
    if (c > 0) counts[k] += c;
  }
  const int patterns = 1 << dim;
  for (int e = 0; e < patterns; ++e) {
    IndexVector signs(dim);
    for (int j = 0; j < dim; ++j) signs[j] = (e >> (dim - 1 - j)) & 1 ? 1 : -1;
    for (int i = 0; i < dim; ++i) {
      for (const auto& k : box) {
        bool in_face = k[i] >= 1;
        for (int j = i + 1; j < dim && in_face; ++j) in_face = k[j] == 0;
        if (!in_face) continue;
        IndexVector y(dim);
        for (int j = 0; j < dim; ++j) y[j] = signs[j] * k[j];
        counts[y] += 1;
      }
    }
  }
  return counts;
}

MultiplicityMap build_multiplicity(int dim, int omega, MultiplicityStrategy strategy) {
  const auto box = index_box(dim, omega);
  std::map<IndexVector, int> entries;
  if (strategy == MultiplicityStrategy::chr_kim_halforder) {
    for (const auto& k : box) {
      auto first = std::find_if(k.begin(), k.end(), [](int v) { return v != 0; });
      if (first == k.end()) continue;
      entries[k] = *first > 0 ? 1 : 0;
    }
    return MultiplicityMap(dim, omega, strategy, std::move(entries));
  }
  auto raw = quadrant_fiber_counts(dim, omega);
  auto count = [&](const IndexVector& k) {
    auto it = raw.find(k);
    return it == raw.end() ? 0 : it->second;
  };
  // Smallest symmetric multiset dominating the raw fiber counts.
  for (const auto& k : box) {
    if (is_zero(k)) continue;
    entries[k] = std::max(count(k), count(negated(k)));
  }
  MultiplicityMap out(dim, omega, strategy, std::move(entries));
  if (!out.is_symmetric()) throw Error(ErrorCode::asymmetric_multiplicity, "quadrant multiplicities are not symmetric");
  out.set_raw_counts(std::move(raw));
  return out;
}

}  // namespace cegabor

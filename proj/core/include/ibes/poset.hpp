#pragma once

#include <string>
#include <vector>

namespace ibes {

// Finite poset with labeled elements. The order relation is validated
// (reflexive, transitive, antisymmetric) at construction.
class Poset {
 public:
  Poset() = default;

  // leq_pairs lists (a, b) with a <= b by index. With apply_closure the
  // reflexive-transitive closure is taken first (used when loading files);
  // antisymmetry is checked afterwards either way.
  Poset(std::vector<std::string> labels, std::vector<std::pair<int, int>> leq_pairs,
        bool apply_closure = false);

  int size() const { return static_cast<int>(labels_.size()); }
  bool leq(int a, int b) const;
  const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  int index_of(const std::string& label) const;  // -1 when absent

  // Indices of all elements >= i, ascending (includes i).
  const std::vector<int>& ups(int i) const { return ups_.at(static_cast<std::size_t>(i)); }

  bool operator==(const Poset& other) const {
    return labels_ == other.labels_ && leq_ == other.leq_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<int>> ups_;
};

// Two-element chain w0 < w1 and similar small helpers used in tests.
Poset chain_poset(int n);

}  // namespace ibes

#include "ibes/poset.hpp"

#include <stdexcept>

#include "ibes/errors.hpp"

namespace ibes {

Poset::Poset(std::vector<std::string> labels, std::vector<std::pair<int, int>> leq_pairs,
             bool apply_closure)
    : labels_(std::move(labels)) {
  const int n = size();
  leq_.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (auto [a, b] : leq_pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw ConfigError("poset leq pair out of range");
    }
    leq_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
  }
  if (apply_closure) {
    for (int i = 0; i < n; i++) leq_[i][i] = true;
    for (int k = 0; k < n; k++) {
      for (int i = 0; i < n; i++) {
        if (!leq_[i][k]) continue;
        for (int j = 0; j < n; j++) {
          if (leq_[k][j]) leq_[i][j] = true;
        }
      }
    }
  }
  // order axioms
  for (int i = 0; i < n; i++) {
    if (!leq_[i][i]) throw ConfigError("poset order not reflexive at " + label(i));
  }
  for (int i = 0; i < n; i++) {
    for (int j = 0; j < n; j++) {
      if (i != j && leq_[i][j] && leq_[j][i]) {
        throw ConfigError("poset order not antisymmetric between " + label(i) + " and " +
                          label(j));
      }
      if (!leq_[i][j]) continue;
      for (int k = 0; k < n; k++) {
        if (leq_[j][k] && !leq_[i][k]) {
          throw ConfigError("poset order not transitive via " + label(j));
        }
      }
    }
  }
  ups_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; i++) {
    for (int j = 0; j < n; j++) {
      if (leq_[i][j]) ups_[static_cast<std::size_t>(i)].push_back(j);
    }
  }
}

bool Poset::leq(int a, int b) const {
  return leq_.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b));
}

int Poset::index_of(const std::string& label) const {
  for (int i = 0; i < size(); i++) {
    if (labels_[static_cast<std::size_t>(i)] == label) return i;
  }
  return -1;
}

Poset chain_poset(int n) {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; i++) {
    labels.push_back("w" + std::to_string(i));
    for (int j = i; j < n; j++) pairs.emplace_back(i, j);
  }
  return Poset(std::move(labels), std::move(pairs));
}

}  // namespace ibes

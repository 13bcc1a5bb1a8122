#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace loopnil {

/// Permutation of {0,...,n-1}.  Composition is right-to-left:
/// compose(f,g) maps x to f(g(x)), i.e. g is applied first.
class Perm {
public:
  Perm() = default;
  explicit Perm(std::vector<int> images) : img_(std::move(images)) {}

  static Perm identity(int degree);

  int degree() const { return static_cast<int>(img_.size()); }
  int operator()(int x) const { return img_[x]; }
  const std::vector<int>& images() const { return img_; }

  Perm inverse() const;
  bool is_identity() const;
  bool fixes(int x) const { return img_[x] == x; }

  friend Perm compose(const Perm& f, const Perm& g);

  auto operator<=>(const Perm&) const = default;

private:
  std::vector<int> img_;
};

Perm compose(const Perm& f, const Perm& g);

/// f g f^-1
Perm conjugate(const Perm& f, const Perm& g);

/// g^-1 h^-1 g h
Perm group_commutator(const Perm& g, const Perm& h);

/// Multiplicative order (lcm of cycle lengths).
long perm_order(const Perm& p);

struct PermHash {
  std::size_t operator()(const Perm& p) const;
};

}  // namespace loopnil

#include "loopnil/perm.hpp"

#include <numeric>

namespace loopnil {

Perm Perm::identity(int degree) {
  std::vector<int> img(degree);
  std::iota(img.begin(), img.end(), 0);
  return Perm(std::move(img));
}

Perm Perm::inverse() const {
  std::vector<int> inv(img_.size());
  for (int x = 0; x < degree(); ++x) inv[img_[x]] = x;
  return Perm(std::move(inv));
}

bool Perm::is_identity() const {
  for (int x = 0; x < degree(); ++x)
    if (img_[x] != x) return false;
  return true;
}

Perm compose(const Perm& f, const Perm& g) {
  std::vector<int> img(g.img_.size());
  for (int x = 0; x < g.degree(); ++x) img[x] = f.img_[g.img_[x]];
  return Perm(std::move(img));
}

Perm conjugate(const Perm& f, const Perm& g) {
  return compose(compose(f, g), f.inverse());
}

Perm group_commutator(const Perm& g, const Perm& h) {
  return compose(compose(g.inverse(), h.inverse()), compose(g, h));
}

long perm_order(const Perm& p) {
  const int n = p.degree();
  std::vector<char> seen(n, 0);
  long ord = 1;
  for (int x = 0; x < n; ++x) {
    if (seen[x]) continue;
    long len = 0;
    int y = x;
    do {
      seen[y] = 1;
      y = p(y);
      ++len;
    } while (y != x);
    ord = std::lcm(ord, len);
  }
  return ord;
}

std::size_t PermHash::operator()(const Perm& p) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (int x : p.images()) {
    h ^= static_cast<std::size_t>(x);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace loopnil

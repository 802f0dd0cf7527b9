#include "qtree/catalog.hpp"

#include <memory>
#include <mutex>

#include "qtree/error.hpp"
#include "qtree/pencil.hpp"

namespace qtree {

Poly normalized_key(const Poly& p) {
  if (p.is_zero()) return p;
  Poly r = Rational(1) / content(p) * p;
  bool want_negative = (r.degree() % 2) == 1;
  if ((r.lead() < 0) != want_negative) r = -r;
  return r;
}

Catalog::Catalog(int max_edges) : max_edges_(max_edges) {
  if (max_edges < 1 || max_edges > 11) throw Error("catalog_range", "catalog size out of range (1..11)");
  for (int n = 1; n <= max_edges; ++n) {
    for (const auto& u : enumerate_rooted_trees(n)) {
      CatalogEntry e{u, psi_hat_mod(u), static_cast<int>(u.children(u.root()).size()) + 1};
      Poly key = psi_mod(u);
      auto& slot = by_key_[key];
      if (slot.empty()) by_norm_[normalized_key(key)].push_back(key);
      slot.push_back(std::move(e));
    }
  }
  for (const auto& [k, v] : by_key_) keys_.push_back(k);
}

const std::vector<CatalogEntry>& Catalog::lookup(const Poly& key) const {
  static const std::vector<CatalogEntry> none;
  auto it = by_key_.find(key);
  return it == by_key_.end() ? none : it->second;
}

std::vector<CatalogEntry> Catalog::lookup_normalized(const Poly& key) const {
  std::vector<CatalogEntry> out;
  auto it = by_norm_.find(normalized_key(key));
  if (it == by_norm_.end()) return out;
  for (const auto& k : it->second)
    for (const auto& e : by_key_.at(k)) out.push_back(e);
  return out;
}

size_t Catalog::size() const {
  size_t n = 0;
  for (const auto& [k, v] : by_key_) n += v.size();
  return n;
}

const Catalog& shared_catalog(int max_edges) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Catalog>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[max_edges];
  if (!slot) slot = std::make_unique<Catalog>(max_edges);
  return *slot;
}

} // namespace qtree

#include "afnd/linalg.hpp"

#include <algorithm>
#include <utility>

namespace afnd {

SparseVector SparseVector::unit(std::size_t i, const Scalar& c) {
  SparseVector v;
  if (c != 0) v.terms_.emplace_back(i, c);
  return v;
}

SparseVector SparseVector::from_map(const std::map<std::size_t, Scalar>& m) {
  SparseVector v;
  for (const auto& [i, c] : m)
    if (c != 0) v.terms_.emplace_back(i, c);
  return v;
}

Scalar SparseVector::at(std::size_t i) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                             [](const Entry& e, std::size_t k) { return e.first < k; });
  return it != terms_.end() && it->first == i ? it->second : Scalar(0);
}

void SparseVector::push_back(std::size_t i, const Scalar& c) {
  if (!terms_.empty() && terms_.back().first >= i) throw Error("SparseVector::push_back out of order");
  if (c != 0) terms_.emplace_back(i, c);
}

void SparseVector::axpy(const Scalar& a, const SparseVector& x) {
  if (a == 0 || x.empty()) return;
  std::vector<Entry> out;
  out.reserve(terms_.size() + x.terms_.size());
  auto i = terms_.begin();
  auto j = x.terms_.begin();
  while (i != terms_.end() || j != x.terms_.end()) {
    if (j == x.terms_.end() || (i != terms_.end() && i->first < j->first)) {
      out.push_back(std::move(*i++));
    } else if (i == terms_.end() || j->first < i->first) {
      out.emplace_back(j->first, a * j->second);
      ++j;
    } else {
      Scalar c = i->second + a * j->second;
      if (c != 0) out.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
}

void SparseVector::scale(const Scalar& a) {
  if (a == 0) {
    terms_.clear();
    return;
  }
  for (auto& t : terms_) t.second *= a;
}

NormValue weighted_norm(const FieldSpec& field, const SparseVector& v, const WeightFn& weight) {
  NormValue best = NormValue::zero();
  for (const auto& [i, c] : v.terms()) {
    NormValue n = norm(field, c) * weight(i);
    if (compare(n, best) > 0) best = std::move(n);
  }
  return best;
}

// ---------------------------------------------------------------------------

void ExactSolver::reduce(SparseVector& v, SparseVector* combo) const {
  std::size_t pos = 0;
  while (pos < v.size()) {
    const auto idx = v.terms()[pos].first;
    auto it = pivot_row_.find(idx);
    if (it == pivot_row_.end()) {
      ++pos;
      continue;
    }
    Scalar c = v.terms()[pos].second;  // row has leading coefficient 1
    v.axpy(-c, rows_[it->second]);
    if (combo) combo->axpy(c, combos_[it->second]);
  }
}

bool ExactSolver::add(SparseVector image, SparseVector combo) {
  SparseVector used;
  reduce(image, &used);
  combo.axpy(-1, used);
  if (image.empty()) {
    if (!combo.empty()) kernel_.push_back(std::move(combo));
    return false;
  }
  Scalar lead = image.terms().front().second;
  Scalar inv = 1 / lead;
  image.scale(inv);
  combo.scale(inv);
  pivot_row_.emplace(image.terms().front().first, rows_.size());
  rows_.push_back(std::move(image));
  combos_.push_back(std::move(combo));
  return true;
}

std::optional<SparseVector> ExactSolver::solve(const SparseVector& target) const {
  SparseVector v = target;
  SparseVector pre;
  reduce(v, &pre);
  if (!v.empty()) return std::nullopt;
  return pre;
}

bool ExactSolver::in_span(const SparseVector& target) const {
  SparseVector v = target;
  reduce(v, nullptr);
  return v.empty();
}

// ---------------------------------------------------------------------------

OrthogonalBasis::OrthogonalBasis(FieldSpec field, WeightFn weight)
    : field_(field), weight_(std::move(weight)) {}

void OrthogonalBasis::accept(SparseVector v, SparseVector combo, std::size_t pivot) {
  Scalar inv = 1 / v.at(pivot);
  v.scale(inv);
  combo.scale(inv);
  for (std::size_t k = 0; k < vectors_.size(); ++k) {
    Scalar c = vectors_[k].at(pivot);
    if (c == 0) continue;
    vectors_[k].axpy(-c, v);
    combos_[k].axpy(-c, combo);
  }
  pivot_slot_.emplace(pivot, vectors_.size());
  pivots_.push_back(pivot);
  vectors_.push_back(std::move(v));
  combos_.push_back(std::move(combo));
}

SparseVector OrthogonalBasis::normal_form(SparseVector v, SparseVector* combo) const {
  // Basis is fully reduced, so one pass over the pivots present in v suffices.
  std::vector<std::pair<std::size_t, Scalar>> hits;
  for (const auto& [i, c] : v.terms()) {
    auto it = pivot_slot_.find(i);
    if (it != pivot_slot_.end()) hits.emplace_back(it->second, c);
  }
  for (const auto& [k, c] : hits) {
    v.axpy(-c, vectors_[k]);
    if (combo) combo->axpy(c, combos_[k]);
  }
  return v;
}

bool OrthogonalBasis::insert(SparseVector v, SparseVector combo) {
  SparseVector used;
  v = normal_form(std::move(v), &used);
  combo.axpy(-1, used);
  if (v.empty()) {
    if (!combo.empty()) kernel_.push_back(std::move(combo));
    return false;
  }
  std::size_t pivot = v.terms().front().first;
  NormValue best = NormValue::zero();
  for (const auto& [i, c] : v.terms()) {
    NormValue n = afnd::norm(field_, c) * weight_(i);
    if (compare(n, best) > 0) {
      best = std::move(n);
      pivot = i;
    }
  }
  accept(std::move(v), std::move(combo), pivot);
  return true;
}

OrthogonalBasis OrthogonalBasis::eliminate(FieldSpec field, WeightFn weight, std::vector<SparseVector> columns,
                                           const std::vector<NormValue>& domain_weights) {
  OrthogonalBasis basis(field, std::move(weight));
  std::vector<SparseVector> combos;
  combos.reserve(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) combos.push_back(SparseVector::unit(j));
  std::vector<bool> done(columns.size(), false);
  for (;;) {
    std::optional<std::size_t> best_col;
    std::size_t best_row = 0;
    NormValue best = NormValue::zero();
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (done[j]) continue;
      for (const auto& [i, a] : columns[j].terms()) {
        NormValue r = afnd::norm(field, a) * basis.weight_(i) / domain_weights.at(j);
        auto c = compare(r, best);
        if (!best_col || c > 0 || (c == 0 && (i < best_row || (i == best_row && j < *best_col)))) {
          best = std::move(r);
          best_row = i;
          best_col = j;
        }
      }
    }
    if (!best_col) break;
    const std::size_t j = *best_col;
    done[j] = true;
    SparseVector pv = columns[j];
    SparseVector pc = combos[j];
    Scalar inv = 1 / pv.at(best_row);
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (done[k]) continue;
      Scalar c = columns[k].at(best_row);
      if (c == 0) continue;
      columns[k].axpy(-c * inv, pv);
      combos[k].axpy(-c * inv, pc);
    }
    basis.accept(std::move(pv), std::move(pc), best_row);
  }
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j].empty() && !done[j]) basis.kernel_.push_back(std::move(combos[j]));
  return basis;
}

}  // namespace afnd

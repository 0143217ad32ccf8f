#include "afnd/normed.hpp"

namespace afnd {

WeightedSpace::WeightedSpace(std::vector<NormValue> w) : weights(std::move(w)) {
  for (const auto& x : weights)
    if (x.is_zero()) throw Error("weighted space weights must be nonzero");
}

NormValue WeightedSpace::norm(const FieldSpec& field, std::span<const Scalar> coords) const {
  if (coords.size() != dim()) throw Error("coordinate vector has wrong dimension");
  NormValue best = NormValue::zero();
  for (std::size_t i = 0; i < coords.size(); ++i) best = max(best, afnd::norm(field, coords[i]) * weights[i]);
  return best;
}

NormedMatrix::NormedMatrix(FieldSpec f, WeightedSpace dom, WeightedSpace cod)
    : field(f), domain(std::move(dom)), codomain(std::move(cod)),
      entries(codomain.dim(), std::vector<Scalar>(domain.dim())) {}

NormedMatrix::NormedMatrix(FieldSpec f, WeightedSpace dom, WeightedSpace cod, std::vector<std::vector<Scalar>> rows)
    : field(f), domain(std::move(dom)), codomain(std::move(cod)), entries(std::move(rows)) {
  if (entries.size() != codomain.dim()) throw Error("matrix row count does not match codomain");
  for (const auto& r : entries)
    if (r.size() != domain.dim()) throw Error("matrix column count does not match domain");
}

std::vector<Scalar> NormedMatrix::apply(std::span<const Scalar> v) const {
  if (v.size() != cols()) throw Error("vector has wrong dimension");
  std::vector<Scalar> out(rows());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) out[i] += entries[i][j] * v[j];
  return out;
}

SparseVector NormedMatrix::column(std::size_t j) const {
  SparseVector c;
  for (std::size_t i = 0; i < rows(); ++i) c.push_back(i, entries[i][j]);
  return c;
}

NormedMatrix compose(const NormedMatrix& s, const NormedMatrix& t) {
  if (!(s.domain == t.codomain)) throw Error("composition of incompatible maps");
  NormedMatrix out(t.field, t.domain, s.codomain);
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t k = 0; k < s.cols(); ++k) {
      if (s.entries[i][k] == 0) continue;
      for (std::size_t j = 0; j < t.cols(); ++j) out.entries[i][j] += s.entries[i][k] * t.entries[k][j];
    }
  return out;
}

NormValue operator_norm(const NormedMatrix& t) {
  NormValue best = NormValue::zero();
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (t.entries[i][j] == 0) continue;
      best = max(best, norm(t.field, t.entries[i][j]) * t.codomain.weights[i] / t.domain.weights[j]);
    }
  return best;
}

WeightedSpace tensor_spaces(const WeightedSpace& e, const WeightedSpace& f) {
  std::vector<NormValue> w;
  w.reserve(e.dim() * f.dim());
  for (const auto& a : e.weights)
    for (const auto& b : f.weights) w.push_back(a * b);
  return WeightedSpace(std::move(w));
}

WeightedSpace sum_spaces(std::span<const WeightedSpace> spaces) {
  std::vector<NormValue> w;
  for (const auto& s : spaces) w.insert(w.end(), s.weights.begin(), s.weights.end());
  return WeightedSpace(std::move(w));
}

StrictnessReport classify(const NormedMatrix& t) {
  std::vector<SparseVector> cols;
  cols.reserve(t.cols());
  for (std::size_t j = 0; j < t.cols(); ++j) cols.push_back(t.column(j));
  const auto& cw = t.codomain.weights;
  const auto& dw = t.domain.weights;
  auto image = OrthogonalBasis::eliminate(t.field, [&cw](std::size_t i) { return cw.at(i); }, std::move(cols), dw);

  StrictnessReport r;
  r.rank = image.rank();
  r.mono = image.kernel().empty();
  r.epi = image.rank() == t.rows();
  r.kernel = image.kernel();

  OrthogonalBasis ker(t.field, [&dw](std::size_t j) { return dw.at(j); });
  for (const auto& k : image.kernel()) ker.insert(k);

  NormValue c = NormValue::zero();
  for (std::size_t k = 0; k < image.rank(); ++k) {
    NormValue pre = ker.norm(ker.normal_form(image.combos()[k]));
    c = max(c, pre / image.basis_norm(k));
  }
  r.quotient_constant = c;
  if (r.mono) r.strict_mono_constant = c;
  return r;
}

}  // namespace afnd

#include "procstar/generators.hpp"

namespace procstar {

Tower matrix_product_tower(std::optional<Level> depth) {
  auto rule = [](Level k) { return static_cast<std::size_t>(k); };
  return (depth ? make_product_tower(rule, *depth) : make_product_tower(rule)).with_name("prod M_n");
}

Tower commutative_product_tower(std::optional<Level> depth) {
  auto rule = [](Level) { return std::size_t{1}; };
  return (depth ? make_product_tower(rule, *depth) : make_product_tower(rule)).with_name("prod C");
}

Matrix superdiagonal_shift(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  Matrix out = Matrix::Zero(size, size);
  for (Eigen::Index i = 0; i + 1 < size; ++i) out(i, i + 1) = static_cast<double>(i + 1);
  return out;
}

CoherentElement superdiagonal_element(const Tower& tower) {
  auto out = CoherentElement::from_block_rule(
      tower, [tower](Level p, std::size_t j) { return superdiagonal_shift(tower.level(p).block_size(j)); });
  ElementProperties props;
  props.spectral_radius = Certificate{0.0, "nilpotent: every block is strictly upper triangular", true};
  return out.with_properties(props).with_label("L");
}

CoherentElement diagonal_sequence(const Tower& tower, std::vector<Complex> values) {
  if (values.empty()) throw PreconditionError("a diagonal sequence needs at least one value");
  auto out = CoherentElement::from_block_rule(tower, [tower, values](Level p, std::size_t j) {
    if (tower.level(p).block_size(j) != 1) throw PreconditionError("diagonal sequences need 1x1 blocks");
    return Matrix(Matrix::Constant(1, 1, values[std::min(j, values.size() - 1)]));
  });
  ElementProperties props;
  props.normal = true;
  bool real = true;
  for (Complex v : values) real = real && v.imag() == 0.0;
  props.selfadjoint = real;
  return out.with_properties(props).with_label("diag");
}

}  // namespace procstar

#pragma once

#include <string>
#include <vector>

#include "biharm/jet.hpp"

namespace biharm {

/// A Riemannian metric on a coordinate chart: symmetric component fields
/// g_AB, an open domain box, and a default sampling window inside it.
class MetricChart {
 public:
  MetricChart() = default;

  /// `components` is dim x dim row-major; the upper triangle is used and the
  /// lower triangle, where valid, must describe the same fields.
  MetricChart(std::string name, std::vector<std::string> coords,
              const std::vector<ScalarField>& components, Box domain, Box sample);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const Box& domain() const { return domain_; }
  const Box& sample() const { return sample_; }
  const ScalarField& component(int a, int b) const;

  /// Index of the named coordinate, or -1.
  int coord_index(const std::string& name) const;

  /// Throws a domain error naming the offending coordinate.
  void check_in_domain(std::span<const double> p) const;

 private:
  std::string name_;
  std::vector<std::string> coords_;
  std::vector<ScalarField> packed_;  // upper triangle, column packed
  Box domain_;
  Box sample_;
};

}  // namespace biharm

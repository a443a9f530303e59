#include "biharm/chart.hpp"

#include <sstream>

namespace biharm {

namespace {
constexpr int packed_index(int a, int b) {
  return a <= b ? b * (b + 1) / 2 + a : a * (a + 1) / 2 + b;
}
}  // namespace

MetricChart::MetricChart(std::string name, std::vector<std::string> coords,
                         const std::vector<ScalarField>& components, Box domain, Box sample)
    : name_(std::move(name)), coords_(std::move(coords)), domain_(std::move(domain)),
      sample_(std::move(sample)) {
  const int n = dim();
  if (n < 2 || n > kMaxDim)
    throw invalid_argument("chart dimension must be between 2 and " + std::to_string(kMaxDim));
  if (static_cast<int>(components.size()) != n * n)
    throw invalid_argument("metric needs dim*dim components");
  if (static_cast<int>(domain_.size()) != n || static_cast<int>(sample_.size()) != n)
    throw invalid_argument("domain and sample boxes must match the chart dimension");
  for (int i = 0; i < n; ++i) {
    if (!(domain_[i].lo < domain_[i].hi)) throw invalid_argument("empty domain interval");
    if (!(sample_[i].lo <= sample_[i].hi) || !domain_[i].contains(sample_[i].lo) ||
        !domain_[i].contains(sample_[i].hi))
      throw invalid_argument("sampling window for '" + coords_[i] + "' must lie inside the domain");
  }
  packed_.resize(static_cast<std::size_t>(n * (n + 1) / 2));
  for (int b = 0; b < n; ++b)
    for (int a = 0; a <= b; ++a) {
      const ScalarField& f = components[a * n + b];
      if (!f.valid()) throw invalid_argument("missing metric component");
      if (f.dim() != n) throw invalid_argument("metric component has wrong arity");
      packed_[packed_index(a, b)] = f;
    }
}

const ScalarField& MetricChart::component(int a, int b) const { return packed_[packed_index(a, b)]; }

int MetricChart::coord_index(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (coords_[i] == name) return i;
  return -1;
}

void MetricChart::check_in_domain(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim())
    throw invalid_argument("point has " + std::to_string(p.size()) + " coordinates, chart '" +
                           name_ + "' has " + std::to_string(dim()));
  const int bad = first_outside(domain_, p);
  if (bad >= 0) {
    std::ostringstream os;
    os.precision(17);
    os << "coordinate " << bad << " ('" << coords_[bad] << "') = " << p[bad]
       << " outside the domain (" << domain_[bad].lo << ", " << domain_[bad].hi
       << ") of chart '" << name_ << "'";
    throw domain_error(os.str());
  }
}

}  // namespace biharm

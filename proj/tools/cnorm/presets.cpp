#include "presets.hpp"

#include "cnorm/error.hpp"

namespace cnorm::tool {

namespace {

GridSpec cnibl_grid() {
  GridSpec g;
  g.methods = {NormMethod::IblContextual};
  g.classifiers = {ClassifierKind::Ibl};
  return g;
}

GridSpec cnmlr_grid() {
  GridSpec g;
  g.methods = {NormMethod::MlrContextual};
  g.classifiers = {ClassifierKind::Mlr};
  return g;
}

template <class T>
std::vector<T> range(T lo, T hi, T step) {
  std::vector<T> v;
  for (T x = lo; x <= hi; x += step) v.push_back(x);
  return v;
}

}  // namespace

std::vector<std::string> preset_names() { return {"comparison", "k1k2", "f", "d", "k3", "m"}; }

GridFile preset_grid(const std::string& name) {
  GridFile g;
  const std::vector<NormMethod> non_contextual{NormMethod::None, NormMethod::MinMaxTrain,
                                               NormMethod::AvgDevTrain, NormMethod::PercentileTrain,
                                               NormMethod::AvgDevBaseline};
  if (name == "comparison") {
    g.grids.push_back(comparison_grid());
    g.comparisons.emplace_back(NormMethod::IblContextual, non_contextual);
    g.comparisons.emplace_back(NormMethod::MlrContextual, non_contextual);
  } else if (name == "k1k2") {
    auto s = cnibl_grid();
    s.k1 = range<std::size_t>(1, 8, 1);
    s.k2 = {4, 6, 8};
    g.grids.push_back(s);
  } else if (name == "f") {
    auto s = cnmlr_grid();
    s.f = range(1.0, 8.0, 1.0);
    g.grids.push_back(s);
  } else if (name == "d") {
    auto a = cnibl_grid();
    auto b = cnmlr_grid();
    a.d = b.d = range(5.0, 80.0, 5.0);
    g.grids = {a, b};
  } else if (name == "k3") {
    auto s = cnibl_grid();
    s.k3 = range<std::size_t>(1, 5, 1);
    g.grids.push_back(s);
  } else if (name == "m") {
    auto s = cnmlr_grid();
    s.m = range<std::size_t>(0, 5, 1);
    g.grids.push_back(s);
  } else {
    throw ConfigError("unknown sweep preset '" + name + "'");
  }
  return g;
}

}  // namespace cnorm::tool

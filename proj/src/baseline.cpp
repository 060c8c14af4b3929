#include "wayref/baseline.hpp"

#include "wayref/errors.hpp"

namespace wayref {

BaselineState baseline_state(std::span<const GeoPoint> observed, const GeometryBundle& g, Direction direction) {
  if (observed.size() < 2) throw ValidationError("baseline needs at least two observed positions");
  const DirectionalGeometry& d = g.for_direction(direction);
  const double sense = direction_sense(direction);
  std::vector<NavState> st;
  for (const GeoPoint& p : observed) st.push_back(nav_state(p, g, direction));

  BaselineState b;
  for (std::size_t t = 0; t + 1 < st.size(); ++t) b.mean_dev += sense * (st[t + 1].km - st[t].km) - d.speed(st[t].km);
  b.mean_dev /= static_cast<double>(st.size() - 1);
  for (const NavState& s : st) b.mean_off += s.s;
  b.mean_off /= static_cast<double>(st.size());
  b.km_last = st.back().km;
  b.s_last = st.back().s;
  return b;
}

BaselinePrediction baseline_predict(const SequenceSample& sample, const GeometryBundle& g) {
  const auto observed = sample.observed();
  const BaselineState b = baseline_state(observed, g, sample.direction);

  BaselinePrediction pred;
  pred.features.system = System::nav;
  pred.features.direction = sample.direction;
  pred.features.anchor.position = observed.back();
  pred.features.anchor.km = b.km_last;
  pred.features.anchor.s = b.s_last;
  for (std::size_t t = 0; t < kFutureSteps; ++t)
    pred.features.steps.push_back({b.mean_dev, t == 0 ? b.mean_off - b.s_last : 0.0});
  DecodeResult dec = decode(pred.features, g);
  pred.positions = std::move(dec.positions);
  pred.truncated = dec.truncated;
  return pred;
}

}  // namespace wayref

#include "erae/convex_hull.hpp"

#include <algorithm>
#include <cmath>

#include "erae/error.hpp"

namespace erae {

namespace {

struct Node {
  double x;
  double y;
  bool fresh = false;
};

// > 0 for a counter-clockwise turn o -> a -> b.
double cross(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

template <typename XAt, typename YAt>
HullCurve monotone_chain(std::size_t n, XAt x_at, YAt y_at) {
  HullCurve h;
  h.support_xs.reserve(n);
  h.support_ys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_at(i);
    const double y = y_at(i);
    while (h.support_xs.size() >= 2) {
      const std::size_t k = h.support_xs.size();
      if (cross(h.support_xs[k - 2], h.support_ys[k - 2], h.support_xs[k - 1], h.support_ys[k - 1], x, y) > 0.0)
        break;
      h.support_xs.pop_back();
      h.support_ys.pop_back();
    }
    h.support_xs.push_back(x);
    h.support_ys.push_back(y);
  }
  return h;
}

// Evaluates a hull at nondecreasing abscissae by walking its segments.
class Cursor {
 public:
  explicit Cursor(const HullCurve& h) : h_(h) {}

  double at(double x) {
    const auto& xs = h_.support_xs;
    while (j_ + 1 < xs.size() && xs[j_] < x) ++j_;
    const double t = (x - xs[j_ - 1]) / (xs[j_] - xs[j_ - 1]);
    return h_.support_ys[j_ - 1] + t * (h_.support_ys[j_] - h_.support_ys[j_ - 1]);
  }

 private:
  const HullCurve& h_;
  std::size_t j_ = 1;
};

double checked(double y) {
  if (!std::isfinite(y)) throw Error(ErrorCode::NonFiniteFunction, "hull input is not finite");
  return y;
}

}  // namespace

HullCurve lower_hull_of_samples(const SampledCurve& curve) {
  if (curve.xs.size() != curve.ys.size() || curve.xs.size() < 2)
    throw Error(ErrorCode::DimensionMismatch, "sampled curve needs matching xs/ys with >= 2 points");
  for (std::size_t i = 1; i < curve.xs.size(); ++i)
    if (!(curve.xs[i] > curve.xs[i - 1]))
      throw Error(ErrorCode::DomainError, "sample abscissae must be strictly increasing");
  for (double y : curve.ys) checked(y);
  return monotone_chain(
      curve.xs.size(), [&](std::size_t i) { return curve.xs[i]; }, [&](std::size_t i) { return curve.ys[i]; });
}

double evaluate(const HullCurve& hull, double x) {
  const auto& xs = hull.support_xs;
  const auto& ys = hull.support_ys;
  if (xs.empty()) throw Error(ErrorCode::OutOfDomain, "empty hull");
  if (x < xs.front() - 1e-12 || x > xs.back() + 1e-12 || std::isnan(x))
    throw Error(ErrorCode::OutOfDomain, "evaluation point outside hull domain");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const std::size_t i = j - 1;
  if (x == xs[i]) return ys[i];
  const double t = (x - xs[i]) / (xs[j] - xs[i]);
  return ys[i] + t * (ys[j] - ys[i]);
}

HullCurve lower_envelope(const std::function<double(double)>& f, double lo, double hi,
                         const HullOptions& opts) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw Error(ErrorCode::DomainError, "hull domain must be a finite interval lo < hi");
  if (opts.grid < 3) throw Error(ErrorCode::DomainError, "hull grid needs at least 3 points");

  std::vector<double> xs;
  xs.reserve(opts.grid + 3 * opts.breakpoints.size());
  for (std::size_t i = 0; i < opts.grid; ++i)
    xs.push_back(i + 1 == opts.grid ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(opts.grid - 1));
  for (double bp : opts.breakpoints)
    for (double x : {bp - 1e-12, bp, bp + 1e-12})
      if (x >= lo && x <= hi) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Node> nodes;
  nodes.reserve(xs.size());
  for (double x : xs) nodes.push_back({x, checked(f(x)), true});

  const auto build = [&] {
    return monotone_chain(
        nodes.size(), [&](std::size_t i) { return nodes[i].x; }, [&](std::size_t i) { return nodes[i].y; });
  };

  HullCurve hull = build();
  for (int pass = 0; pass < 200; ++pass) {
    std::vector<Node> inserted;
    Cursor cursor(hull);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (!nodes[i].fresh && !nodes[i + 1].fresh) continue;
      const double xl = nodes[i].x;
      const double xr = nodes[i + 1].x;
      if (xr - xl < opts.min_cell) continue;
      // Where f is convex on a cell the gap to a hull segment is concave, so
      // half the tolerance at the midpoint bounds it by the full tolerance.
      const double xm = 0.5 * (xl + xr);
      const double ym = checked(f(xm));
      if (!(ym < cursor.at(xm) - 0.5 * opts.refine_tol)) continue;
      inserted.push_back({xm, ym, true});
      // Where the secants of the neighbouring cells cross: exact for a kink
      // of a piecewise-linear f, a good split point otherwise.
      if (i >= 1 && i + 2 < nodes.size()) {
        const Node& a = nodes[i - 1];
        const Node& b = nodes[i];
        const Node& c = nodes[i + 1];
        const Node& d = nodes[i + 2];
        const double m1 = (b.y - a.y) / (b.x - a.x);
        const double m2 = (d.y - c.y) / (d.x - c.x);
        if (m2 > m1) {
          const double xs_cross = (c.y - b.y + m1 * b.x - m2 * c.x) / (m1 - m2);
          if (xs_cross > xl + 1e-12 && xs_cross < xr - 1e-12 && std::abs(xs_cross - xm) > 1e-12)
            inserted.push_back({xs_cross, checked(f(xs_cross)), true});
        }
      }
    }
    // Next to a hull vertex a bridge can cut under f inside a single cell
    // with both ends above it. f - hull is convex there, so a golden-section
    // search finds the dip.
    std::size_t v = 0;
    for (std::size_t i = 0; i < nodes.size() && v < hull.support_xs.size(); ++i) {
      if (nodes[i].x != hull.support_xs[v]) continue;
      ++v;
      for (std::size_t j : {i - 1, i + 1}) {
        if (j >= nodes.size()) continue;
        const std::size_t l = std::min(i, j);
        const std::size_t r = std::max(i, j);
        if (nodes[r].x - nodes[l].x < opts.min_cell) continue;
        const bool bridge = j < i ? (v < 2 || hull.support_xs[v - 2] != nodes[j].x)
                                  : (v >= hull.support_xs.size() || hull.support_xs[v] != nodes[j].x);
        if (!bridge) continue;
        const auto gap = [&](double x) { return checked(f(x)) - evaluate(hull, x); };
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = nodes[l].x, b = nodes[r].x;
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double gc = gap(c), gd = gap(d);
        for (int it = 0; it < 60 && b - a > 1e-3 * opts.min_cell; ++it) {
          if (gc < gd) {
            b = d, d = c, gd = gc;
            c = b - phi * (b - a), gc = gap(c);
          } else {
            a = c, c = d, gc = gd;
            d = a + phi * (b - a), gd = gap(d);
          }
        }
        const double xb = gc < gd ? c : d;
        if (std::min(gc, gd) < -0.5 * opts.refine_tol && xb - nodes[l].x > 1e-12 && nodes[r].x - xb > 1e-12)
          inserted.push_back({xb, checked(f(xb)), true});
      }
    }

    for (auto& n : nodes) n.fresh = false;
    if (inserted.empty()) break;
    std::vector<Node> merged;
    merged.reserve(nodes.size() + inserted.size());
    std::sort(inserted.begin(), inserted.end(), [](const Node& p, const Node& q) { return p.x < q.x; });
    std::merge(nodes.begin(), nodes.end(), inserted.begin(), inserted.end(), std::back_inserter(merged),
               [](const Node& p, const Node& q) { return p.x < q.x; });
    merged.erase(std::unique(merged.begin(), merged.end(), [](const Node& p, const Node& q) { return p.x == q.x; }),
                 merged.end());
    nodes = std::move(merged);
    hull = build();
  }
  return hull;
}

}  // namespace erae

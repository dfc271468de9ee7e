#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "perfdel/rational.hpp"

namespace perfdel {

using Point2 = std::pair<Rat, Rat>;

/// Orientation of the turn O -> A -> B: sign of the cross product (exact).
inline int orient2d(const Point2& o, const Point2& a, const Point2& b) {
    Rat c = (a.first - o.first) * (b.second - o.second) -
            (a.second - o.second) * (b.first - o.first);
    return c.sign();
}

/// Lower-left convex hull: the points that are minimal in some direction
/// (alpha, beta) with alpha, beta > 0, ordered by first coordinate.
/// Collinear interior points of hull edges are dropped.
inline std::vector<Point2> lower_hull_2d(std::vector<Point2> pts) {
    if (pts.empty()) throw std::invalid_argument("lower_hull_2d: empty input");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<Point2> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 && orient2d(hull[hull.size() - 2], hull.back(), p) <= 0)
            hull.pop_back();
        hull.push_back(p);
    }
    // keep only the strictly decreasing part: beyond the first minimum-y vertex
    // every hull vertex has both coordinates larger, so it is never minimal for
    // a strictly positive direction
    size_t cut = 0;
    for (size_t i = 1; i < hull.size(); ++i)
        if (hull[i].second < hull[cut].second) cut = i;
    hull.resize(cut + 1);
    return hull;
}

}  // namespace perfdel

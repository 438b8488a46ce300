#include "procpat/pareto.hpp"

#include "procpat/error.hpp"

#include <algorithm>
#include <numeric>

namespace procpat {

bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Direction> directions) {
    if (a.size() != b.size() || a.size() != directions.size())
        throw Error(Errc::DimensionMismatch, "interest vectors of different dimensionality");
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const bool maximize = directions[k] == Direction::Maximize;
        const double better = maximize ? a[k] - b[k] : b[k] - a[k];
        if (a[k] == b[k])
            continue;
        if (better < 0)
            return false;
        strictly = true;
    }
    return strictly;
}

bool dominates(const InterestVector& a, const InterestVector& b) {
    if (a.directions != b.directions)
        throw Error(Errc::DimensionMismatch, "interest vectors with different directions");
    return dominates(a.values, b.values, a.directions);
}

std::vector<std::size_t> non_dominated(const std::vector<std::vector<double>>& points,
                                       std::span<const Direction> directions) {
    const std::size_t dims = directions.size();
    for (const auto& p : points)
        if (p.size() != dims)
            throw Error(Errc::DimensionMismatch, "point of wrong dimensionality");

    // Best-first lexicographic order: anything that dominates a point sorts before it.
    auto better = [&](std::size_t a, std::size_t b) {
        for (std::size_t k = 0; k < dims; ++k) {
            const double x = points[a][k];
            const double y = points[b][k];
            if (x == y)
                continue;
            return directions[k] == Direction::Maximize ? x > y : x < y;
        }
        return a < b;
    };
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), better);

    std::vector<std::size_t> front;
    for (std::size_t i : order) {
        const bool dominated = std::any_of(front.begin(), front.end(), [&](std::size_t f) {
            return dominates(points[f], points[i], directions);
        });
        if (!dominated)
            front.push_back(i);
    }
    std::sort(front.begin(), front.end());
    return front;
}

std::vector<MeasuredPattern> pareto_front(std::vector<MeasuredPattern>& items) {
    if (items.empty())
        return {};
    const auto& directions = items.front().interest.directions;
    std::vector<std::vector<double>> points;
    points.reserve(items.size());
    for (const auto& m : items) {
        if (m.interest.directions != directions)
            throw Error(Errc::DimensionMismatch, "candidates measured with different directions");
        points.push_back(m.interest.values);
    }
    for (auto& m : items)
        m.front = false;
    std::vector<MeasuredPattern> front;
    for (std::size_t i : non_dominated(points, directions)) {
        items[i].front = true;
        front.push_back(items[i]);
    }
    std::sort(front.begin(), front.end(), [](const MeasuredPattern& a, const MeasuredPattern& b) {
        if (a.interest.values.front() != b.interest.values.front())
            return a.interest.values.front() > b.interest.values.front();
        return a.pattern.id() < b.pattern.id();
    });
    return front;
}

} // namespace procpat

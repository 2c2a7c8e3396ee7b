#pragma once

#include <cstddef>
#include <vector>

namespace invlim {

/// N x N doubly periodic grid on [0, L)^2. Samples are row-major with the
/// y index slow: value(ix, iy) = values[iy * N + ix] at (ix h, iy h).
struct Grid {
    std::size_t n = 128;
    double box_length = 6.283185307179586;

    double spacing() const { return box_length / static_cast<double>(n); }
    double cell_area() const { return spacing() * spacing(); }
    std::size_t size() const { return n * n; }
    /// Throws DomainError unless N is a power of two >= 16 and L > 0.
    void validate() const;

    bool operator==(const Grid&) const = default;
};

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
    ScalarField(const Grid& g, std::vector<double> v);

    double& at(std::size_t ix, std::size_t iy) { return values[iy * grid.n + ix]; }
    double at(std::size_t ix, std::size_t iy) const { return values[iy * grid.n + ix]; }
    double mean() const;
    void remove_mean();
};

/// Components (v1, v2) on a common grid.
struct VectorField {
    Grid grid;
    std::vector<double> u;
    std::vector<double> v;

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g), u(g.size(), 0.0), v(g.size(), 0.0) {}
};

} // namespace invlim

#include "invlim/field.hpp"

#include "invlim/errors.hpp"

#include <cmath>
#include <numeric>

namespace invlim {

void Grid::validate() const {
    if (n < 16 || (n & (n - 1)) != 0) {
        throw DomainError("grid size N must be a power of two >= 16");
    }
    if (!(box_length > 0.0) || !std::isfinite(box_length)) {
        throw DomainError("box length must be positive");
    }
}

ScalarField::ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw DomainError("field sample count does not match the grid");
    }
}

double ScalarField::mean() const {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

void ScalarField::remove_mean() {
    const double m = mean();
    for (double& x : values) {
        x -= m;
    }
}

} // namespace invlim

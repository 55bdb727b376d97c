#include "frontfix/banded.hpp"

#include <cmath>
#include <string>

#include "frontfix/error.hpp"

namespace frontfix {

BandedMatrix::BandedMatrix(std::size_t n) : lower_(n, 0.0), diag_(n, 0.0), upper1_(n, 0.0), upper2_(n, 0.0) {}

double& BandedMatrix::at(std::size_t row, std::size_t col) {
    if (col + 1 == row) return lower_[row];
    if (col == row) return diag_[row];
    if (col == row + 1) return upper1_[row];
    if (col == row + 2) return upper2_[row];
    throw SolverError(ErrorKind::assembly, "entry outside the band");
}

double BandedMatrix::at(std::size_t row, std::size_t col) const {
    if (col + 1 == row) return lower_[row];
    if (col == row) return diag_[row];
    if (col == row + 1) return upper1_[row];
    if (col == row + 2) return upper2_[row];
    return 0.0;
}

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double sum = diag_[i] * x[i];
        if (i > 0) sum += lower_[i] * x[i - 1];
        if (i + 1 < n) sum += upper1_[i] * x[i + 1];
        if (i + 2 < n) sum += upper2_[i] * x[i + 2];
        y[i] = sum;
    }
}

BandedLU::BandedLU(const BandedMatrix& m)
    : lower_(m.size(), 0.0), diag_(m.size(), 0.0), upper1_(m.size(), 0.0), upper2_(m.size(), 0.0) {
    const std::size_t n = m.size();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(m.diag()[i]));
    for (std::size_t i = 0; i < n; ++i) {
        double pivot = m.diag()[i];
        double right = m.upper1()[i];
        if (i > 0) {
            const double l = m.lower()[i] / diag_[i - 1];
            lower_[i] = l;
            pivot -= l * upper1_[i - 1];
            right -= l * upper2_[i - 1];
        }
        if (!(std::abs(pivot) > 1e-14 * scale)) {
            throw SolverError(ErrorKind::assembly, "vanishing pivot at row " + std::to_string(i));
        }
        diag_[i] = pivot;
        upper1_[i] = right;
        upper2_[i] = m.upper2()[i];
    }
}

void BandedLU::solve(std::span<double> rhs) const {
    const std::size_t n = size();
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= lower_[i] * rhs[i - 1];
    for (std::size_t i = n; i-- > 0;) {
        double value = rhs[i];
        if (i + 1 < n) value -= upper1_[i] * rhs[i + 1];
        if (i + 2 < n) value -= upper2_[i] * rhs[i + 2];
        rhs[i] = value / diag_[i];
    }
}

BandedMatrix BandedLU::reconstruct() const {
    const std::size_t n = size();
    BandedMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Row i of L is (l_i at i-1, 1 at i); U has diag_, upper1_, upper2_.
        out.at(i, i) = diag_[i] + (i > 0 ? lower_[i] * upper1_[i - 1] : 0.0);
        if (i > 0) out.at(i, i - 1) = lower_[i] * diag_[i - 1];
        if (i + 1 < n) out.at(i, i + 1) = upper1_[i] + (i > 0 ? lower_[i] * upper2_[i - 1] : 0.0);
        if (i + 2 < n) out.at(i, i + 2) = upper2_[i];
    }
    return out;
}

}  // namespace frontfix

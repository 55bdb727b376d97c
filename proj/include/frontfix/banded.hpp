#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace frontfix {

/// Square matrix with one sub-diagonal and up to two super-diagonals. This is
/// the shape of every system here: tridiagonal interior rows plus a first row
/// that reaches two columns to the right (the Robin closure).
class BandedMatrix {
public:
    BandedMatrix() = default;
    explicit BandedMatrix(std::size_t n);

    std::size_t size() const noexcept { return diag_.size(); }

    /// Entry (row, col); |col - row| must lie in the band [-1, 2].
    double& at(std::size_t row, std::size_t col);
    double at(std::size_t row, std::size_t col) const;

    /// y = M x.
    void multiply(std::span<const double> x, std::span<double> y) const;

    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& diag() const noexcept { return diag_; }
    const std::vector<double>& upper1() const noexcept { return upper1_; }
    const std::vector<double>& upper2() const noexcept { return upper2_; }

private:
    // lower_[i] = M(i, i-1), upper1_[i] = M(i, i+1), upper2_[i] = M(i, i+2).
    std::vector<double> lower_, diag_, upper1_, upper2_;
};

/// LU factorization without pivoting, valid for the diagonally dominant
/// systems assembled here. Immutable after construction; `solve` works in
/// place on caller storage so one factorization can serve concurrent solves.
class BandedLU {
public:
    BandedLU() = default;

    /// Throws SolverError(assembly) when a pivot vanishes.
    explicit BandedLU(const BandedMatrix& matrix);

    std::size_t size() const noexcept { return diag_.size(); }

    /// Overwrites rhs with the solution of M x = rhs.
    void solve(std::span<double> rhs) const;

    /// L * U, for checking the factorization.
    BandedMatrix reconstruct() const;

private:
    std::vector<double> lower_;  // multipliers l(i, i-1)
    std::vector<double> diag_;
    std::vector<double> upper1_;
    std::vector<double> upper2_;
};

}  // namespace frontfix

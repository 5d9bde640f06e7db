#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fracid/derivative.hpp"
#include "fracid/errors.hpp"
#include "fracid/series.hpp"

namespace fracid {

enum class FitKind {
    three_member,  ///< estimate (a2, a1, a0)
    two_member,    ///< a2 fixed at zero, estimate (a1, a0)
};

/// Least-squares estimate of the linear model coefficients at fixed orders.
struct LinearFitResult {
    double a2 = 0.0;  ///< always zero for two-member fits
    double a1 = 0.0;
    double a0 = 0.0;
    double residual_norm = 0.0;  ///< per-sample mean of the squared equation error at the solution
};

/// Normal-equation system Σ r_i r_j a_j = Σ r_i u over every sample, where
/// the regressors r are (y^(alpha), y^(beta), y) for a three-member fit and
/// (y^(beta), y) for a two-member one. Entries are symmetric by construction:
/// each pairwise sum is computed once and stored on both sides.
struct NormalEquations {
    std::size_t size = 0;
    std::array<std::array<double, 3>, 3> matrix{};
    std::array<double, 3> rhs{};
};

namespace detail {

inline NormalEquations gram_system(const std::vector<const std::vector<double>*>& columns,
                                   const std::vector<double>& input) {
    NormalEquations system;
    system.size = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const std::vector<double>& left = *columns[i];
        for (std::size_t j = i; j < columns.size(); ++j) {
            const std::vector<double>& right = *columns[j];
            double sum = 0.0;
            for (std::size_t m = 0; m < left.size(); ++m) sum += left[m] * right[m];
            system.matrix[i][j] = sum;
            system.matrix[j][i] = sum;
        }
        double rhs = 0.0;
        for (std::size_t m = 0; m < left.size(); ++m) rhs += left[m] * input[m];
        system.rhs[i] = rhs;
    }
    return system;
}

}  // namespace detail

inline NormalEquations assemble_normal_equations(const std::vector<double>& alpha_derivative,
                                                 const std::vector<double>& beta_derivative,
                                                 const std::vector<double>& output,
                                                 const std::vector<double>& input) {
    return detail::gram_system({&alpha_derivative, &beta_derivative, &output}, input);
}

/// Two-member variant: the 2x2 system in (a1, a0).
inline NormalEquations assemble_normal_equations(const std::vector<double>& beta_derivative,
                                                 const std::vector<double>& output,
                                                 const std::vector<double>& input) {
    return detail::gram_system({&beta_derivative, &output}, input);
}

/// Direct elimination with partial pivoting. The system is first scaled
/// symmetrically by 1/sqrt(diagonal) so that regressors of very different
/// magnitude (h^-alpha blows the derivative column up for small h) do not
/// wreck the conditioning. Throws SingularNormalMatrix when a pivot falls
/// within 1e-12 of the largest one seen, which happens for insufficiently
/// exciting data or collinear regressors (coinciding orders, an identically
/// zero output).
inline std::array<double, 3> solve_normal_equations(const NormalEquations& system) {
    const std::size_t n = system.size;

    std::array<double, 3> column_scale{1.0, 1.0, 1.0};
    for (std::size_t i = 0; i < n; ++i)
        if (system.matrix[i][i] > 0.0) column_scale[i] = 1.0 / std::sqrt(system.matrix[i][i]);

    std::array<std::array<double, 4>, 3> rows{};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            rows[i][j] = system.matrix[i][j] * column_scale[i] * column_scale[j];
        rows[i][n] = system.rhs[i] * column_scale[i];
    }

    double largest_pivot = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(rows[r][col]) > std::fabs(rows[pivot_row][col])) pivot_row = r;
        std::swap(rows[col], rows[pivot_row]);
        const double pivot = rows[col][col];
        largest_pivot = std::max(largest_pivot, std::fabs(pivot));
        if (std::fabs(pivot) <= 1e-12 * largest_pivot)
            throw SingularNormalMatrix(
                "normal equations are singular: the data may not excite every model term, "
                "or the derivative orders coincide");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = rows[r][col] / pivot;
            for (std::size_t c = col; c <= n; ++c) rows[r][c] -= factor * rows[col][c];
        }
    }

    std::array<double, 3> solution{};
    for (std::size_t i = n; i-- > 0;) {
        double value = rows[i][n];
        for (std::size_t j = i + 1; j < n; ++j) value -= rows[i][j] * solution[j];
        solution[i] = value / rows[i][i];
    }
    for (std::size_t i = 0; i < n; ++i) solution[i] *= column_scale[i];
    return solution;
}

namespace detail {

/// Fit core shared with the order search, which supplies cached derivatives.
/// alpha_derivative may be null for two-member fits.
inline LinearFitResult fit_from_columns(const std::vector<double>* alpha_derivative,
                                        const std::vector<double>& beta_derivative,
                                        const std::vector<double>& output,
                                        const std::vector<double>& input, FitKind kind) {
    LinearFitResult fit;
    if (kind == FitKind::three_member) {
        const auto solution = solve_normal_equations(
            assemble_normal_equations(*alpha_derivative, beta_derivative, output, input));
        fit.a2 = solution[0];
        fit.a1 = solution[1];
        fit.a0 = solution[2];
    } else {
        const auto solution =
            solve_normal_equations(assemble_normal_equations(beta_derivative, output, input));
        fit.a1 = solution[0];
        fit.a0 = solution[1];
    }

    double sum = 0.0;
    for (std::size_t m = 0; m < output.size(); ++m) {
        double residual = fit.a1 * beta_derivative[m] + fit.a0 * output[m] - input[m];
        if (kind == FitKind::three_member) residual += fit.a2 * (*alpha_derivative)[m];
        sum += residual * residual;
    }
    fit.residual_norm = sum / static_cast<double>(output.size());
    return fit;
}

}  // namespace detail

/// Estimates the linear coefficients for fixed derivative orders: computes
/// y^(alpha) and y^(beta) from the measured output, assembles the normal
/// equations and solves them directly. Input and output must share length
/// and step.
inline LinearFitResult fit_linear_coefficients(const SampledSeries& output,
                                               const SampledSeries& input, double alpha,
                                               double beta,
                                               const MemoryPolicy& memory = MemoryPolicy::full(),
                                               FitKind kind = FitKind::three_member) {
    validate_series(output);
    validate_series(input);
    if (output.size() != input.size())
        throw LengthMismatch("output and input series lengths differ: " +
                             std::to_string(output.size()) + " vs " +
                             std::to_string(input.size()));
    if (output.step != input.step)
        throw LengthMismatch("output and input series steps differ");

    const SampledSeries beta_derivative = fractional_derivative(output, beta, memory);
    if (kind == FitKind::two_member)
        return detail::fit_from_columns(nullptr, beta_derivative.values, output.values,
                                        input.values, kind);

    const SampledSeries alpha_derivative = fractional_derivative(output, alpha, memory);
    return detail::fit_from_columns(&alpha_derivative.values, beta_derivative.values,
                                    output.values, input.values, kind);
}

}  // namespace fracid

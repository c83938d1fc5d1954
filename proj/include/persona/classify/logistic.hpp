#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace persona::classify {

/// Row-major design matrix.
struct Design {
    std::size_t rows = 0, cols = 0;
    std::vector<double> values;

    Design() = default;
    Design(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

/// Per-column z-scoring fitted on training rows; zero-variance columns are dropped.
struct Standardizer {
    std::vector<std::size_t> kept;  // source columns, ascending
    std::vector<double> mean;       // per kept column
    std::vector<double> sd;         // population sd, > 0

    static Standardizer fit(const Design& x);
    Design apply(const Design& x) const;
    std::vector<double> apply(std::span<const double> row) const;
};

struct LogisticOptions {
    /// L2 strength; NaN means 1/n.
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double gradient_tolerance = 1e-6;  // infinity norm
    std::size_t max_iterations = 5000;
    double armijo = 1e-4;
};

struct LogisticFit {
    std::vector<double> weights;
    double bias = 0;
    double lambda = 0;
    std::size_t iterations = 0;
    bool converged = false;
    double gradient_norm = 0;
    std::vector<double> loss_history;  // initial loss, then one entry per accepted step
};

struct Gradient {
    std::vector<double> w;
    double b = 0;
};

/// mean_i [log(1 + e^z_i) - y_i z_i] + lambda/2 |w|^2, z = Xw + b. The bias is not penalized.
double logistic_loss(const Design& x, std::span<const int> y, std::span<const double> w, double b, double lambda);
Gradient logistic_gradient(const Design& x, std::span<const int> y, std::span<const double> w, double b,
                           double lambda);

/// Gradient descent with Barzilai-Borwein trial steps and Armijo backtracking.
/// Throws InvariantError if the loss becomes non-finite.
LogisticFit train_logistic(const Design& x, std::span<const int> y, const LogisticOptions& options = {});

double sigmoid(double z) noexcept;

struct Prediction {
    double probability = 0.5;
    int label = 0;  // 1 iff probability > 0.5
};

Prediction predict(const LogisticFit& model, std::span<const double> x);

}  // namespace persona::classify

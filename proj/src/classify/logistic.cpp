#include "persona/classify/logistic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "persona/error.hpp"

namespace persona::classify {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

void check_shapes(const Design& x, std::span<const int> y, std::size_t w_size) {
    if (x.values.size() != x.rows * x.cols) throw InvariantError("design matrix storage does not match its shape");
    if (y.size() != x.rows) throw DataError("label count differs from design rows");
    if (w_size != x.cols) throw DataError("weight count differs from design columns");
    if (x.rows == 0) throw DataError("cannot fit logistic regression on zero rows");
}

double softplus(double z) noexcept { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct Evaluation {
    double loss = 0;
    Eigen::VectorXd gw;
    double gb = 0;
};

Evaluation evaluate(const ConstMatrixMap& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double b,
                    double lambda, bool with_gradient) {
    const double n = static_cast<double>(X.rows());
    const Eigen::VectorXd z = (X * w).array() + b;
    Evaluation e;
    double nll = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) nll += softplus(z[i]) - y[i] * z[i];
    e.loss = nll / n + 0.5 * lambda * w.squaredNorm();
    if (with_gradient) {
        Eigen::VectorXd r(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) r[i] = sigmoid(z[i]) - y[i];
        e.gw = X.transpose() * r / n + lambda * w;
        e.gb = r.sum() / n;
    }
    return e;
}

Eigen::VectorXd labels_vector(std::span<const int> y) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0 && y[i] != 1) throw DataError("logistic labels must be 0 or 1");
        v[static_cast<Eigen::Index>(i)] = y[i];
    }
    return v;
}

}  // namespace

double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

Standardizer Standardizer::fit(const Design& x) {
    if (x.rows == 0) throw DataError("cannot standardize zero rows");
    Standardizer s;
    const double n = static_cast<double>(x.rows);
    for (std::size_t j = 0; j < x.cols; ++j) {
        double mean = 0;
        for (std::size_t i = 0; i < x.rows; ++i) mean += x(i, j);
        mean /= n;
        double ss = 0;
        for (std::size_t i = 0; i < x.rows; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
        const double sd = std::sqrt(ss / n);
        if (sd > 0) {
            s.kept.push_back(j);
            s.mean.push_back(mean);
            s.sd.push_back(sd);
        }
    }
    return s;
}

Design Standardizer::apply(const Design& x) const {
    Design out(x.rows, kept.size());
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < kept.size(); ++k) {
            if (kept[k] >= x.cols) throw DataError("standardizer column out of range");
            out(i, k) = (x(i, kept[k]) - mean[k]) / sd[k];
        }
    return out;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
    std::vector<double> out(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        if (kept[k] >= row.size()) throw DataError("standardizer column out of range");
        out[k] = (row[kept[k]] - mean[k]) / sd[k];
    }
    return out;
}

double logistic_loss(const Design& x, std::span<const int> y, std::span<const double> w, double b, double lambda) {
    check_shapes(x, y, w.size());
    const ConstMatrixMap X(x.values.data(), static_cast<Eigen::Index>(x.rows), static_cast<Eigen::Index>(x.cols));
    const Eigen::VectorXd wv = ConstVectorMap(w.data(), static_cast<Eigen::Index>(w.size()));
    return evaluate(X, labels_vector(y), wv, b, lambda, false).loss;
}

Gradient logistic_gradient(const Design& x, std::span<const int> y, std::span<const double> w, double b,
                           double lambda) {
    check_shapes(x, y, w.size());
    const ConstMatrixMap X(x.values.data(), static_cast<Eigen::Index>(x.rows), static_cast<Eigen::Index>(x.cols));
    const Eigen::VectorXd wv = ConstVectorMap(w.data(), static_cast<Eigen::Index>(w.size()));
    const auto e = evaluate(X, labels_vector(y), wv, b, lambda, true);
    return Gradient{std::vector<double>(e.gw.data(), e.gw.data() + e.gw.size()), e.gb};
}

LogisticFit train_logistic(const Design& x, std::span<const int> y, const LogisticOptions& options) {
    check_shapes(x, y, x.cols);
    for (double v : x.values)
        if (!std::isfinite(v)) throw DataError("design matrix contains a non-finite value");
    const ConstMatrixMap X(x.values.data(), static_cast<Eigen::Index>(x.rows), static_cast<Eigen::Index>(x.cols));
    const Eigen::VectorXd yv = labels_vector(y);
    const double lambda = std::isnan(options.lambda) ? 1.0 / static_cast<double>(x.rows) : options.lambda;
    if (lambda < 0) throw UsageError("L2 strength must be non-negative");

    const auto d = static_cast<Eigen::Index>(x.cols);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    double b = 0;
    auto cur = evaluate(X, yv, w, b, lambda, true);

    LogisticFit fit;
    fit.lambda = lambda;
    fit.loss_history.push_back(cur.loss);
    auto grad_inf = [](const Evaluation& e) {
        double g = std::abs(e.gb);
        if (e.gw.size() > 0) g = std::max(g, e.gw.cwiseAbs().maxCoeff());
        return g;
    };

    double step = 1.0;
    while (fit.iterations < options.max_iterations) {
        fit.gradient_norm = grad_inf(cur);
        if (fit.gradient_norm < options.gradient_tolerance) {
            fit.converged = true;
            break;
        }
        const double g2 = cur.gw.squaredNorm() + cur.gb * cur.gb;
        double trial = step;
        Evaluation next;
        Eigen::VectorXd w_next;
        double b_next = 0;
        bool accepted = false;
        for (int k = 0; k < 80; ++k) {
            w_next = w - trial * cur.gw;
            b_next = b - trial * cur.gb;
            next = evaluate(X, yv, w_next, b_next, lambda, false);
            if (std::isnan(next.loss))
                throw InvariantError("logistic loss became NaN; check feature standardization");
            if (next.loss <= cur.loss - options.armijo * trial * g2) {
                accepted = true;
                break;
            }
            trial *= 0.5;
        }
        if (!accepted) break;  // no representable descent step left
        next = evaluate(X, yv, w_next, b_next, lambda, true);
        if (!std::isfinite(next.loss)) throw InvariantError("logistic loss became non-finite");

        // Barzilai-Borwein trial step for the next iteration.
        const Eigen::VectorXd sw = w_next - w, yw = next.gw - cur.gw;
        const double sb = b_next - b, yb = next.gb - cur.gb;
        const double sy = sw.dot(yw) + sb * yb;
        const double ss = sw.squaredNorm() + sb * sb;
        step = sy > 0 ? std::clamp(ss / sy, 1e-10, 1e10) : std::min(2.0 * trial, 1e10);

        w = std::move(w_next);
        b = b_next;
        cur = std::move(next);
        ++fit.iterations;
        fit.loss_history.push_back(cur.loss);
    }
    fit.gradient_norm = grad_inf(cur);
    fit.converged = fit.converged || fit.gradient_norm < options.gradient_tolerance;
    fit.weights.assign(w.data(), w.data() + w.size());
    fit.bias = b;
    return fit;
}

Prediction predict(const LogisticFit& model, std::span<const double> x) {
    if (x.size() != model.weights.size())
        throw DataError("prediction input has " + std::to_string(x.size()) + " features, model expects " +
                        std::to_string(model.weights.size()));
    double z = model.bias;
    for (std::size_t i = 0; i < x.size(); ++i) z += model.weights[i] * x[i];
    Prediction p;
    p.probability = sigmoid(z);
    p.label = p.probability > 0.5 ? 1 : 0;
    return p;
}

}  // namespace persona::classify

#include "qreservoir/readout.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qrc {

namespace {

using EMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EMatrix to_eigen(const Matrix& m) {
    return Eigen::Map<const EMatrix>(m.data.data(), static_cast<Eigen::Index>(m.rows),
                                     static_cast<Eigen::Index>(m.cols));
}

void check_finite(const Matrix& m, const char* name) {
    for (double v : m.data) {
        if (!std::isfinite(v)) {
            throw ValidationError(std::string(name) + " contains a non-finite entry");
        }
    }
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double LinearModel::weight_frobenius_norm() const {
    double acc = 0.0;
    for (double w : weights) acc += w * w;
    return std::sqrt(acc);
}

LinearModel fit_ridge(const Matrix& features, const Matrix& targets, double lambda,
                      bool fit_intercept) {
    if (features.rows == 0 || features.cols == 0) {
        throw ValidationError("fit_ridge: empty feature matrix");
    }
    if (targets.rows != features.rows || targets.cols == 0) {
        throw ValidationError("fit_ridge: targets must have one row per feature row");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ValidationError("fit_ridge: lambda must be finite and >= 0");
    }
    check_finite(features, "features");
    check_finite(targets, "targets");

    const EMatrix x = to_eigen(features);
    const EMatrix y = to_eigen(targets);

    Eigen::RowVectorXd x_mean = Eigen::RowVectorXd::Zero(x.cols());
    Eigen::RowVectorXd y_mean = Eigen::RowVectorXd::Zero(y.cols());
    if (fit_intercept) {
        x_mean = x.colwise().mean();
        y_mean = y.colwise().mean();
    }
    const EMatrix xc = x.rowwise() - x_mean;
    const EMatrix yc = y.rowwise() - y_mean;

    EMatrix w;
    if (lambda > 0.0) {
        // Regularized normal equations; X^T X + lambda I is SPD.
        Eigen::MatrixXd gram = xc.transpose() * xc;
        gram.diagonal().array() += lambda;
        w = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(xc.transpose() * yc);
    } else {
        // Minimum-norm least squares.
        w = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(xc).solve(yc);
    }

    LinearModel model;
    model.n_features = features.cols;
    model.n_targets = targets.cols;
    model.lambda = lambda;
    model.weights.resize(features.cols * targets.cols);
    for (std::size_t f = 0; f < features.cols; ++f) {
        for (std::size_t t = 0; t < targets.cols; ++t) {
            model.weights[f * targets.cols + t] =
                w(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(t));
        }
    }
    model.intercept.assign(targets.cols, 0.0);
    if (fit_intercept) {
        const Eigen::RowVectorXd b = y_mean - x_mean * w;
        for (std::size_t t = 0; t < targets.cols; ++t) {
            model.intercept[t] = b(static_cast<Eigen::Index>(t));
        }
    }
    return model;
}

Matrix model_predict(const LinearModel& model, const Matrix& features) {
    if (features.cols != model.n_features) {
        throw ValidationError("model_predict: feature width " + std::to_string(features.cols) +
                              " does not match training width " +
                              std::to_string(model.n_features));
    }
    Matrix out(features.rows, model.n_targets);
    for (std::size_t r = 0; r < features.rows; ++r) {
        for (std::size_t t = 0; t < model.n_targets; ++t) {
            double acc = model.intercept[t];
            for (std::size_t f = 0; f < model.n_features; ++f) {
                acc += features.at(r, f) * model.weights[f * model.n_targets + t];
            }
            out.at(r, t) = acc;
        }
    }
    return out;
}

double mse(const Matrix& truth, const Matrix& predicted) {
    if (truth.rows != predicted.rows || truth.cols != predicted.cols) {
        throw ValidationError("mse: shape mismatch");
    }
    if (truth.rows == 0) throw ValidationError("mse: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.data.size(); ++i) {
        const double d = truth.data[i] - predicted.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(truth.rows);
}

double accuracy(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) throw ValidationError("accuracy: length mismatch");
    if (truth.empty()) throw ValidationError("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == predicted[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::string to_text(const LinearModel& model) {
    std::string out = "ridge-model v1\n";
    out += "features " + std::to_string(model.n_features) + '\n';
    out += "targets " + std::to_string(model.n_targets) + '\n';
    out += "lambda " + format_full(model.lambda) + '\n';
    out += "weights\n";
    for (std::size_t f = 0; f < model.n_features; ++f) {
        for (std::size_t t = 0; t < model.n_targets; ++t) {
            if (t > 0) out += ' ';
            out += format_full(model.weight(f, t));
        }
        out += '\n';
    }
    out += "intercept\n";
    for (std::size_t t = 0; t < model.n_targets; ++t) {
        if (t > 0) out += ' ';
        out += format_full(model.intercept[t]);
    }
    out += '\n';
    return out;
}

LinearModel model_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line, word;
    auto fail = [](const std::string& why) -> LinearModel {
        throw ValidationError("model_from_text: " + why);
    };
    if (!std::getline(in, line) || line != "ridge-model v1") return fail("bad header");
    LinearModel model;
    std::size_t features = 0, targets = 0;
    in >> word >> features;
    if (word != "features") return fail("missing 'features'");
    in >> word >> targets;
    if (word != "targets") return fail("missing 'targets'");
    in >> word >> model.lambda;
    if (word != "lambda") return fail("missing 'lambda'");
    in >> word;
    if (word != "weights") return fail("missing 'weights'");
    model.n_features = features;
    model.n_targets = targets;
    model.weights.resize(features * targets);
    for (double& w : model.weights) {
        if (!(in >> w)) return fail("truncated weights");
    }
    in >> word;
    if (word != "intercept") return fail("missing 'intercept'");
    model.intercept.resize(targets);
    for (double& b : model.intercept) {
        if (!(in >> b)) return fail("truncated intercept");
    }
    return model;
}

}  // namespace qrc

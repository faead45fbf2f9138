#pragma once

#include <string>
#include <vector>

#include "qreservoir/errors.hpp"
#include "qreservoir/matrix.hpp"

namespace qrc {

// Trainable readout contract: anything with fit/predict can close the
// forecasting loop.
class Estimator {
public:
    virtual ~Estimator() = default;
    virtual void fit(const Matrix& features, const Matrix& targets) = 0;
    virtual Matrix predict(const Matrix& features) const = 0;
};

// Affine readout y = x W + b fitted by ridge regression.
struct LinearModel {
    std::size_t n_features = 0;
    std::size_t n_targets = 0;
    std::vector<double> weights;    // n_features x n_targets, row-major
    std::vector<double> intercept;  // n_targets
    double lambda = 0.0;

    double weight(std::size_t f, std::size_t t) const { return weights[f * n_targets + t]; }
    double weight_frobenius_norm() const;
};

// Minimizes ||Y - X W - 1 b^T||_F^2 + lambda ||W||_F^2 on centered data; the
// intercept is not penalized. lambda = 0 with a rank-deficient X yields the
// minimum-norm least-squares solution. Throws ValidationError on empty or
// non-finite input.
LinearModel fit_ridge(const Matrix& features, const Matrix& targets, double lambda,
                      bool fit_intercept = true);

Matrix model_predict(const LinearModel& model, const Matrix& features);

class RidgeReadout final : public Estimator {
public:
    explicit RidgeReadout(double lambda = 1e-6, bool fit_intercept = true)
        : lambda_(lambda), fit_intercept_(fit_intercept) {}

    void fit(const Matrix& features, const Matrix& targets) override {
        model_ = fit_ridge(features, targets, lambda_, fit_intercept_);
        fitted_ = true;
    }
    Matrix predict(const Matrix& features) const override {
        if (!fitted_) throw Error("RidgeReadout::predict called before fit");
        return model_predict(model_, features);
    }
    bool fitted() const { return fitted_; }
    const LinearModel& model() const {
        if (!fitted_) throw Error("RidgeReadout::model called before fit");
        return model_;
    }

private:
    double lambda_ = 0.0;
    bool fit_intercept_ = true;
    bool fitted_ = false;
    LinearModel model_;
};

// Mean squared error (1/T) sum_t ||y_t - yhat_t||^2.
double mse(const Matrix& truth, const Matrix& predicted);
// Fraction of matching decoded symbols.
double accuracy(const std::vector<int>& truth, const std::vector<int>& predicted);

// Structured text serialization; round-trips bit-exactly (17 significant
// digits per value).
std::string to_text(const LinearModel& model);
LinearModel model_from_text(const std::string& text);

}  // namespace qrc

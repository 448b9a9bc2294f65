#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gbv/numeric.hpp"

namespace gbv::model {

struct TrainConfig {
    double C = 1.0;
    bool balanced_class_weights = true;
    double tol = 1e-4;
    int max_epochs = 1000;
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError
};

// Linear hinge-loss SVM: (1/2)||w||^2 + C sum_i c_i max(0, 1 - y_i(w.x_i + b)),
// with an unregularized bias. Trained by two-variable dual coordinate descent
// on the box-constrained dual with the bias equality constraint.
struct SvmModel {
    std::vector<double> w;
    double b = 0.0;
    TrainConfig config;
    std::vector<double> alpha;       // final dual variables, 0 <= alpha_i <= C*c_i
    std::vector<double> class_weight; // c_i per training row
    double primal_objective = 0.0;
    double final_violation = 0.0; // max projected-gradient violation at stop
    int epochs_run = 0;
    // Primal objective of the reported iterate after each epoch; the reported
    // model is the best (lowest-primal) iterate seen, so this is nonincreasing.
    std::vector<double> primal_trace;
};

SvmModel svm_train(const numeric::DenseMatrix& X, std::span<const int> y, const TrainConfig& cfg);

double svm_decision(const SvmModel& m, std::span<const double> x);
// sign of the decision value; ties predict +1.
int svm_predict(const SvmModel& m, std::span<const double> x);

// Primal objective of (w, b) on a training set; exposed for the oracle tests.
double svm_primal_objective(std::span<const double> w, double b, const numeric::DenseMatrix& X,
                            std::span<const int> y, double C, std::span<const double> class_weight);

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Seeded stratified k-fold split; per-fold class counts are within one sample
// of exact proportionality.
std::vector<Fold> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

Prf precision_recall_f1(std::span<const int> y_true, std::span<const int> y_pred, int positive);

struct CvReport {
    std::string setup;
    std::vector<Prf> folds;
    Prf mean;
    Prf stdev; // sample standard deviation (n-1)

    void finalize(); // fills mean/stdev from folds
    // "0.772 (0.113)" cells in Table-1 layout.
    std::string cell(double mean_v, double std_v) const;
};

} // namespace gbv::model

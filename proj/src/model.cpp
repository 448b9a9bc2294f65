#include "gbv/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::model {

void TrainConfig::validate() const {
    if (!(C > 0.0)) throw ConfigError("C must be > 0");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
    if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
}

double svm_primal_objective(std::span<const double> w, double b, const numeric::DenseMatrix& X,
                            std::span<const int> y, double C, std::span<const double> class_weight) {
    double reg = 0.0;
    for (double v : w) reg += v * v;
    double loss = 0.0;
    for (std::size_t i = 0; i < X.rows; ++i) {
        double dot = 0.0;
        for (std::size_t c = 0; c < X.cols; ++c) dot += w[c] * X.at(i, c);
        double margin = 1.0 - y[i] * (dot + b);
        if (margin > 0) loss += class_weight[i] * margin;
    }
    return 0.5 * reg + C * loss;
}

namespace {

// Exact minimizer of the piecewise-linear loss over b for fixed w: scans the
// hinge breakpoints and their midpoints.
double optimal_bias(std::span<const double> f, std::span<const int> y, double C,
                    std::span<const double> cw) {
    const std::size_t n = f.size();
    std::vector<double> candidates;
    candidates.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) candidates.push_back(static_cast<double>(y[i]) - f[i]);
    std::sort(candidates.begin(), candidates.end());
    const std::size_t bp = candidates.size();
    for (std::size_t i = 0; i + 1 < bp; ++i) candidates.push_back(0.5 * (candidates[i] + candidates[i + 1]));

    double best_b = candidates.front(), best_loss = std::numeric_limits<double>::infinity();
    for (double b : candidates) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double margin = 1.0 - y[i] * (f[i] + b);
            if (margin > 0) loss += cw[i] * margin;
        }
        loss *= C;
        if (loss < best_loss) {
            best_loss = loss;
            best_b = b;
        }
    }
    return best_b;
}

} // namespace

SvmModel svm_train(const numeric::DenseMatrix& X, std::span<const int> y, const TrainConfig& cfg) {
    cfg.validate();
    const std::size_t n = X.rows, k = X.cols;
    if (y.size() != n) throw LengthMismatch("label count does not match row count");
    for (double v : X.values)
        if (!std::isfinite(v)) throw NonFiniteError("training matrix contains a non-finite entry");

    std::size_t n_pos = 0, n_neg = 0;
    for (int label : y) {
        if (label == 1) ++n_pos;
        else if (label == -1) ++n_neg;
        else throw ConfigError("labels must be +1 or -1");
    }
    if (n_pos == 0 || n_neg == 0) throw SingleClassError("training data contains a single class");

    SvmModel m;
    m.config = cfg;
    m.class_weight.resize(n);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        m.class_weight[i] = cfg.balanced_class_weights
                                ? nd / (2.0 * static_cast<double>(y[i] == 1 ? n_pos : n_neg))
                                : 1.0;

    std::vector<double> box(n); // upper bounds U_i = C * c_i
    for (std::size_t i = 0; i < n; ++i) box[i] = cfg.C * m.class_weight[i];

    // Precomputed Gram matrix; n is bounded by the desk-scale corpus.
    std::vector<double> K(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < k; ++c) dot += X.at(i, c) * X.at(j, c);
            K[i * n + j] = dot;
            K[j * n + i] = dot;
        }
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> f(n, 0.0); // f_i = w . x_i
    auto in_up = [&](std::size_t i) { return y[i] == 1 ? alpha[i] < box[i] : alpha[i] > 0.0; };
    auto in_low = [&](std::size_t i) { return y[i] == 1 ? alpha[i] > 0.0 : alpha[i] < box[i]; };
    auto bias_candidate = [&](std::size_t i) { return static_cast<double>(y[i]) - f[i]; };

    auto violation_now = [&]() {
        double up = -std::numeric_limits<double>::infinity();
        double low = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double c = bias_candidate(i);
            if (in_up(i)) up = std::max(up, c);
            if (in_low(i)) low = std::min(low, c);
        }
        return up - low;
    };

    auto compute_w = [&](std::vector<double>& w) {
        w.assign(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] == 0.0) continue;
            double coef = alpha[i] * y[i];
            for (std::size_t c = 0; c < k; ++c) w[c] += coef * X.at(i, c);
        }
    };

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::vector<double> best_w(k, 0.0), cur_w;
    double best_b = optimal_bias(f, y, cfg.C, m.class_weight);
    double best_primal = svm_primal_objective(best_w, best_b, X, y, cfg.C, m.class_weight);
    double violation = violation_now();

    for (int epoch = 0; epoch < cfg.max_epochs && violation >= cfg.tol; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            double ci = bias_candidate(i);
            // Find the most violating partner on the opposite side.
            std::size_t j = n;
            double cj = 0.0;
            if (in_up(i)) {
                double low = std::numeric_limits<double>::infinity();
                for (std::size_t t = 0; t < n; ++t)
                    if (t != i && in_low(t) && bias_candidate(t) < low) {
                        low = bias_candidate(t);
                        j = t;
                    }
                if (j == n || ci - low < cfg.tol) {
                    // try the other role below
                    j = n;
                } else {
                    cj = low;
                }
            }
            if (j == n && in_low(i)) {
                double up = -std::numeric_limits<double>::infinity();
                std::size_t jj = n;
                for (std::size_t t = 0; t < n; ++t)
                    if (t != i && in_up(t) && bias_candidate(t) > up) {
                        up = bias_candidate(t);
                        jj = t;
                    }
                if (jj != n && up - ci >= cfg.tol) {
                    // swap roles so i is always the "up" index
                    cj = ci;
                    ci = up;
                    std::swap(i, jj);
                    j = jj;
                }
            }
            if (j == n) continue;

            // Two-variable subproblem along alpha_i += y_i d, alpha_j -= y_j d.
            double a = K[i * n + i] + K[j * n + j] - 2.0 * K[i * n + j];
            double lo_i, hi_i, lo_j, hi_j;
            if (y[i] == 1) {
                lo_i = -alpha[i];
                hi_i = box[i] - alpha[i];
            } else {
                lo_i = alpha[i] - box[i];
                hi_i = alpha[i];
            }
            if (y[j] == 1) {
                lo_j = alpha[j] - box[j];
                hi_j = alpha[j];
            } else {
                lo_j = -alpha[j];
                hi_j = box[j] - alpha[j];
            }
            double d_lo = std::max(lo_i, lo_j), d_hi = std::min(hi_i, hi_j);
            double slope = cj - ci; // dD/dd at d = 0; negative by selection
            double d;
            if (a > 1e-300) d = std::clamp((ci - cj) / a, d_lo, d_hi);
            else d = slope < 0 ? d_hi : d_lo;
            if (d == 0.0) continue;

            alpha[i] += y[i] * d;
            alpha[j] -= y[j] * d;
            alpha[i] = std::clamp(alpha[i], 0.0, box[i]);
            alpha[j] = std::clamp(alpha[j], 0.0, box[j]);
            for (std::size_t t = 0; t < n; ++t) f[t] += d * (K[i * n + t] - K[j * n + t]);
        }

        compute_w(cur_w);
        double b = optimal_bias(f, y, cfg.C, m.class_weight);
        double primal = svm_primal_objective(cur_w, b, X, y, cfg.C, m.class_weight);
        if (primal < best_primal) {
            best_primal = primal;
            best_w = cur_w;
            best_b = b;
        }
        m.primal_trace.push_back(best_primal);
        m.epochs_run = epoch + 1;
        violation = violation_now();
    }

    m.w = std::move(best_w);
    m.b = best_b;
    m.alpha = std::move(alpha);
    m.primal_objective = best_primal;
    m.final_violation = violation;
    return m;
}

double svm_decision(const SvmModel& m, std::span<const double> x) {
    if (x.size() != m.w.size())
        throw ShapeError("input has length " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(m.w.size()));
    double dot = m.b;
    for (std::size_t i = 0; i < x.size(); ++i) dot += m.w[i] * x[i];
    return dot;
}

int svm_predict(const SvmModel& m, std::span<const double> x) {
    return svm_decision(m, x) >= 0.0 ? 1 : -1;
}

std::vector<Fold> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k must be >= 2");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
    for (const auto& [label, idx] : by_class)
        if (idx.size() < static_cast<std::size_t>(k))
            throw TooFewSamplesError("class " + std::to_string(label) + " has " + std::to_string(idx.size()) +
                                     " samples, fewer than k = " + std::to_string(k));

    Rng rng(seed);
    std::vector<Fold> folds(static_cast<std::size_t>(k));
    for (auto& [label, idx] : by_class) {
        rng.shuffle(idx);
        const std::size_t m = idx.size();
        const std::size_t base = m / static_cast<std::size_t>(k);
        const std::size_t extra = m % static_cast<std::size_t>(k);
        std::size_t pos = 0;
        for (std::size_t f = 0; f < static_cast<std::size_t>(k); ++f) {
            std::size_t len = base + (f < extra ? 1 : 0);
            for (std::size_t t = 0; t < len; ++t) folds[f].test.push_back(idx[pos++]);
        }
    }
    for (std::size_t f = 0; f < folds.size(); ++f) {
        auto& fold = folds[f];
        std::sort(fold.test.begin(), fold.test.end());
        std::vector<bool> in_test(y.size(), false);
        for (std::size_t i : fold.test) in_test[i] = true;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (!in_test[i]) fold.train.push_back(i);
    }
    return folds;
}

Prf precision_recall_f1(std::span<const int> y_true, std::span<const int> y_pred, int positive) {
    if (y_true.size() != y_pred.size()) throw LengthMismatch("prediction and truth lengths differ");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        bool t = y_true[i] == positive, p = y_pred[i] == positive;
        if (t && p) ++tp;
        else if (!t && p) ++fp;
        else if (t && !p) ++fn;
    }
    Prf out;
    out.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    out.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    out.f1 = (out.precision + out.recall) == 0.0
                 ? 0.0
                 : 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

void CvReport::finalize() {
    auto stats = [&](auto get) {
        double sum = 0.0;
        for (const Prf& p : folds) sum += get(p);
        double mu = folds.empty() ? 0.0 : sum / static_cast<double>(folds.size());
        double ss = 0.0;
        for (const Prf& p : folds) ss += (get(p) - mu) * (get(p) - mu);
        double sd = folds.size() > 1 ? std::sqrt(ss / static_cast<double>(folds.size() - 1)) : 0.0;
        return std::make_pair(mu, sd);
    };
    auto [pm, ps] = stats([](const Prf& p) { return p.precision; });
    auto [rm, rs] = stats([](const Prf& p) { return p.recall; });
    auto [fm, fs] = stats([](const Prf& p) { return p.f1; });
    mean = {pm, rm, fm};
    stdev = {ps, rs, fs};
}

std::string CvReport::cell(double mean_v, double std_v) const {
    return format_double(mean_v, 3) + " (" + format_double(std_v, 3) + ")";
}

} // namespace gbv::model

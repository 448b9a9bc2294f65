#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gbv::numeric {

// Row-major dense matrix.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return std::span(values).subspan(r * cols, cols); }
};

// Mean-centering PCA model. Components are the columns of V (d x k),
// orthonormal, with per-component variances in descending order.
struct PcaModel {
    std::size_t d = 0;
    std::size_t k = 0;
    std::vector<double> mean;   // d
    DenseMatrix components;     // d x k, column j = j-th principal direction
    std::vector<double> lambda; // k, descending
    double total_variance = 0.0;
    bool k_clamped = false; // true when k_requested exceeded the rank bound

    std::string serialize() const; // binary, little-endian f64
    static PcaModel deserialize(std::string_view bytes);
    std::uint64_t hash() const;
};

// Fits on the column-centered matrix via a symmetric eigendecomposition of
// the smaller Gram side. k is clamped to min(n-1, d). Per-component sign is
// fixed by making each direction's largest-magnitude entry positive.
PcaModel pca_fit(const DenseMatrix& X, std::size_t k_requested);

// (X - mean) V
DenseMatrix pca_transform(const PcaModel& m, const DenseMatrix& X);

// lambda_j / total variance.
std::vector<double> explained_variance_ratio(const PcaModel& m);

// V w: the original-space direction whose inner product with centered inputs
// equals the reduced-space linear score.
std::vector<double> back_project(const PcaModel& m, std::span<const double> w);

void save_pca(const PcaModel& m, const std::string& path);
PcaModel load_pca(const std::string& path);

} // namespace gbv::numeric

#include "gbv/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <Eigen/Dense>

#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::numeric {

namespace {

void check_finite(const DenseMatrix& X) {
    for (double v : X.values)
        if (!std::isfinite(v)) throw NonFiniteError("matrix contains a non-finite entry");
}

// Little-endian f64 writer/reader; the on-disk layout is documented in the
// README for reproducibility checks.
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

std::uint64_t get_u64(std::string_view s, std::size_t& pos) {
    if (pos + 8 > s.size()) throw ParseError("truncated PCA model");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[pos + i])) << (8 * i);
    pos += 8;
    return v;
}

double get_f64(std::string_view s, std::size_t& pos) {
    std::uint64_t bits = get_u64(s, pos);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

constexpr char kMagic[8] = {'G', 'B', 'V', 'P', 'C', 'A', '0', '1'};

} // namespace

PcaModel pca_fit(const DenseMatrix& X, std::size_t k_requested) {
    const std::size_t n = X.rows, d = X.cols;
    if (n < 2) throw DegenerateInput("PCA requires at least 2 rows, got " + std::to_string(n));
    if (d == 0) throw DegenerateInput("PCA requires at least 1 column");
    if (k_requested < 1) throw DegenerateInput("k_requested must be >= 1");
    check_finite(X);

    PcaModel m;
    m.d = d;
    const std::size_t rank_bound = std::min(n - 1, d);
    m.k = std::min(k_requested, rank_bound);
    m.k_clamped = k_requested > rank_bound;

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Xm(
        X.values.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Eigen::RowVectorXd mu = Xm.colwise().mean();
    Eigen::MatrixXd Xc = Xm.rowwise() - mu;

    m.mean.assign(mu.data(), mu.data() + d);
    const double denom = static_cast<double>(n - 1);
    m.total_variance = Xc.squaredNorm() / denom;

    Eigen::MatrixXd V(d, m.k);
    Eigen::VectorXd lambda(m.k);
    if (d <= n) {
        Eigen::MatrixXd C = (Xc.transpose() * Xc) / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
        if (es.info() != Eigen::Success) throw ConvergenceError("eigendecomposition failed to converge");
        // eigenvalues ascend; take the top k from the back
        for (std::size_t j = 0; j < m.k; ++j) {
            lambda(static_cast<Eigen::Index>(j)) = es.eigenvalues()(static_cast<Eigen::Index>(d - 1 - j));
            V.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(static_cast<Eigen::Index>(d - 1 - j));
        }
    } else {
        // n-1 < d: decompose the n x n Gram side and map back.
        Eigen::MatrixXd G = (Xc * Xc.transpose()) / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        if (es.info() != Eigen::Success) throw ConvergenceError("eigendecomposition failed to converge");
        for (std::size_t j = 0; j < m.k; ++j) {
            const Eigen::Index src = static_cast<Eigen::Index>(n - 1 - j);
            double lam = es.eigenvalues()(src);
            lambda(static_cast<Eigen::Index>(j)) = lam;
            Eigen::VectorXd dir = Xc.transpose() * es.eigenvectors().col(src);
            double norm = dir.norm();
            if (norm > 0) dir /= norm;
            V.col(static_cast<Eigen::Index>(j)) = dir;
        }
    }

    for (Eigen::Index j = 0; j < lambda.size(); ++j)
        if (lambda(j) < 0 && lambda(j) > -1e-12) lambda(j) = 0.0;

    // Sign convention: largest-magnitude entry of each component is positive
    // (ties resolved by the lowest row index).
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            double a = std::fabs(V(i, j));
            if (a > best_abs + 1e-15) {
                best_abs = a;
                best = i;
            }
        }
        if (V(best, j) < 0) V.col(j) = -V.col(j);
    }

    m.components = DenseMatrix(d, m.k);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < m.k; ++j)
            m.components.at(i, j) = V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    m.lambda.assign(lambda.data(), lambda.data() + m.k);
    return m;
}

DenseMatrix pca_transform(const PcaModel& m, const DenseMatrix& X) {
    if (X.cols != m.d)
        throw ShapeError("input has " + std::to_string(X.cols) + " columns, model expects " + std::to_string(m.d));
    check_finite(X);
    DenseMatrix Z(X.rows, m.k);
    for (std::size_t r = 0; r < X.rows; ++r) {
        for (std::size_t j = 0; j < m.k; ++j) {
            double acc = 0.0;
            for (std::size_t c = 0; c < m.d; ++c) acc += (X.at(r, c) - m.mean[c]) * m.components.at(c, j);
            Z.at(r, j) = acc;
        }
    }
    return Z;
}

std::vector<double> explained_variance_ratio(const PcaModel& m) {
    std::vector<double> out(m.k, 0.0);
    if (m.total_variance > 0.0)
        for (std::size_t j = 0; j < m.k; ++j) out[j] = m.lambda[j] / m.total_variance;
    return out;
}

std::vector<double> back_project(const PcaModel& m, std::span<const double> w) {
    if (w.size() != m.k)
        throw ShapeError("weight vector has length " + std::to_string(w.size()) + ", model has k = " +
                         std::to_string(m.k));
    std::vector<double> out(m.d, 0.0);
    for (std::size_t i = 0; i < m.d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.k; ++j) acc += m.components.at(i, j) * w[j];
        out[i] = acc;
    }
    return out;
}

std::string PcaModel::serialize() const {
    std::string out(kMagic, sizeof kMagic);
    put_u64(out, d);
    put_u64(out, k);
    put_u64(out, k_clamped ? 1 : 0);
    put_f64(out, total_variance);
    for (double v : mean) put_f64(out, v);
    for (double v : components.values) put_f64(out, v);
    for (double v : lambda) put_f64(out, v);
    return out;
}

PcaModel PcaModel::deserialize(std::string_view bytes) {
    if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw ParseError("not a PCA model file");
    std::size_t pos = sizeof kMagic;
    PcaModel m;
    m.d = get_u64(bytes, pos);
    m.k = get_u64(bytes, pos);
    m.k_clamped = get_u64(bytes, pos) != 0;
    m.total_variance = get_f64(bytes, pos);
    m.mean.resize(m.d);
    for (double& v : m.mean) v = get_f64(bytes, pos);
    m.components = DenseMatrix(m.d, m.k);
    for (double& v : m.components.values) v = get_f64(bytes, pos);
    m.lambda.resize(m.k);
    for (double& v : m.lambda) v = get_f64(bytes, pos);
    return m;
}

std::uint64_t PcaModel::hash() const { return fnv1a64(serialize()); }

void save_pca(const PcaModel& m, const std::string& path) { write_file(path, m.serialize()); }

PcaModel load_pca(const std::string& path) { return PcaModel::deserialize(read_file(path)); }

} // namespace gbv::numeric

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "celkit/embeddings.hpp"
#include "celkit/errors.hpp"
#include "celkit/rng.hpp"

namespace celkit {

// Scalar-valued network over the 4 x d state matrix:
//   relu(conv2d_same(m, kernels)) -> flatten -> affine(W, b1) -> relu
//   -> affine(H, b2) -> scalar.
// 32 filters of 3x3 over one input channel, stride 1, zero ("same") padding,
// so the flattened convolution output has 32*4*d entries.
struct QNetworkParams {
    static constexpr int kChannels = 32;
    static constexpr int kKernel = 3;

    int d = 0;
    int hidden = 0;
    std::vector<Eigen::Matrix3d> kernels;  // kChannels filters
    Eigen::MatrixXd W;                     // flat_size x hidden
    Eigen::VectorXd b1;                    // hidden
    Eigen::VectorXd H;                     // hidden
    double b2 = 0.0;

    int flat_size() const { return kChannels * 4 * d; }

    std::size_t parameter_count() const {
        return static_cast<std::size_t>(kChannels) * kKernel * kKernel +
               static_cast<std::size_t>(W.size()) + static_cast<std::size_t>(b1.size()) +
               static_cast<std::size_t>(H.size()) + 1;
    }
};

// Gradients share the parameter layout.
using QNetworkGrads = QNetworkParams;

inline QNetworkParams zero_like(const QNetworkParams& p) {
    QNetworkParams z;
    z.d = p.d;
    z.hidden = p.hidden;
    z.kernels.assign(QNetworkParams::kChannels, Eigen::Matrix3d::Zero());
    z.W = Eigen::MatrixXd::Zero(p.W.rows(), p.W.cols());
    z.b1 = Eigen::VectorXd::Zero(p.b1.size());
    z.H = Eigen::VectorXd::Zero(p.H.size());
    z.b2 = 0.0;
    return z;
}

// Glorot-uniform weights, zero biases; fill order is fixed (kernels
// row-major per filter, then W row-major, then H), so a seed pins every bit.
inline QNetworkParams init_network(int d, int hidden, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("state dimension must be >= 2");
    QNetworkParams p;
    p.d = d;
    p.hidden = hidden;
    DetRng rng(seed);
    auto glorot = [&rng](double fan_in, double fan_out) {
        return [&rng, limit = std::sqrt(6.0 / (fan_in + fan_out))]() mutable {
            return rng.uniform(-limit, limit);
        };
    };

    auto kern = glorot(1.0 * QNetworkParams::kKernel * QNetworkParams::kKernel,
                       1.0 * QNetworkParams::kChannels * QNetworkParams::kKernel *
                           QNetworkParams::kKernel);
    p.kernels.resize(QNetworkParams::kChannels);
    for (auto& k : p.kernels)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) k(i, j) = kern();

    const int flat = p.flat_size();
    auto dense1 = glorot(flat, hidden);
    p.W.resize(flat, hidden);
    for (int r = 0; r < flat; ++r)
        for (int c = 0; c < hidden; ++c) p.W(r, c) = dense1();
    p.b1 = Eigen::VectorXd::Zero(hidden);

    auto dense2 = glorot(hidden, 1);
    p.H.resize(hidden);
    for (int r = 0; r < hidden; ++r) p.H(r) = dense2();
    p.b2 = 0.0;
    return p;
}

// contiguous rows so conv output flattens straight into GEMM input
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {

inline void check_state_shape(const QNetworkParams& p, const StateMatrix& m) {
    if (m.rows() != 4 || m.cols() != p.d)
        throw ShapeMismatchError("state matrix is " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ", network expects 4x" +
                                 std::to_string(p.d));
}

// relu(conv2d_same(m)) flattened as [filter][row][col] into one row of X.
inline void conv_relu_flatten(const QNetworkParams& p, const StateMatrix& m, double* out) {
    const int d = p.d;
    for (int f = 0; f < QNetworkParams::kChannels; ++f) {
        const Eigen::Matrix3d& k = p.kernels[f];
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < d; ++c) {
                double acc = 0.0;
                for (int i = 0; i < 3; ++i) {
                    const int rr = r + i - 1;
                    if (rr < 0 || rr >= 4) continue;
                    for (int j = 0; j < 3; ++j) {
                        const int cc = c + j - 1;
                        if (cc < 0 || cc >= d) continue;
                        acc += k(i, j) * m(rr, cc);
                    }
                }
                out[(f * 4 + r) * d + c] = acc > 0.0 ? acc : 0.0;
            }
        }
    }
}

}  // namespace detail

// Reference single-state evaluation; pure and deterministic.
inline double qnet_forward(const QNetworkParams& p, const StateMatrix& m) {
    detail::check_state_shape(p, m);
    Eigen::RowVectorXd x(p.flat_size());
    detail::conv_relu_flatten(p, m, x.data());
    Eigen::RowVectorXd z1 = x * p.W + p.b1.transpose();
    Eigen::RowVectorXd a1 = z1.cwiseMax(0.0);
    return a1.dot(p.H) + p.b2;
}

// Throughput path: one GEMM over the whole candidate set. Every production
// caller scores through this function, so seeded runs stay bit-identical.
inline Eigen::VectorXd qnet_forward_batch(const QNetworkParams& p,
                                          const std::vector<StateMatrix>& states) {
    const Eigen::Index batch = static_cast<Eigen::Index>(states.size());
    RowMatrixXd x(batch, p.flat_size());
    for (Eigen::Index b = 0; b < batch; ++b) {
        detail::check_state_shape(p, states[b]);
        detail::conv_relu_flatten(p, states[b], x.row(b).data());
    }
    Eigen::MatrixXd a1 = ((x * p.W).rowwise() + p.b1.transpose()).cwiseMax(0.0);
    return (a1 * p.H).array() + p.b2;
}

inline double qnet_loss(const QNetworkParams& p, const std::vector<StateMatrix>& states,
                        const Eigen::VectorXd& targets) {
    if (states.empty()) throw ShapeMismatchError("empty training batch");
    if (targets.size() != static_cast<Eigen::Index>(states.size()))
        throw ShapeMismatchError("batch/target size mismatch");
    Eigen::VectorXd out = qnet_forward_batch(p, states);
    return (out - targets).squaredNorm() / static_cast<double>(states.size());
}

// Mean squared error against precomputed targets, with exact analytic
// gradients (validated against central finite differences in the tests).
inline std::pair<double, QNetworkGrads> loss_and_gradients(const QNetworkParams& p,
                                                           const std::vector<StateMatrix>& states,
                                                           const Eigen::VectorXd& targets) {
    if (states.empty()) throw ShapeMismatchError("empty training batch");
    if (targets.size() != static_cast<Eigen::Index>(states.size()))
        throw ShapeMismatchError("batch/target size mismatch");

    const Eigen::Index batch = static_cast<Eigen::Index>(states.size());
    const int flat = p.flat_size();
    const int d = p.d;

    RowMatrixXd x(batch, flat);
    for (Eigen::Index b = 0; b < batch; ++b) {
        detail::check_state_shape(p, states[b]);
        detail::conv_relu_flatten(p, states[b], x.row(b).data());
    }
    Eigen::MatrixXd z1 = (x * p.W).rowwise() + p.b1.transpose();
    Eigen::MatrixXd a1 = z1.cwiseMax(0.0);
    Eigen::VectorXd out = (a1 * p.H).array() + p.b2;

    Eigen::VectorXd err = out - targets;
    const double loss = err.squaredNorm() / static_cast<double>(batch);

    QNetworkGrads g = zero_like(p);
    Eigen::VectorXd dout = err * (2.0 / static_cast<double>(batch));
    g.b2 = dout.sum();
    g.H = a1.transpose() * dout;
    Eigen::MatrixXd dz1 =
        (dout * p.H.transpose()).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
    g.W = x.transpose() * dz1;
    g.b1 = dz1.colwise().sum().transpose();

    Eigen::MatrixXd dx = dz1 * p.W.transpose();
    for (Eigen::Index b = 0; b < batch; ++b) {
        const StateMatrix& m = states[b];
        for (int f = 0; f < QNetworkParams::kChannels; ++f) {
            Eigen::Matrix3d& gk = g.kernels[f];
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < d; ++c) {
                    const Eigen::Index idx = (f * 4 + r) * d + c;
                    if (x(b, idx) <= 0.0) continue;  // relu gate on the conv output
                    const double upstream = dx(b, idx);
                    if (upstream == 0.0) continue;
                    for (int i = 0; i < 3; ++i) {
                        const int rr = r + i - 1;
                        if (rr < 0 || rr >= 4) continue;
                        for (int j = 0; j < 3; ++j) {
                            const int cc = c + j - 1;
                            if (cc < 0 || cc >= d) continue;
                            gk(i, j) += upstream * m(rr, cc);
                        }
                    }
                }
            }
        }
    }
    return {loss, std::move(g)};
}

struct AdamState {
    QNetworkGrads m;
    QNetworkGrads v;
    long step = 0;

    static AdamState for_params(const QNetworkParams& p) {
        return AdamState{zero_like(p), zero_like(p), 0};
    }
};

// Standard bias-corrected ADAM (beta1=0.9, beta2=0.999, eps=1e-8).
inline void adam_step(QNetworkParams& p, const QNetworkGrads& g, AdamState& state,
                      double learning_rate) {
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    if (g.d != p.d || g.hidden != p.hidden) throw ShapeMismatchError("gradient shape mismatch");
    state.step += 1;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));

    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
        m = kBeta1 * m + (1.0 - kBeta1) * grad;
        v = (kBeta2 * v.array() + (1.0 - kBeta2) * grad.array().square()).matrix();
        param -= (learning_rate * (m / c1).array() / ((v / c2).array().sqrt() + kEps)).matrix();
    };
    for (int f = 0; f < QNetworkParams::kChannels; ++f)
        update(p.kernels[f], g.kernels[f], state.m.kernels[f], state.v.kernels[f]);
    update(p.W, g.W, state.m.W, state.v.W);
    update(p.b1, g.b1, state.m.b1, state.v.b1);
    update(p.H, g.H, state.m.H, state.v.H);
    {
        double& m = state.m.b2;
        double& v = state.v.b2;
        m = kBeta1 * m + (1.0 - kBeta1) * g.b2;
        v = kBeta2 * v + (1.0 - kBeta2) * g.b2 * g.b2;
        p.b2 -= learning_rate * (m / c1) / (std::sqrt(v / c2) + kEps);
    }
}

// ---- checkpoint io ---------------------------------------------------------
//
// Versioned text document: schema id, d, hidden, then each tensor as
// "tensor <name> <dims...>" followed by row-major %.17g values. Loading
// validates the full shape sequence, so a checkpoint only opens against the
// geometry it was trained with.

namespace detail {

inline void write_values(std::ostream& out, const double* v, std::size_t n) {
    char buf[64];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        out << buf << (i + 1 == n ? '\n' : ' ');
    }
}

}  // namespace detail

inline void save_checkpoint(const QNetworkParams& p, std::ostream& out) {
    out << "celkit-qnet 1\n";
    out << "d " << p.d << "\n";
    out << "hidden " << p.hidden << "\n";
    out << "tensor kernels " << QNetworkParams::kChannels << " 3 3\n";
    for (const auto& k : p.kernels) {
        // Matrix3d is column-major; emit row-major explicitly
        double row_major[9];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) row_major[i * 3 + j] = k(i, j);
        detail::write_values(out, row_major, 9);
    }
    out << "tensor W " << p.W.rows() << " " << p.W.cols() << "\n";
    std::vector<double> row(static_cast<std::size_t>(p.W.cols()));
    for (Eigen::Index r = 0; r < p.W.rows(); ++r) {
        for (Eigen::Index c = 0; c < p.W.cols(); ++c) row[static_cast<std::size_t>(c)] = p.W(r, c);
        detail::write_values(out, row.data(), row.size());
    }
    out << "tensor b1 " << p.b1.size() << "\n";
    detail::write_values(out, p.b1.data(), static_cast<std::size_t>(p.b1.size()));
    out << "tensor H " << p.H.size() << "\n";
    detail::write_values(out, p.H.data(), static_cast<std::size_t>(p.H.size()));
    out << "tensor b2 1\n";
    detail::write_values(out, &p.b2, 1);
}

inline void save_checkpoint(const QNetworkParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    save_checkpoint(p, out);
}

namespace detail {

inline void expect_tensor_header(std::istream& in, const std::string& name,
                                 const std::vector<long>& dims) {
    std::string kw, got;
    if (!(in >> kw >> got) || kw != "tensor" || got != name)
        throw FormatError("checkpoint: expected tensor " + name);
    for (long want : dims) {
        long dim = 0;
        if (!(in >> dim) || dim != want)
            throw ShapeMismatchError("checkpoint: tensor " + name + " has unexpected shape");
    }
}

inline double read_value(std::istream& in, const char* what) {
    double v = 0.0;
    if (!(in >> v)) throw FormatError(std::string("checkpoint: truncated ") + what);
    return v;
}

}  // namespace detail

inline QNetworkParams load_checkpoint(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "celkit-qnet" || version != 1)
        throw FormatError("not a celkit-qnet checkpoint");
    std::string kw;
    QNetworkParams p;
    if (!(in >> kw >> p.d) || kw != "d" || p.d < 2) throw FormatError("checkpoint: bad d");
    if (!(in >> kw >> p.hidden) || kw != "hidden" || p.hidden < 1)
        throw FormatError("checkpoint: bad hidden");

    detail::expect_tensor_header(in, "kernels", {QNetworkParams::kChannels, 3, 3});
    p.kernels.resize(QNetworkParams::kChannels);
    for (auto& k : p.kernels)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) k(i, j) = detail::read_value(in, "kernels");

    detail::expect_tensor_header(in, "W", {p.flat_size(), p.hidden});
    p.W.resize(p.flat_size(), p.hidden);
    for (Eigen::Index r = 0; r < p.W.rows(); ++r)
        for (Eigen::Index c = 0; c < p.W.cols(); ++c) p.W(r, c) = detail::read_value(in, "W");

    detail::expect_tensor_header(in, "b1", {p.hidden});
    p.b1.resize(p.hidden);
    for (Eigen::Index i = 0; i < p.b1.size(); ++i) p.b1(i) = detail::read_value(in, "b1");

    detail::expect_tensor_header(in, "H", {p.hidden});
    p.H.resize(p.hidden);
    for (Eigen::Index i = 0; i < p.H.size(); ++i) p.H(i) = detail::read_value(in, "H");

    detail::expect_tensor_header(in, "b2", {1});
    p.b2 = detail::read_value(in, "b2");
    return p;
}

inline QNetworkParams load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    return load_checkpoint(in);
}

}  // namespace celkit

// Copyright 2026 The amcspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "amc/dnn.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>

#include "amc/error.hpp"
#include "amc/seed.hpp"

namespace amc {

std::string to_string(const Shape& s)
{
    return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" +
           std::to_string(s.channels);
}

namespace {

using ConstMap = Eigen::Map<const Matrix>;
using MutMap = Eigen::Map<Matrix>;

void he_init(Parameter& p, std::size_t fan_in, std::uint64_t seed)
{
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
    for (Eigen::Index i = 0; i < p.value.size(); ++i)
        p.value.data()[i] = g(rng);
}

class ConvLayer final : public Layer {
public:
    ConvLayer(Shape in, std::size_t kernel, std::size_t filters, std::size_t stride,
              std::uint64_t seed)
        : in_(in), k_(kernel), stride_(stride), pad_(kernel / 2)
    {
        if (kernel == 0 || filters == 0 || stride == 0)
            throw ShapeError("conv: kernel, channels and stride must be positive");
        if (in.height + 2 * pad_ < k_ || in.width + 2 * pad_ < k_)
            throw ShapeError("conv: kernel larger than padded input " + to_string(in));
        out_ = {(in.height + 2 * pad_ - k_) / stride_ + 1, (in.width + 2 * pad_ - k_) / stride_ + 1,
                filters};
        const std::size_t fan_in = k_ * k_ * in.channels;
        w_.value.resize(static_cast<Eigen::Index>(filters), static_cast<Eigen::Index>(fan_in));
        w_.grad = Matrix::Zero(w_.value.rows(), w_.value.cols());
        w_.name = "conv.weight";
        he_init(w_, fan_in, seed);
        b_.value = Matrix::Zero(static_cast<Eigen::Index>(filters), 1);
        b_.grad = b_.value;
        b_.decay = false;
        b_.name = "conv.bias";
    }

    Shape output_shape() const override { return out_; }

    void forward(const Matrix& in, Matrix& out, const Pass&) const override
    {
        const auto batch = in.cols();
        const auto pixels = static_cast<Eigen::Index>(out_.height * out_.width);
        out.resize(static_cast<Eigen::Index>(out_.size()), batch);
        Matrix col(w_.value.cols(), pixels);
        for (Eigen::Index b = 0; b < batch; ++b) {
            im2col(in.col(b).data(), col);
            MutMap o(out.col(b).data(), w_.value.rows(), pixels);
            o.noalias() = w_.value * col;
            o.colwise() += b_.value.col(0);
        }
    }

    void backward(const Matrix& in, const Matrix&, const Matrix& dout, Matrix* din,
                  const Pass&) override
    {
        const auto batch = in.cols();
        const auto pixels = static_cast<Eigen::Index>(out_.height * out_.width);
        Matrix col(w_.value.cols(), pixels);
        Matrix dcol;
        if (din)
            din->setZero(in.rows(), batch);
        for (Eigen::Index b = 0; b < batch; ++b) {
            im2col(in.col(b).data(), col);
            ConstMap d(dout.col(b).data(), w_.value.rows(), pixels);
            w_.grad.noalias() += d * col.transpose();
            b_.grad.col(0) += d.rowwise().sum();
            if (din) {
                dcol.noalias() = w_.value.transpose() * d;
                col2im_add(dcol, din->col(b).data());
            }
        }
    }

    std::vector<Parameter*> parameters() override { return {&w_, &b_}; }
    std::unique_ptr<Layer> clone() const override { return std::make_unique<ConvLayer>(*this); }

private:
    // Column p of col holds the receptive field of output pixel p, ordered
    // (ky, kx, c) with c fastest. Out-of-image taps are zero.
    void im2col(const double* x, Matrix& col) const
    {
        const std::size_t c = in_.channels;
        std::size_t p = 0;
        for (std::size_t oy = 0; oy < out_.height; ++oy) {
            for (std::size_t ox = 0; ox < out_.width; ++ox, ++p) {
                double* dst = col.col(static_cast<Eigen::Index>(p)).data();
                for (std::size_t ky = 0; ky < k_; ++ky) {
                    const auto iy = static_cast<std::ptrdiff_t>(oy * stride_ + ky) -
                                    static_cast<std::ptrdiff_t>(pad_);
                    for (std::size_t kx = 0; kx < k_; ++kx, dst += c) {
                        const auto ix = static_cast<std::ptrdiff_t>(ox * stride_ + kx) -
                                        static_cast<std::ptrdiff_t>(pad_);
                        if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(in_.height) ||
                            ix >= static_cast<std::ptrdiff_t>(in_.width)) {
                            std::fill(dst, dst + c, 0.0);
                        } else {
                            const double* src =
                                x + (static_cast<std::size_t>(iy) * in_.width +
                                     static_cast<std::size_t>(ix)) * c;
                            std::copy(src, src + c, dst);
                        }
                    }
                }
            }
        }
    }

    void col2im_add(const Matrix& dcol, double* dx) const
    {
        const std::size_t c = in_.channels;
        std::size_t p = 0;
        for (std::size_t oy = 0; oy < out_.height; ++oy) {
            for (std::size_t ox = 0; ox < out_.width; ++ox, ++p) {
                const double* src = dcol.col(static_cast<Eigen::Index>(p)).data();
                for (std::size_t ky = 0; ky < k_; ++ky) {
                    const auto iy = static_cast<std::ptrdiff_t>(oy * stride_ + ky) -
                                    static_cast<std::ptrdiff_t>(pad_);
                    for (std::size_t kx = 0; kx < k_; ++kx, src += c) {
                        const auto ix = static_cast<std::ptrdiff_t>(ox * stride_ + kx) -
                                        static_cast<std::ptrdiff_t>(pad_);
                        if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(in_.height) ||
                            ix >= static_cast<std::ptrdiff_t>(in_.width))
                            continue;
                        double* dst = dx + (static_cast<std::size_t>(iy) * in_.width +
                                            static_cast<std::size_t>(ix)) * c;
                        for (std::size_t i = 0; i < c; ++i)
                            dst[i] += src[i];
                    }
                }
            }
        }
    }

    Shape in_;
    Shape out_;
    std::size_t k_;
    std::size_t stride_;
    std::size_t pad_;
    Parameter w_;
    Parameter b_;
};

class ReluLayer final : public Layer {
public:
    explicit ReluLayer(Shape in) : shape_(in) {}

    Shape output_shape() const override { return shape_; }

    void forward(const Matrix& in, Matrix& out, const Pass&) const override
    {
        out = in.cwiseMax(0.0);
    }

    void backward(const Matrix& in, const Matrix&, const Matrix& dout, Matrix* din,
                  const Pass&) override
    {
        if (din)
            *din = (in.array() > 0.0).select(dout, 0.0);
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<ReluLayer>(*this); }

private:
    Shape shape_;
};

class MaxPoolLayer final : public Layer {
public:
    MaxPoolLayer(Shape in, std::size_t kernel, std::size_t stride)
        : in_(in), k_(kernel), stride_(stride)
    {
        if (kernel == 0 || stride == 0)
            throw ShapeError("maxpool: kernel and stride must be positive");
        if (in.height < k_ || in.width < k_)
            throw ShapeError("maxpool: window larger than input " + to_string(in));
        out_ = {(in.height - k_) / stride_ + 1, (in.width - k_) / stride_ + 1, in.channels};
    }

    Shape output_shape() const override { return out_; }

    void forward(const Matrix& in, Matrix& out, const Pass&) const override
    {
        out.resize(static_cast<Eigen::Index>(out_.size()), in.cols());
        for (Eigen::Index b = 0; b < in.cols(); ++b) {
            const double* x = in.col(b).data();
            double* y = out.col(b).data();
            for (std::size_t oy = 0; oy < out_.height; ++oy)
                for (std::size_t ox = 0; ox < out_.width; ++ox)
                    for (std::size_t c = 0; c < in_.channels; ++c)
                        y[(oy * out_.width + ox) * in_.channels + c] = x[argmax(x, oy, ox, c)];
        }
    }

    void backward(const Matrix& in, const Matrix&, const Matrix& dout, Matrix* din,
                  const Pass&) override
    {
        if (!din)
            return;
        din->setZero(in.rows(), in.cols());
        for (Eigen::Index b = 0; b < in.cols(); ++b) {
            const double* x = in.col(b).data();
            const double* dy = dout.col(b).data();
            double* dx = din->col(b).data();
            for (std::size_t oy = 0; oy < out_.height; ++oy)
                for (std::size_t ox = 0; ox < out_.width; ++ox)
                    for (std::size_t c = 0; c < in_.channels; ++c)
                        dx[argmax(x, oy, ox, c)] += dy[(oy * out_.width + ox) * in_.channels + c];
        }
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<MaxPoolLayer>(*this); }

private:
    // First position attaining the window maximum; backward routes through the same one.
    std::size_t argmax(const double* x, std::size_t oy, std::size_t ox, std::size_t c) const
    {
        std::size_t best = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (std::size_t ky = 0; ky < k_; ++ky)
            for (std::size_t kx = 0; kx < k_; ++kx) {
                const std::size_t idx =
                    ((oy * stride_ + ky) * in_.width + (ox * stride_ + kx)) * in_.channels + c;
                if (x[idx] > best_v || (ky == 0 && kx == 0)) {
                    best_v = x[idx];
                    best = idx;
                }
            }
        return best;
    }

    Shape in_;
    Shape out_;
    std::size_t k_;
    std::size_t stride_;
};

class DenseLayer final : public Layer {
public:
    DenseLayer(Shape in, std::size_t units, std::uint64_t seed) : out_{1, 1, units}
    {
        if (units == 0)
            throw ShapeError("dense: units must be positive");
        const std::size_t fan_in = in.size();
        w_.value.resize(static_cast<Eigen::Index>(units), static_cast<Eigen::Index>(fan_in));
        w_.grad = Matrix::Zero(w_.value.rows(), w_.value.cols());
        w_.name = "dense.weight";
        he_init(w_, fan_in, seed);
        b_.value = Matrix::Zero(static_cast<Eigen::Index>(units), 1);
        b_.grad = b_.value;
        b_.decay = false;
        b_.name = "dense.bias";
    }

    Shape output_shape() const override { return out_; }

    void forward(const Matrix& in, Matrix& out, const Pass&) const override
    {
        out.noalias() = w_.value * in;
        out.colwise() += b_.value.col(0);
    }

    void backward(const Matrix& in, const Matrix&, const Matrix& dout, Matrix* din,
                  const Pass&) override
    {
        w_.grad.noalias() += dout * in.transpose();
        b_.grad.col(0) += dout.rowwise().sum();
        if (din)
            din->noalias() = w_.value.transpose() * dout;
    }

    std::vector<Parameter*> parameters() override { return {&w_, &b_}; }
    std::unique_ptr<Layer> clone() const override { return std::make_unique<DenseLayer>(*this); }

private:
    Shape out_;
    Parameter w_;
    Parameter b_;
};

class DropoutLayer final : public Layer {
public:
    DropoutLayer(Shape in, double rate, std::uint64_t salt) : shape_(in), rate_(rate), salt_(salt)
    {
        if (!(rate >= 0.0 && rate < 1.0))
            throw ShapeError("dropout: rate must lie in [0, 1)");
    }

    Shape output_shape() const override { return shape_; }

    void forward(const Matrix& in, Matrix& out, const Pass& pass) const override
    {
        out = in;
        if (!pass.training || rate_ == 0.0)
            return;
        const double scale = 1.0 / (1.0 - rate_);
        for (Eigen::Index i = 0; i < out.size(); ++i)
            out.data()[i] *= keep(pass, i) ? scale : 0.0;
    }

    void backward(const Matrix&, const Matrix&, const Matrix& dout, Matrix* din,
                  const Pass& pass) override
    {
        if (!din)
            return;
        *din = dout;
        if (!pass.training || rate_ == 0.0)
            return;
        const double scale = 1.0 / (1.0 - rate_);
        for (Eigen::Index i = 0; i < din->size(); ++i)
            din->data()[i] *= keep(pass, i) ? scale : 0.0;
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<DropoutLayer>(*this); }

private:
    // Counter-based mask: a pure function of (pass key, layer, element).
    bool keep(const Pass& pass, Eigen::Index i) const
    {
        const std::uint64_t h =
            derive_seed(pass.key, {seed_tag::kDropout, salt_, static_cast<std::uint64_t>(i)});
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        return u >= rate_;
    }

    Shape shape_;
    double rate_;
    std::uint64_t salt_;
};

class SoftmaxLayer final : public Layer {
public:
    explicit SoftmaxLayer(Shape in) : shape_(in) {}

    Shape output_shape() const override { return shape_; }

    void forward(const Matrix& in, Matrix& out, const Pass&) const override
    {
        out.resize(in.rows(), in.cols());
        for (Eigen::Index b = 0; b < in.cols(); ++b) {
            const double m = in.col(b).maxCoeff();
            out.col(b) = (in.col(b).array() - m).exp();
            out.col(b) /= out.col(b).sum();
        }
    }

    void backward(const Matrix&, const Matrix& out, const Matrix& dout, Matrix* din,
                  const Pass&) override
    {
        if (!din)
            return;
        din->resize(out.rows(), out.cols());
        for (Eigen::Index b = 0; b < out.cols(); ++b) {
            const double dot = out.col(b).dot(dout.col(b));
            din->col(b) = out.col(b).array() * (dout.col(b).array() - dot);
        }
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<SoftmaxLayer>(*this); }

private:
    Shape shape_;
};

} // namespace

LayerSpec LayerSpec::conv(std::size_t kernel, std::size_t out_channels, std::size_t stride)
{
    return {Kind::Conv, kernel, out_channels, stride, 0.0};
}
LayerSpec LayerSpec::relu() { return {Kind::Relu, 0, 0, 1, 0.0}; }
LayerSpec LayerSpec::maxpool(std::size_t kernel, std::size_t stride)
{
    return {Kind::MaxPool, kernel, 0, stride, 0.0};
}
LayerSpec LayerSpec::dense(std::size_t units) { return {Kind::Dense, 0, units, 1, 0.0}; }
LayerSpec LayerSpec::dropout(double rate) { return {Kind::Dropout, 0, 0, 1, rate}; }
LayerSpec LayerSpec::softmax() { return {Kind::Softmax, 0, 0, 1, 0.0}; }

std::string_view to_string(LayerSpec::Kind k) noexcept
{
    switch (k) {
    case LayerSpec::Kind::Conv: return "conv";
    case LayerSpec::Kind::Relu: return "relu";
    case LayerSpec::Kind::MaxPool: return "maxpool";
    case LayerSpec::Kind::Dense: return "dense";
    case LayerSpec::Kind::Dropout: return "dropout";
    case LayerSpec::Kind::Softmax: return "softmax";
    }
    return "?";
}

LayerSpec::Kind parse_layer_kind(std::string_view s)
{
    for (auto k : {LayerSpec::Kind::Conv, LayerSpec::Kind::Relu, LayerSpec::Kind::MaxPool,
                   LayerSpec::Kind::Dense, LayerSpec::Kind::Dropout, LayerSpec::Kind::Softmax})
        if (to_string(k) == s)
            return k;
    throw ParameterError("unknown layer kind '" + std::string(s) + "'");
}

NetSpec NetSpec::default_net(std::size_t num_classes, Shape input, std::uint64_t init_seed)
{
    NetSpec spec;
    spec.input = input;
    spec.init_seed = init_seed;
    spec.layers = {
        LayerSpec::conv(3, 16), LayerSpec::relu(), LayerSpec::maxpool(2, 2),
        LayerSpec::conv(3, 32), LayerSpec::relu(), LayerSpec::maxpool(2, 2),
        LayerSpec::conv(3, 64), LayerSpec::relu(), LayerSpec::maxpool(2, 2),
        LayerSpec::dense(128),  LayerSpec::relu(), LayerSpec::dense(num_classes),
        LayerSpec::softmax(),
    };
    return spec;
}

Network::Network(NetSpec spec) : spec_(std::move(spec))
{
    if (spec_.input.size() == 0)
        throw ShapeError("network input shape must be non-empty");
    if (spec_.layers.empty() || spec_.layers.back().kind != LayerSpec::Kind::Softmax)
        throw ShapeError("the final layer must be softmax");

    Shape shape = spec_.input;
    for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
        const auto& ls = spec_.layers[i];
        const std::uint64_t seed = derive_seed(spec_.init_seed, {seed_tag::kInit, i});
        std::unique_ptr<Layer> layer;
        switch (ls.kind) {
        case LayerSpec::Kind::Conv:
            layer = std::make_unique<ConvLayer>(shape, ls.kernel, ls.units, ls.stride, seed);
            break;
        case LayerSpec::Kind::Relu:
            layer = std::make_unique<ReluLayer>(shape);
            break;
        case LayerSpec::Kind::MaxPool:
            layer = std::make_unique<MaxPoolLayer>(shape, ls.kernel, ls.stride);
            break;
        case LayerSpec::Kind::Dense:
            layer = std::make_unique<DenseLayer>(shape, ls.units, seed);
            break;
        case LayerSpec::Kind::Dropout:
            layer = std::make_unique<DropoutLayer>(shape, ls.rate, i);
            break;
        case LayerSpec::Kind::Softmax:
            if (i + 1 != spec_.layers.size())
                throw ShapeError("softmax is only supported as the final layer");
            if (shape.height != 1 || shape.width != 1)
                throw ShapeError("softmax input must be a flat vector, got " + to_string(shape));
            layer = std::make_unique<SoftmaxLayer>(shape);
            break;
        }
        shape = layer->output_shape();
        layers_.push_back(std::move(layer));
    }
    num_classes_ = shape.size();
}

Network::Network(const Network& other) : spec_(other.spec_), num_classes_(other.num_classes_)
{
    for (const auto& l : other.layers_)
        layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& other)
{
    if (this != &other) {
        Network tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

void Network::check_batch(const Matrix& batch) const
{
    if (batch.rows() != static_cast<Eigen::Index>(spec_.input.size()))
        throw ShapeError("batch rows " + std::to_string(batch.rows()) +
                         " do not match network input " + to_string(spec_.input));
    if (batch.cols() == 0)
        throw ShapeError("empty batch");
}

void Network::run_forward(const Matrix& batch, std::vector<Matrix>& acts, const Pass& pass) const
{
    acts.resize(layers_.size() + 1);
    acts[0] = batch;
    for (std::size_t i = 0; i < layers_.size(); ++i)
        layers_[i]->forward(acts[i], acts[i + 1], pass);
}

Matrix Network::forward(const Matrix& batch) const
{
    check_batch(batch);
    std::vector<Matrix> acts;
    run_forward(batch, acts, Pass{});
    return std::move(acts.back());
}

namespace {

double cross_entropy(const Matrix& logits, std::span<const std::size_t> labels)
{
    double total = 0.0;
    for (Eigen::Index b = 0; b < logits.cols(); ++b) {
        const double m = logits.col(b).maxCoeff();
        const double lse = m + std::log((logits.col(b).array() - m).exp().sum());
        total += lse - logits(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(b)]), b);
    }
    return total / static_cast<double>(logits.cols());
}

void check_labels(std::span<const std::size_t> labels, Eigen::Index batch, std::size_t k)
{
    if (static_cast<Eigen::Index>(labels.size()) != batch)
        throw ShapeError("label count does not match batch size");
    for (auto l : labels)
        if (l >= k)
            throw ShapeError("label " + std::to_string(l) + " outside 0.." +
                             std::to_string(k - 1));
}

} // namespace

double Network::loss(const Matrix& batch, std::span<const std::size_t> labels, double l2) const
{
    check_batch(batch);
    check_labels(labels, batch.cols(), num_classes_);
    std::vector<Matrix> acts;
    run_forward(batch, acts, Pass{});
    double value = cross_entropy(acts[acts.size() - 2], labels);
    if (l2 != 0.0)
        value += 0.5 * l2 * weight_norm_sq(*this);
    return value;
}

double Network::loss_and_grads(const Matrix& batch, std::span<const std::size_t> labels, double l2,
                               const Pass& pass)
{
    check_batch(batch);
    check_labels(labels, batch.cols(), num_classes_);

    for (auto* p : parameters())
        p->grad.setZero();

    std::vector<Matrix> acts;
    run_forward(batch, acts, pass);
    const std::size_t n = layers_.size();
    const Matrix& logits = acts[n - 1];
    const Matrix& probs = acts[n];

    double value = cross_entropy(logits, labels);

    // Softmax and cross-entropy combine to (p - y) / B at the logits.
    Matrix grad = probs;
    for (Eigen::Index b = 0; b < grad.cols(); ++b)
        grad(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(b)]), b) -= 1.0;
    grad /= static_cast<double>(batch.cols());

    Matrix next;
    for (std::size_t i = n - 1; i-- > 0;) {
        layers_[i]->backward(acts[i], acts[i + 1], grad, i > 0 ? &next : nullptr, pass);
        if (i > 0)
            std::swap(grad, next);
    }

    if (l2 != 0.0) {
        for (auto* p : parameters()) {
            if (!p->decay)
                continue;
            value += 0.5 * l2 * p->value.squaredNorm();
            p->grad += l2 * p->value;
        }
    }
    return value;
}

std::vector<Parameter*> Network::parameters()
{
    std::vector<Parameter*> out;
    for (auto& l : layers_)
        for (auto* p : l->parameters())
            out.push_back(p);
    return out;
}

std::vector<const Parameter*> Network::parameters() const
{
    std::vector<const Parameter*> out;
    for (const auto& l : layers_)
        for (auto* p : l->parameters())
            out.push_back(p);
    return out;
}

std::size_t Network::parameter_count() const
{
    std::size_t n = 0;
    for (const auto* p : parameters())
        n += static_cast<std::size_t>(p->value.size());
    return n;
}

std::vector<Matrix> Network::snapshot() const
{
    std::vector<Matrix> out;
    for (const auto* p : parameters())
        out.push_back(p->value);
    return out;
}

void Network::restore(const std::vector<Matrix>& values)
{
    auto params = parameters();
    if (params.size() != values.size())
        throw ShapeError("restore: parameter count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i]->value.rows() != values[i].rows() ||
            params[i]->value.cols() != values[i].cols())
            throw ShapeError("restore: shape mismatch for " + params[i]->name);
        params[i]->value = values[i];
    }
}

Matrix make_batch(const ImageSet& set, std::span<const std::size_t> indices)
{
    const auto rows = static_cast<Eigen::Index>(set.shape.size());
    Matrix batch(rows, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const auto& px = set.items.at(indices[j]).pixels;
        if (static_cast<Eigen::Index>(px.size()) != rows)
            throw ShapeError("image size does not match set shape " + to_string(set.shape));
        batch.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Eigen::VectorXd>(px.data(), rows);
    }
    return batch;
}

double weight_norm_sq(const Network& net)
{
    double acc = 0.0;
    for (const auto* p : net.parameters())
        if (p->decay)
            acc += p->value.squaredNorm();
    return acc;
}

} // namespace amc

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

#ifndef AMC_DNN_HPP_
#define AMC_DNN_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "amc/tensor.hpp"

namespace amc {

/** @brief Activations for a batch: one column per sample, rows in HWC order. */
using Matrix = Eigen::MatrixXd;

struct LayerSpec {
    enum class Kind { Conv, Relu, MaxPool, Dense, Dropout, Softmax };

    Kind kind = Kind::Relu;
    std::size_t kernel = 0;
    /** Output channels for Conv, units for Dense. */
    std::size_t units = 0;
    std::size_t stride = 1;
    double rate = 0.0;

    static LayerSpec conv(std::size_t kernel, std::size_t out_channels, std::size_t stride = 1);
    static LayerSpec relu();
    static LayerSpec maxpool(std::size_t kernel, std::size_t stride);
    static LayerSpec dense(std::size_t units);
    static LayerSpec dropout(double rate);
    static LayerSpec softmax();

    bool operator==(const LayerSpec&) const = default;
};

std::string_view to_string(LayerSpec::Kind k) noexcept;
LayerSpec::Kind parse_layer_kind(std::string_view s);

struct NetSpec {
    Shape input{64, 64, 1};
    std::vector<LayerSpec> layers;
    std::uint64_t init_seed = 0;

    /** conv3x3/16 relu pool2, conv3x3/32 relu pool2, conv3x3/64 relu pool2,
     *  dense128 relu, dense(K), softmax. */
    static NetSpec default_net(std::size_t num_classes, Shape input = {64, 64, 1},
                               std::uint64_t init_seed = 0);

    bool operator==(const NetSpec&) const = default;
};

/** @brief A trainable tensor with its gradient accumulator. */
struct Parameter {
    Matrix value;
    Matrix grad;
    /** Weights take L2 decay; biases do not. */
    bool decay = true;
    std::string name;
};

/** @brief Per-pass context: training flag and the key that seeds dropout masks. */
struct Pass {
    bool training = false;
    std::uint64_t key = 0;
};

class Layer {
public:
    virtual ~Layer() = default;

    virtual Shape output_shape() const = 0;
    virtual void forward(const Matrix& in, Matrix& out, const Pass& pass) const = 0;
    /** Accumulates parameter gradients; writes din when it is non-null. */
    virtual void backward(const Matrix& in, const Matrix& out, const Matrix& dout, Matrix* din,
                          const Pass& pass) = 0;
    virtual std::vector<Parameter*> parameters() { return {}; }
    virtual std::unique_ptr<Layer> clone() const = 0;
};

/** @brief Sequential network built from a NetSpec. Shapes are checked at construction. */
class Network {
public:
    explicit Network(NetSpec spec);
    Network(const Network& other);
    Network& operator=(const Network& other);
    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;

    const NetSpec& spec() const { return spec_; }
    Shape input_shape() const { return spec_.input; }
    std::size_t num_classes() const { return num_classes_; }
    std::size_t num_layers() const { return layers_.size(); }

    /** @brief Class probabilities, one column per sample (K x B). */
    Matrix forward(const Matrix& batch) const;

    /** @brief Mean cross-entropy plus (l2/2) * sum of squared weights; no gradients. */
    double loss(const Matrix& batch, std::span<const std::size_t> labels, double l2) const;

    /** @brief Same objective as loss(); fills every Parameter::grad. */
    double loss_and_grads(const Matrix& batch, std::span<const std::size_t> labels, double l2,
                          const Pass& pass = {});

    std::vector<Parameter*> parameters();
    std::vector<const Parameter*> parameters() const;
    std::size_t parameter_count() const;

    /** @brief Copy of every parameter value, in parameters() order. */
    std::vector<Matrix> snapshot() const;
    void restore(const std::vector<Matrix>& values);

private:
    void check_batch(const Matrix& batch) const;
    void run_forward(const Matrix& batch, std::vector<Matrix>& acts, const Pass& pass) const;

    NetSpec spec_;
    std::vector<std::unique_ptr<Layer>> layers_;
    std::size_t num_classes_ = 0;
};

/** @brief Gather images into a batch matrix. */
Matrix make_batch(const ImageSet& set, std::span<const std::size_t> indices);

/** @brief Sum of squared decayed weights. */
double weight_norm_sq(const Network& net);

} // namespace amc

#endif /* AMC_DNN_HPP_ */

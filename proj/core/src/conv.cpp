// Copyright 2026 The IGAF Authors. All Rights Reserved.
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

#include <Eigen/Core>

#include <vector>

#include "igaf/error.hpp"
#include "igaf/ops.hpp"

namespace igaf::ops {
namespace {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMatrix<T>>;

struct ConvGeometry {
  std::int64_t cin, h, w;
  std::int64_t cout, k;
  std::int64_t out_h, out_w;
  int padding, dilation;

  std::int64_t rows() const { return cin * k * k; }
  std::int64_t cols() const { return out_h * out_w; }
  bool pointwise() const { return k == 1 && padding == 0; }
};

// Unfolds one image [cin, h, w] into [cin*k*k, out_h*out_w].
template <typename T>
void im2col(const T* image, const ConvGeometry& g, T* col) {
  for (std::int64_t c = 0; c < g.cin; ++c) {
    const T* plane = image + c * g.h * g.w;
    for (std::int64_t ky = 0; ky < g.k; ++ky) {
      for (std::int64_t kx = 0; kx < g.k; ++kx) {
        T* row = col + ((c * g.k + ky) * g.k + kx) * g.cols();
        const std::int64_t dy = ky * g.dilation - g.padding;
        const std::int64_t dx = kx * g.dilation - g.padding;
        for (std::int64_t oy = 0; oy < g.out_h; ++oy) {
          const std::int64_t iy = oy + dy;
          T* dst = row + oy * g.out_w;
          if (iy < 0 || iy >= g.h) {
            std::fill_n(dst, g.out_w, T(0));
            continue;
          }
          const T* src = plane + iy * g.w;
          for (std::int64_t ox = 0; ox < g.out_w; ++ox) {
            const std::int64_t ix = ox + dx;
            dst[ox] = (ix >= 0 && ix < g.w) ? src[ix] : T(0);
          }
        }
      }
    }
  }
}

// Scatter-adds [cin*k*k, out_h*out_w] back onto an image gradient.
template <typename T>
void col2im_add(const T* col, const ConvGeometry& g, T* image) {
  for (std::int64_t c = 0; c < g.cin; ++c) {
    T* plane = image + c * g.h * g.w;
    for (std::int64_t ky = 0; ky < g.k; ++ky) {
      for (std::int64_t kx = 0; kx < g.k; ++kx) {
        const T* row = col + ((c * g.k + ky) * g.k + kx) * g.cols();
        const std::int64_t dy = ky * g.dilation - g.padding;
        const std::int64_t dx = kx * g.dilation - g.padding;
        for (std::int64_t oy = 0; oy < g.out_h; ++oy) {
          const std::int64_t iy = oy + dy;
          if (iy < 0 || iy >= g.h) continue;
          const T* src = row + oy * g.out_w;
          T* dst = plane + iy * g.w;
          for (std::int64_t ox = 0; ox < g.out_w; ++ox) {
            const std::int64_t ix = ox + dx;
            if (ix >= 0 && ix < g.w) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

template <typename T>
void check_bias(const Tensor<T>& bias, std::int64_t cout, const char* op) {
  if (!bias.defined()) return;
  if (bias.shape() != channel_shape(cout)) {
    throw ShapeError(std::string(op) + ": bias shape " + bias.shape().str() +
                     " does not match " + channel_shape(cout).str());
  }
}

}  // namespace

template <typename T>
Tensor<T> conv2d(Tape<T>& tape, const Tensor<T>& input, const Tensor<T>& weight,
                 const Tensor<T>& bias, int padding, int dilation) {
  const Shape is = input.shape();
  const Shape ws = weight.shape();
  if (ws.h != ws.w || ws.h % 2 == 0) {
    throw ShapeError("conv2d: kernel must be square with odd size, got " + ws.str());
  }
  if (dilation < 1) {
    throw ShapeError("conv2d: dilation must be positive, got " + std::to_string(dilation));
  }
  if (padding < 0) {
    throw ShapeError("conv2d: padding must be non-negative, got " + std::to_string(padding));
  }
  if (ws.c != is.c) {
    throw ShapeError("conv2d: input channels " + std::to_string(is.c) +
                     " do not match weight " + ws.str());
  }
  check_bias(bias, ws.n, "conv2d");

  ConvGeometry g{};
  g.cin = is.c;
  g.h = is.h;
  g.w = is.w;
  g.cout = ws.n;
  g.k = ws.h;
  g.padding = padding;
  g.dilation = dilation;
  g.out_h = is.h + 2 * padding - dilation * (g.k - 1);
  g.out_w = is.w + 2 * padding - dilation * (g.k - 1);
  if (g.out_h < 1 || g.out_w < 1) {
    throw ShapeError("conv2d: empty output for input " + is.str() + " and kernel " + ws.str());
  }

  const bool track = tape.wants({&input, &weight, &bias});
  Tensor<T> out = Tensor<T>::zeros(Shape{is.n, g.cout, g.out_h, g.out_w}, track);

  std::vector<T> col(g.pointwise() ? 0 : static_cast<std::size_t>(g.rows() * g.cols()));
  const ConstMatMap<T> w_mat(weight.data().data(), g.cout, g.rows());
  for (std::int64_t n = 0; n < is.n; ++n) {
    const T* image = input.data().data() + n * g.cin * g.h * g.w;
    const T* col_ptr = image;
    if (!g.pointwise()) {
      im2col(image, g, col.data());
      col_ptr = col.data();
    }
    MatMap<T> y(out.mutable_data().data() + n * g.cout * g.cols(), g.cout, g.cols());
    y.noalias() = w_mat * ConstMatMap<T>(col_ptr, g.rows(), g.cols());
    if (bias.defined()) {
      const auto b = bias.data();
      for (std::int64_t co = 0; co < g.cout; ++co) y.row(co).array() += b[co];
    }
  }

  if (track) {
    tape.record({input, weight, bias}, out, [input, weight, bias, out, g]() mutable {
      const auto grad_out = out.grad();
      std::vector<T> col(g.pointwise() ? 0 : static_cast<std::size_t>(g.rows() * g.cols()));
      std::vector<T> dcol(static_cast<std::size_t>(g.rows() * g.cols()));
      const ConstMatMap<T> w_mat(weight.data().data(), g.cout, g.rows());
      const std::int64_t batches = input.shape().n;
      for (std::int64_t n = 0; n < batches; ++n) {
        const ConstMatMap<T> gy(grad_out.data() + n * g.cout * g.cols(), g.cout, g.cols());
        if (weight.requires_grad()) {
          const T* image = input.data().data() + n * g.cin * g.h * g.w;
          const T* col_ptr = image;
          if (!g.pointwise()) {
            im2col(image, g, col.data());
            col_ptr = col.data();
          }
          MatMap<T> gw(weight.ensure_grad().data(), g.cout, g.rows());
          gw.noalias() += gy * ConstMatMap<T>(col_ptr, g.rows(), g.cols()).transpose();
        }
        if (bias.defined() && bias.requires_grad()) {
          auto gb = bias.ensure_grad();
          // Plain loop: Eigen's vectorized sum peels by address alignment,
          // which would make the result depend on where the buffer landed.
          for (std::int64_t co = 0; co < g.cout; ++co) {
            const T* row = grad_out.data() + (n * g.cout + co) * g.cols();
            T acc = 0;
            for (std::int64_t i = 0; i < g.cols(); ++i) acc += row[i];
            gb[co] += acc;
          }
        }
        if (input.requires_grad()) {
          T* gimage = input.ensure_grad().data() + n * g.cin * g.h * g.w;
          if (g.pointwise()) {
            MatMap<T> gx(gimage, g.rows(), g.cols());
            gx.noalias() += w_mat.transpose() * gy;
          } else {
            MatMap<T> dc(dcol.data(), g.rows(), g.cols());
            dc.noalias() = w_mat.transpose() * gy;
            col2im_add(dcol.data(), g, gimage);
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> linear(Tape<T>& tape, const Tensor<T>& input, const Tensor<T>& weight,
                 const Tensor<T>& bias) {
  const Shape ws = weight.shape();
  if (ws.h != 1 || ws.w != 1) {
    throw ShapeError("linear: weight must be [Cout, Cin, 1, 1], got " + ws.str());
  }
  if (ws.c != input.shape().c) {
    throw ShapeError("linear: input channels " + std::to_string(input.shape().c) +
                     " do not match weight " + ws.str());
  }
  if (!bias.defined()) throw ShapeError("linear: bias is required");
  check_bias(bias, ws.n, "linear");
  return conv2d(tape, input, weight, bias, 0, 1);
}

template Tensor<float> conv2d(Tape<float>&, const Tensor<float>&, const Tensor<float>&,
                              const Tensor<float>&, int, int);
template Tensor<double> conv2d(Tape<double>&, const Tensor<double>&, const Tensor<double>&,
                               const Tensor<double>&, int, int);
template Tensor<float> linear(Tape<float>&, const Tensor<float>&, const Tensor<float>&,
                              const Tensor<float>&);
template Tensor<double> linear(Tape<double>&, const Tensor<double>&, const Tensor<double>&,
                               const Tensor<double>&);

}  // namespace igaf::ops

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mar/linalg.hpp"

namespace mar {

/// An ordered sequence of T >= 1 finite m x n matrices.
class MatrixSeries {
public:
    MatrixSeries(Index m, Index n, std::vector<Mat> data) : m_(m), n_(n), data_(std::move(data)) {
        if (m < 1 || n < 1) throw dimension_error("MatrixSeries: shape must be positive");
        if (data_.empty()) throw data_error("MatrixSeries: at least one observation is required");
        for (std::size_t t = 0; t < data_.size(); ++t) {
            if (data_[t].rows() != m || data_[t].cols() != n)
                throw dimension_error("MatrixSeries: element " + std::to_string(t) + " has shape " +
                                      shape_str(data_[t]) + ", expected " + std::to_string(m) +
                                      "x" + std::to_string(n));
            require_finite(data_[t], "MatrixSeries");
        }
    }

    /// Builds a series from a d x T matrix whose columns are vec(X_t).
    static MatrixSeries from_columns(const Mat& cols, Index m, Index n) {
        if (cols.rows() != m * n)
            throw dimension_error("MatrixSeries::from_columns: rows " + std::to_string(cols.rows()) +
                                  " != m*n = " + std::to_string(m * n));
        std::vector<Mat> data;
        data.reserve(static_cast<std::size_t>(cols.cols()));
        for (Index t = 0; t < cols.cols(); ++t) data.push_back(unvec(cols.col(t), m, n));
        return MatrixSeries(m, n, std::move(data));
    }

    Index m() const noexcept { return m_; }
    Index n() const noexcept { return n_; }
    Index dim() const noexcept { return m_ * n_; }
    std::size_t size() const noexcept { return data_.size(); }
    const Mat& operator[](std::size_t t) const { return data_[t]; }
    const std::vector<Mat>& data() const noexcept { return data_; }

    Mat mean() const {
        Mat mu = Mat::Zero(m_, n_);
        for (const auto& x : data_) mu += x;
        return mu / static_cast<double>(data_.size());
    }

    MatrixSeries centered() const { return minus(mean()); }

    MatrixSeries minus(const Mat& mu) const {
        std::vector<Mat> out;
        out.reserve(data_.size());
        for (const auto& x : data_) out.push_back(x - mu);
        return MatrixSeries(m_, n_, std::move(out));
    }

    /// d x T matrix with vec(X_t) in column t.
    Mat as_columns() const {
        Mat out(dim(), static_cast<Index>(data_.size()));
        for (std::size_t t = 0; t < data_.size(); ++t) out.col(static_cast<Index>(t)) = vec(data_[t]);
        return out;
    }

    /// Observations [first, first + count).
    MatrixSeries slice(std::size_t first, std::size_t count) const {
        if (first + count > data_.size() || count == 0)
            throw dimension_error("MatrixSeries::slice: range out of bounds");
        return MatrixSeries(m_, n_, std::vector<Mat>(data_.begin() + static_cast<std::ptrdiff_t>(first),
                                                     data_.begin() + static_cast<std::ptrdiff_t>(first + count)));
    }

    MatrixSeries concat(const MatrixSeries& other) const {
        if (other.m_ != m_ || other.n_ != n_) throw dimension_error("MatrixSeries::concat: shape mismatch");
        std::vector<Mat> out = data_;
        out.insert(out.end(), other.data_.begin(), other.data_.end());
        return MatrixSeries(m_, n_, std::move(out));
    }

private:
    Index m_;
    Index n_;
    std::vector<Mat> data_;
};

} // namespace mar

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "weaklab/error.hpp"

namespace weaklab {

/// Dense row-major 2D raster of a single value per pixel.
template <typename T>
struct Grid {
    int height = 0;
    int width = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(int h, int w, T fill = T{}) : height(h), width(w), data(checked_size(h, w), fill) {}

    std::size_t size() const noexcept { return data.size(); }
    bool empty() const noexcept { return data.empty(); }

    T& operator()(int row, int col) { return data[index(row, col)]; }
    const T& operator()(int row, int col) const { return data[index(row, col)]; }

    std::size_t index(int row, int col) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(col);
    }

    bool contains(int row, int col) const noexcept {
        return row >= 0 && row < height && col >= 0 && col < width;
    }

    std::span<T> row(int r) { return {data.data() + index(r, 0), static_cast<std::size_t>(width)}; }
    std::span<const T> row(int r) const {
        return {data.data() + index(r, 0), static_cast<std::size_t>(width)};
    }

    bool same_shape(const auto& other) const noexcept {
        return height == other.height && width == other.width;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static std::size_t checked_size(int h, int w) {
        if (h < 0 || w < 0) throw InvalidInput("grid dimensions must be non-negative");
        return static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    }
};

using Mask = Grid<std::uint8_t>;

/// Interleaved multi-channel image, intensities normalized to [0, 1].
struct Image2D {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<float> data;

    Image2D() = default;
    Image2D(int h, int w, int c, float fill = 0.0f);

    float& at(int row, int col, int ch = 0) { return data[offset(row, col, ch)]; }
    float at(int row, int col, int ch = 0) const { return data[offset(row, col, ch)]; }

    std::size_t offset(int row, int col, int ch = 0) const noexcept {
        return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(col)) *
                   static_cast<std::size_t>(channels) +
               static_cast<std::size_t>(ch);
    }

    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }

    friend bool operator==(const Image2D&, const Image2D&) = default;
};

/// z-stack of equally sized slices.
struct ImageStack {
    int depth = 0;
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<float> data;  // slice-major, each slice laid out like Image2D

    ImageStack() = default;
    ImageStack(int d, int h, int w, int c, float fill = 0.0f);

    static ImageStack from_slices(std::span<const Image2D> slices);

    float at(int z, int row, int col, int ch = 0) const {
        return data[slice_size() * static_cast<std::size_t>(z) +
                    (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(col)) *
                        static_cast<std::size_t>(channels) +
                    static_cast<std::size_t>(ch)];
    }
    std::size_t slice_size() const noexcept {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
               static_cast<std::size_t>(channels);
    }
    Image2D slice(int z) const;
};

}  // namespace weaklab

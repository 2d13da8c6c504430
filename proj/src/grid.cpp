#include "weaklab/grid.hpp"

#include <string>

namespace weaklab {

namespace {
std::size_t element_count(int h, int w, int c) {
    if (h < 0 || w < 0 || c <= 0) throw InvalidInput("image dimensions must be non-negative with at least one channel");
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c);
}
}  // namespace

Image2D::Image2D(int h, int w, int c, float fill)
    : height(h), width(w), channels(c), data(element_count(h, w, c), fill) {}

ImageStack::ImageStack(int d, int h, int w, int c, float fill)
    : depth(d), height(h), width(w), channels(c) {
    if (d < 0) throw InvalidInput("stack depth must be non-negative");
    data.assign(element_count(h, w, c) * static_cast<std::size_t>(d), fill);
}

ImageStack ImageStack::from_slices(std::span<const Image2D> slices) {
    if (slices.empty()) throw InvalidInput("image stack needs at least one slice");
    const auto& first = slices.front();
    ImageStack stack(static_cast<int>(slices.size()), first.height, first.width, first.channels);
    for (std::size_t z = 0; z < slices.size(); ++z) {
        const auto& s = slices[z];
        if (s.height != first.height || s.width != first.width || s.channels != first.channels)
            throw InvalidInput("slice " + std::to_string(z) + " does not match the shape of slice 0");
        std::copy(s.data.begin(), s.data.end(),
                  stack.data.begin() + static_cast<std::ptrdiff_t>(z * stack.slice_size()));
    }
    return stack;
}

Image2D ImageStack::slice(int z) const {
    Image2D out(height, width, channels);
    const auto begin = data.begin() + static_cast<std::ptrdiff_t>(slice_size() * static_cast<std::size_t>(z));
    std::copy(begin, begin + static_cast<std::ptrdiff_t>(slice_size()), out.data.begin());
    return out;
}

}  // namespace weaklab

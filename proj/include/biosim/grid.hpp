#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace biosim {

struct CellIndex {
    int row = 0;
    int col = 0;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
    friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Dense row-major 2-D container.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int rows, int cols, const T& fill = T{})
        : rows_(rows), cols_(cols), data_(checked_size(rows, cols), fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    bool contains(int r, int c) const { return r >= 0 && c >= 0 && r < rows_ && c < cols_; }
    bool contains(CellIndex i) const { return contains(i.row, i.col); }

    T& operator()(int r, int c) { return data_[index(r, c)]; }
    const T& operator()(int r, int c) const { return data_[index(r, c)]; }
    T& operator[](CellIndex i) { return (*this)(i.row, i.col); }
    const T& operator[](CellIndex i) const { return (*this)(i.row, i.col); }

    T& at(int r, int c) {
        if (!contains(r, c)) throw std::out_of_range("grid index out of range");
        return (*this)(r, c);
    }
    const T& at(int r, int c) const {
        if (!contains(r, c)) throw std::out_of_range("grid index out of range");
        return (*this)(r, c);
    }

    std::size_t index(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
    }
    CellIndex cell(std::size_t flat) const {
        return {static_cast<int>(flat / static_cast<std::size_t>(cols_)),
                static_cast<int>(flat % static_cast<std::size_t>(cols_))};
    }

    std::span<T> values() { return data_; }
    std::span<const T> values() const { return data_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static std::size_t checked_size(int rows, int cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative grid dimensions");
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

/// Boolean cell mask; 1 = set.
using Mask = Grid<std::uint8_t>;

inline std::size_t count_set(const Mask& m) {
    std::size_t n = 0;
    for (auto v : m.values()) n += v != 0;
    return n;
}

}  // namespace biosim

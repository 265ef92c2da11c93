#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

namespace compact4 {

// Affine expression  sum_i w_i * x_i + c  over a vector of unknowns x.
//
// The discrete operator kernels are templated on the value type, so the same
// formula evaluates plain numbers (direct application) and LinearForms
// (stencil emission / system assembly).  std::map keeps entry order — and
// therefore assembled-matrix entry order — deterministic.
class LinearForm {
public:
    LinearForm() = default;

    static LinearForm unknown(int index) {
        LinearForm f;
        f.w_[index] = 1.0;
        return f;
    }

    static LinearForm constant(double value) {
        LinearForm f;
        f.c_ = value;
        return f;
    }

    const std::map<int, double>& weights() const { return w_; }
    double shift() const { return c_; }

    double eval(const std::vector<double>& x) const {
        double s = c_;
        for (const auto& [i, w] : w_) s += w * x[static_cast<std::size_t>(i)];
        return s;
    }

    LinearForm& operator+=(const LinearForm& o) {
        for (const auto& [i, w] : o.w_) w_[i] += w;
        c_ += o.c_;
        return *this;
    }

    LinearForm& operator-=(const LinearForm& o) {
        for (const auto& [i, w] : o.w_) w_[i] -= w;
        c_ -= o.c_;
        return *this;
    }

    LinearForm& operator*=(double s) {
        for (auto& [i, w] : w_) w *= s;
        c_ *= s;
        return *this;
    }

    friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
    friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
    friend LinearForm operator*(double s, LinearForm a) { return a *= s; }
    friend LinearForm operator*(LinearForm a, double s) { return a *= s; }
    friend LinearForm operator/(LinearForm a, double s) { return a *= (1.0 / s); }
    friend LinearForm operator-(const LinearForm& a) {
        LinearForm r;
        r -= a;
        return r;
    }

private:
    std::map<int, double> w_;
    double c_ = 0.0;
};

// One emitted operator row:  (Op v)_j = sum_i weights_i * v_i + rhs_shift,
// where rhs_shift collects the contribution of known boundary data.
struct StencilRow {
    std::map<int, double> weights;
    double rhs_shift = 0.0;
};

inline StencilRow to_stencil_row(const LinearForm& f) {
    return {f.weights(), f.shift()};
}

}  // namespace compact4

// Copyright 2026 The mchain authors
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

#include "mchain/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "mchain/errors.hpp"

namespace mchain {

namespace {

void require(bool cond, const char *msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

StateVector::StateVector(std::size_t dim) : amps_(dim) {
    require(dim > 0, "StateVector: dimension must be positive");
}

StateVector::StateVector(std::size_t dim, std::vector<Complex> amps) : amps_(std::move(amps)) {
    require(dim > 0, "StateVector: dimension must be positive");
    require(amps_.size() == dim, "StateVector: amplitude count does not match dimension");
    check_finite();
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    require(index < dim, "StateVector::basis: index out of range");
    StateVector v(dim);
    v.amps_[index] = Complex{1.0, 0.0};
    return v;
}

void StateVector::check_finite() const {
    for (const Complex &a : amps_) {
        if (!is_finite(a)) {
            throw std::invalid_argument("StateVector: non-finite amplitude");
        }
    }
}

StateVector &StateVector::operator+=(const StateVector &other) {
    require(dim() == other.dim(), "StateVector: dimension mismatch in +=");
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] += other.amps_[i];
    }
    return *this;
}

StateVector &StateVector::operator-=(const StateVector &other) {
    require(dim() == other.dim(), "StateVector: dimension mismatch in -=");
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] -= other.amps_[i];
    }
    return *this;
}

StateVector &StateVector::operator*=(Complex scale) {
    for (Complex &a : amps_) {
        a *= scale;
    }
    return *this;
}

StateVector operator+(StateVector a, const StateVector &b) {
    a += b;
    return a;
}

StateVector operator-(StateVector a, const StateVector &b) {
    a -= b;
    return a;
}

StateVector operator*(Complex scale, StateVector v) {
    v *= scale;
    return v;
}

Operator::Operator(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {
    require(rows > 0 && cols > 0, "Operator: dimensions must be positive");
}

Operator::Operator(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require(rows > 0 && cols > 0, "Operator: dimensions must be positive");
    require(entries_.size() == rows * cols, "Operator: entry count does not match dimensions");
    check_finite();
}

Operator Operator::identity(std::size_t n) {
    Operator m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Complex{1.0, 0.0};
    }
    return m;
}

Operator Operator::zero(std::size_t rows, std::size_t cols) {
    return Operator(rows, cols);
}

void Operator::check_finite() const {
    for (const Complex &e : entries_) {
        if (!is_finite(e)) {
            throw std::invalid_argument("Operator: non-finite entry");
        }
    }
}

Operator &Operator::operator+=(const Operator &other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "Operator: shape mismatch in +=");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

Operator &Operator::operator-=(const Operator &other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "Operator: shape mismatch in -=");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

Operator &Operator::operator*=(Complex scale) {
    for (Complex &e : entries_) {
        e *= scale;
    }
    return *this;
}

Operator operator+(Operator a, const Operator &b) {
    a += b;
    return a;
}

Operator operator-(Operator a, const Operator &b) {
    a -= b;
    return a;
}

Operator operator*(Complex scale, Operator m) {
    m *= scale;
    return m;
}

Operator operator*(const Operator &a, const Operator &b) {
    require(a.cols() == b.rows(), "Operator: shape mismatch in product");
    Operator out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    StateVector out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return out;
}

Operator tensor(const Operator &a, const Operator &b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) {
                continue;
            }
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

StateVector apply(const Operator &m, const StateVector &v) {
    require(m.cols() == v.dim(), "apply: operator/vector dimension mismatch");
    StateVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc += m(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

Operator adjoint(const Operator &m) {
    Operator out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = std::conj(m(i, j));
        }
    }
    return out;
}

Complex inner(const StateVector &u, const StateVector &v) {
    require(u.dim() == v.dim(), "inner: dimension mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < u.dim(); ++i) {
        acc += std::conj(u[i]) * v[i];
    }
    return acc;
}

double norm_squared(const StateVector &v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        acc += std::norm(v[i]);
    }
    return acc;
}

double norm(const StateVector &v) {
    return std::sqrt(norm_squared(v));
}

StateVector normalize(const StateVector &v, double zero_tol) {
    const double n = norm(v);
    if (n <= zero_tol) {
        throw ZeroStateError("normalize: state vector is numerically zero");
    }
    StateVector out = v;
    out *= Complex{1.0 / n, 0.0};
    return out;
}

Operator projector_onto(const StateVector &v, double tol) {
    require(std::abs(norm(v) - 1.0) <= tol, "projector_onto: vector is not unit norm");
    Operator out(v.dim(), v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        for (std::size_t j = 0; j < v.dim(); ++j) {
            out(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return out;
}

Complex trace(const Operator &m) {
    require(m.rows() == m.cols(), "trace: operator is not square");
    Complex acc{};
    for (std::size_t i = 0; i < m.rows(); ++i) {
        acc += m(i, i);
    }
    return acc;
}

bool approx_eq(Complex a, Complex b, double tol) {
    return std::abs(a - b) <= tol;
}

bool approx_eq(const StateVector &a, const StateVector &b, double tol) {
    if (a.dim() != b.dim()) {
        return false;
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (!approx_eq(a[i], b[i], tol)) {
            return false;
        }
    }
    return true;
}

bool approx_eq(const Operator &a, const Operator &b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        if (!approx_eq(a.entries()[i], b.entries()[i], tol)) {
            return false;
        }
    }
    return true;
}

double max_abs(const Operator &m) {
    double mx = 0.0;
    for (const Complex &e : m.entries()) {
        mx = std::max(mx, std::abs(e));
    }
    return mx;
}

double max_abs(const StateVector &v) {
    double mx = 0.0;
    for (const Complex &a : v.amplitudes()) {
        mx = std::max(mx, std::abs(a));
    }
    return mx;
}

bool equal_up_to_phase(const StateVector &a, const StateVector &b, double tol) {
    if (a.dim() != b.dim()) {
        return false;
    }
    // The candidate phase is fixed by the largest component of b.
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < b.dim(); ++i) {
        const double mag = std::abs(b[i]);
        if (mag > best) {
            best = mag;
            pivot = i;
        }
    }
    if (best <= tol) {
        return max_abs(a) <= tol;
    }
    if (std::abs(a[pivot]) <= tol && std::abs(b[pivot]) > tol) {
        return false;
    }
    const Complex phase = a[pivot] / b[pivot];
    if (std::abs(std::abs(phase) - 1.0) > tol) {
        return false;
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (!approx_eq(a[i], phase * b[i], tol)) {
            return false;
        }
    }
    return true;
}

}  // namespace mchain

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

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mchain {

using Complex = std::complex<double>;

/// Default tolerance for approximate equality of amplitudes and operators.
inline constexpr double kDefaultTol = 1e-9;
/// Vectors with norm at or below this are treated as numerically zero.
inline constexpr double kZeroTol = 1e-9;

/// Dense complex amplitude vector over a labeled composite space.
/// All entries must be finite; NaN/Inf inputs are rejected on construction.
class StateVector {
  public:
    explicit StateVector(std::size_t dim);
    StateVector(std::size_t dim, std::vector<Complex> amps);

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }
    Complex &operator[](std::size_t i) { return amps_[i]; }
    const std::vector<Complex> &amplitudes() const { return amps_; }

    StateVector &operator+=(const StateVector &other);
    StateVector &operator-=(const StateVector &other);
    StateVector &operator*=(Complex scale);

    /// Re-validates finiteness after in-place mutation through operator[].
    void check_finite() const;

  private:
    std::vector<Complex> amps_;
};

StateVector operator+(StateVector a, const StateVector &b);
StateVector operator-(StateVector a, const StateVector &b);
StateVector operator*(Complex scale, StateVector v);

/// Dense row-major complex matrix.
class Operator {
  public:
    Operator(std::size_t rows, std::size_t cols);
    Operator(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static Operator identity(std::size_t n);
    static Operator zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const std::vector<Complex> &entries() const { return entries_; }

    Operator &operator+=(const Operator &other);
    Operator &operator-=(const Operator &other);
    Operator &operator*=(Complex scale);

    void check_finite() const;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> entries_;
};

Operator operator+(Operator a, const Operator &b);
Operator operator-(Operator a, const Operator &b);
Operator operator*(Complex scale, Operator m);
Operator operator*(const Operator &a, const Operator &b);

/// Tensor product of states. Row-major convention:
/// result[i * b.dim() + j] = a[i] * b[j].
StateVector tensor(const StateVector &a, const StateVector &b);

/// Kronecker product with the same row-major block convention, so that
/// apply(tensor(A, B), tensor(u, v)) == tensor(apply(A, u), apply(B, v)).
Operator tensor(const Operator &a, const Operator &b);

/// Matrix-vector product. Rejects dimension mismatches.
StateVector apply(const Operator &m, const StateVector &v);

/// Conjugate transpose.
Operator adjoint(const Operator &m);

/// Inner product, conjugate-linear in the first argument.
Complex inner(const StateVector &u, const StateVector &v);

double norm_squared(const StateVector &v);
double norm(const StateVector &v);

/// v / norm(v). Throws ZeroStateError when norm(v) <= zero_tol.
StateVector normalize(const StateVector &v, double zero_tol = kZeroTol);

/// Rank-1 projector |v><v|. Requires v to be a unit vector within tol.
Operator projector_onto(const StateVector &v, double tol = kDefaultTol);

Complex trace(const Operator &m);

bool approx_eq(Complex a, Complex b, double tol = kDefaultTol);
bool approx_eq(const StateVector &a, const StateVector &b, double tol = kDefaultTol);
bool approx_eq(const Operator &a, const Operator &b, double tol = kDefaultTol);

/// Largest entrywise magnitude, used for "operator is numerically zero" checks.
double max_abs(const Operator &m);
double max_abs(const StateVector &v);

/// True iff a == phase * b for some unit complex phase, within tol.
/// Comparisons against paper states are phase-insensitive because branch
/// sign functions are not observable.
bool equal_up_to_phase(const StateVector &a, const StateVector &b, double tol = kDefaultTol);

}  // namespace mchain

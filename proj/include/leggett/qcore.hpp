#pragma once

// Dense complex linear algebra for qubit registers: Pauli observables,
// GHZ states, partial traces and the brute-force trace correlator that
// every closed-form expression in this library is checked against.
//
// Party indices are 1-based throughout the public API (party 1 is the
// leftmost Kronecker factor, i.e. the most significant basis bit).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace leggett {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kUnitTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr int kMaxParties = 12;

/// Plain 3-vector, not necessarily normalized.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    [[nodiscard]] double norm() const;
    [[nodiscard]] Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Direction on the Bloch/Poincare sphere. Always unit length to kUnitTol.
class UnitVector3 {
public:
    UnitVector3() : v_{0.0, 0.0, 1.0} {}

    /// Throws ValidationError naming the norm when |v| deviates from 1.
    static UnitVector3 make(double x, double y, double z);
    static UnitVector3 make(const Vec3& v) { return make(v.x, v.y, v.z); }
    /// Divides by the norm; throws on a zero vector.
    static UnitVector3 normalized(const Vec3& v);

    [[nodiscard]] double x() const { return v_.x; }
    [[nodiscard]] double y() const { return v_.y; }
    [[nodiscard]] double z() const { return v_.z; }
    [[nodiscard]] const Vec3& vec() const { return v_; }
    [[nodiscard]] double dot(const UnitVector3& o) const { return v_.dot(o.v_); }
    [[nodiscard]] double dot(const Vec3& o) const { return v_.dot(o); }
    UnitVector3 operator-() const { return UnitVector3(-v_); }

    friend bool operator==(const UnitVector3&, const UnitVector3&) = default;

private:
    explicit UnitVector3(const Vec3& v) : v_(v) {}
    Vec3 v_;
};

/// Polar angle in [0, pi], azimuth normalized into [0, 2pi).
class SphericalAngles {
public:
    /// Throws ValidationError if the polar angle is outside [0, pi] or
    /// either angle is non-finite. The azimuth is reduced mod 2pi.
    static SphericalAngles make(double polar, double azimuth);

    [[nodiscard]] double polar() const { return polar_; }
    [[nodiscard]] double azimuth() const { return azimuth_; }

private:
    SphericalAngles(double p, double a) : polar_(p), azimuth_(a) {}
    double polar_;
    double azimuth_;
};

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] std::span<const Complex> entries() const { return data_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] Complex trace() const;
    [[nodiscard]] ComplexMatrix adjoint() const;
    /// Element-wise comparison with absolute tolerance; false on shape mismatch.
    [[nodiscard]] bool approx_equal(const ComplexMatrix& other, double tol) const;
    /// max |M - M^dagger| over all entries.
    [[nodiscard]] double hermitian_residual() const;

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Hermitian, unit-trace, positive semidefinite 2^N x 2^N matrix.
class DensityMatrix {
public:
    enum class PsdCheck { Auto, Always, Never };

    /// Validates hermiticity and trace to 1e-12. The eigenvalue check runs
    /// for dim <= 64 under Auto (every dim <= 256 under Always).
    static DensityMatrix make(ComplexMatrix m, PsdCheck psd = PsdCheck::Auto);

    [[nodiscard]] std::size_t dim() const { return m_.rows(); }
    [[nodiscard]] int parties() const { return parties_; }
    [[nodiscard]] const ComplexMatrix& matrix() const { return m_; }

private:
    DensityMatrix(ComplexMatrix m, int n) : m_(std::move(m)), parties_(n) {}
    ComplexMatrix m_;
    int parties_;
};

/// Smallest eigenvalue of a Hermitian matrix via dense diagonalization.
double min_eigenvalue(const ComplexMatrix& hermitian);

/// sigma . n for a unit n.
ComplexMatrix pauli_dot(const UnitVector3& n);
/// sigma . v for an arbitrary 3-vector (linear extension).
ComplexMatrix pauli_dot(const Vec3& v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// (|0..0> + |1..1>)/sqrt 2 as a density matrix; 2 <= n <= 12.
DensityMatrix ghz_density(int n);

/// Traces out one party (1-based).
DensityMatrix partial_trace(const DensityMatrix& rho, int party);

/// Tr[rho (sigma.n_1 x ... x sigma.n_N)], imaginary residue asserted away.
double correlation_bruteforce(const DensityMatrix& rho, std::span<const UnitVector3> dirs);

/// Same trace with arbitrary (non-unit) vectors; multilinear in each slot.
double correlation_multilinear(const DensityMatrix& rho, std::span<const Vec3> dirs);

}  // namespace leggett

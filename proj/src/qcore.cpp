#include "leggett/qcore.hpp"

#include "leggett/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace leggett {

namespace {

constexpr double kImagResidueTol = 1e-10;

int log2_exact(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return (std::size_t{1} << n) == dim ? n : -1;
}

// Inserts `bit` at position `pos` counted from the least significant end.
std::size_t insert_bit(std::size_t value, int pos, std::size_t bit) {
    const std::size_t low = value & ((std::size_t{1} << pos) - 1);
    const std::size_t high = value >> pos;
    return (high << (pos + 1)) | (bit << pos) | low;
}

}  // namespace

double Vec3::norm() const { return std::sqrt(dot(*this)); }

UnitVector3 UnitVector3::make(double x, double y, double z) {
    const Vec3 v{x, y, z};
    const double n = v.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitTol) {
        std::ostringstream os;
        os.precision(17);
        os << "direction is not a unit vector: |n| = " << n;
        throw ValidationError(os.str());
    }
    return UnitVector3(v);
}

UnitVector3 UnitVector3::normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ValidationError("cannot normalize a zero or non-finite vector");
    }
    return UnitVector3((1.0 / n) * v);
}

SphericalAngles SphericalAngles::make(double polar, double azimuth) {
    if (!std::isfinite(polar) || !std::isfinite(azimuth)) {
        throw ValidationError("spherical angles must be finite");
    }
    if (polar < 0.0 || polar > std::numbers::pi) {
        std::ostringstream os;
        os << "polar angle " << polar << " outside [0, pi]";
        throw ValidationError(os.str());
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(azimuth, two_pi);
    if (a < 0.0) {
        a += two_pi;
    }
    if (a >= two_pi) {
        a = 0.0;
    }
    return SphericalAngles(polar, a);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw ValidationError("matrix entry count does not match rows*cols");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

bool ComplexMatrix::approx_equal(const ComplexMatrix& other, double tol) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        return false;
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (std::abs(data_[i] - other.data_[i]) > tol) {
            return false;
        }
    }
    return true;
}

double ComplexMatrix::hermitian_residual() const {
    if (rows_ != cols_) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = r; c < cols_; ++c) {
            worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return worst;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ValidationError("matrix product shape mismatch");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
    const auto n = static_cast<Eigen::Index>(hermitian.rows());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = hermitian(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::make(ComplexMatrix m, PsdCheck psd) {
    if (m.rows() != m.cols()) {
        throw ValidationError("density matrix must be square");
    }
    const int n = log2_exact(m.rows());
    if (n < 1) {
        throw ValidationError("density matrix dimension must be a power of two >= 2");
    }
    if (n > kMaxParties) {
        throw CapacityError("density matrix exceeds 12 qubits");
    }
    const double herm = m.hermitian_residual();
    if (herm > kHermitianTol) {
        std::ostringstream os;
        os << "density matrix not Hermitian: max |M - M^dagger| = " << herm;
        throw ValidationError(os.str());
    }
    const Complex tr = m.trace();
    if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTol) {
        std::ostringstream os;
        os.precision(17);
        os << "density matrix trace " << tr.real() << " differs from 1";
        throw ValidationError(os.str());
    }
    const bool run_psd = psd == PsdCheck::Always ? m.rows() <= 256
                         : psd == PsdCheck::Auto ? m.rows() <= 64
                                                 : false;
    if (run_psd) {
        const double lo = min_eigenvalue(m);
        if (lo < -kPsdTol) {
            std::ostringstream os;
            os << "density matrix has negative eigenvalue " << lo;
            throw ValidationError(os.str());
        }
    }
    return DensityMatrix(std::move(m), n);
}

ComplexMatrix pauli_dot(const Vec3& v) {
    ComplexMatrix m(2, 2);
    m(0, 0) = v.z;
    m(0, 1) = Complex{v.x, -v.y};
    m(1, 0) = Complex{v.x, v.y};
    m(1, 1) = -v.z;
    return m;
}

ComplexMatrix pauli_dot(const UnitVector3& n) { return pauli_dot(n.vec()); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

DensityMatrix ghz_density(int n) {
    if (n < 2 || n > kMaxParties) {
        std::ostringstream os;
        os << "GHZ party count " << n << " outside [2, " << kMaxParties << "]";
        throw CapacityError(os.str());
    }
    const std::size_t dim = std::size_t{1} << n;
    ComplexMatrix m(dim, dim);
    m(0, 0) = 0.5;
    m(0, dim - 1) = 0.5;
    m(dim - 1, 0) = 0.5;
    m(dim - 1, dim - 1) = 0.5;
    return DensityMatrix::make(std::move(m), DensityMatrix::PsdCheck::Never);
}

DensityMatrix partial_trace(const DensityMatrix& rho, int party) {
    const int n = rho.parties();
    if (party < 1 || party > n) {
        std::ostringstream os;
        os << "party " << party << " outside [1, " << n << "]";
        throw ValidationError(os.str());
    }
    if (n < 2) {
        throw ValidationError("cannot trace out the only party");
    }
    const int pos = n - party;
    const std::size_t out_dim = rho.dim() / 2;
    const ComplexMatrix& m = rho.matrix();
    ComplexMatrix out(out_dim, out_dim);
    for (std::size_t r = 0; r < out_dim; ++r) {
        for (std::size_t c = 0; c < out_dim; ++c) {
            Complex acc = 0.0;
            for (std::size_t b = 0; b < 2; ++b) {
                acc += m(insert_bit(r, pos, b), insert_bit(c, pos, b));
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix::make(std::move(out), DensityMatrix::PsdCheck::Never);
}

double correlation_multilinear(const DensityMatrix& rho, std::span<const Vec3> dirs) {
    const int n = rho.parties();
    if (static_cast<int>(dirs.size()) != n) {
        std::ostringstream os;
        os << "correlation needs " << n << " directions, got " << dirs.size();
        throw ValidationError(os.str());
    }
    std::vector<ComplexMatrix> local;
    local.reserve(dirs.size());
    double scale = 1.0;
    for (const Vec3& v : dirs) {
        local.push_back(pauli_dot(v));
        scale *= std::max(1.0, v.norm());
    }
    // Tr[rho O] = sum_{r,c} rho(r,c) O(c,r), O(c,r) = prod_j P_j(c_j, r_j).
    const ComplexMatrix& m = rho.matrix();
    const std::size_t dim = rho.dim();
    Complex acc = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const Complex w = m(r, c);
            if (w == Complex{}) {
                continue;
            }
            Complex term = w;
            for (int j = 0; j < n; ++j) {
                const int shift = n - 1 - j;
                term *= local[static_cast<std::size_t>(j)]((c >> shift) & 1U, (r >> shift) & 1U);
            }
            acc += term;
        }
    }
    if (std::abs(acc.imag()) > kImagResidueTol * scale) {
        std::ostringstream os;
        os << "imaginary residue " << acc.imag() << " in correlation trace (non-Hermitian input?)";
        throw ValidationError(os.str());
    }
    return acc.real();
}

double correlation_bruteforce(const DensityMatrix& rho, std::span<const UnitVector3> dirs) {
    std::vector<Vec3> raw;
    raw.reserve(dirs.size());
    for (const auto& d : dirs) {
        raw.push_back(d.vec());
    }
    return correlation_multilinear(rho, raw);
}

}  // namespace leggett

#ifndef FSLAB_TYPES_HPP
#define FSLAB_TYPES_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fslab
{

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Linear functional on C^n acting by l(y) = sum_i a_i y_i (no conjugation).
struct Functional {
    CVec coeffs;

    cplx operator()(const CVec &y) const;
    std::size_t dim() const { return static_cast<std::size_t>(coeffs.size()); }
};

// Error hierarchy. Every failure the library reports is one of these.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
  public:
    using Error::Error;
};

class InvalidArgument : public Error
{
  public:
    using Error::Error;
};

// A point fell outside the image g(D) of a region function. Carries |g^{-1}(w)|.
class OutsideRegion : public Error
{
  public:
    OutsideRegion(const std::string &what, double modulus) : Error(what), modulus_(modulus) {}
    double modulus() const { return modulus_; }

  private:
    double modulus_;
};

class Resonance : public Error
{
  public:
    Resonance(const std::string &what, cplx combination) : Error(what), combination_(combination) {}
    cplx combination() const { return combination_; }

  private:
    cplx combination_;
};

class NotConverged : public Error
{
  public:
    using Error::Error;
};

class PreconditionFailed : public Error
{
  public:
    using Error::Error;
};

inline void require_dim(std::size_t expected, std::size_t got, const char *what)
{
    if (expected != got) {
        throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(expected)
                                + ", got " + std::to_string(got));
    }
}

} // namespace fslab

#endif

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace rbm {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Error classes map onto CLI exit codes.
enum class ErrorClass { validation = 2, numeric = 3, truncation = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& msg)
        : std::runtime_error(msg), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }

private:
    ErrorClass cls_;
};

enum class ModelDefect {
    covariance_not_spd,
    reflection_not_completely_s,
    drift_not_positive,
    start_outside_quadrant,
    cone_angles_out_of_range,
};

class ValidationError : public Error {
public:
    ValidationError(ModelDefect defect, const std::string& msg)
        : Error(ErrorClass::validation, msg), defect_(defect) {}
    ModelDefect defect() const { return defect_; }

private:
    ModelDefect defect_;
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg)
        : Error(ErrorClass::numeric, msg) {}
};

class TruncationError : public Error {
public:
    explicit TruncationError(const std::string& msg)
        : Error(ErrorClass::truncation, msg) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    Mat2() = default;
    Mat2(double m11, double m12, double m21, double m22)
        : a11(m11), a12(m12), a21(m21), a22(m22) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a11 * a22 - a12 * a21; }

    Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    Mat2 transpose() const { return {a11, a21, a12, a22}; }

    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
};

// Mean and standard error of a scalar or complex Monte Carlo estimate.
struct PhiValue {
    cd value{0.0, 0.0};
    double se = 0.0;
};

}  // namespace rbm
